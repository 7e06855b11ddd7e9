#include "gait/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "gait/csv.hpp"

namespace gait {

namespace fs = std::filesystem;

namespace {

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw GaitError("cannot write file: " + path.string());
    out << text;
}

void write_json(const fs::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

Json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw GaitError("cannot open file: " + path.string());
    Json j;
    in >> j;
    return j;
}

}  // namespace

Json metrics_to_json(const MetricsReport& report) {
    Json folds = Json::array();
    for (const auto& fm : report.folds) {
        Json f;
        f["accuracy"] = fm.accuracy;
        f["f1_macro"] = fm.f1_macro;
        f["sensitivity"] = fm.sensitivity ? Json(*fm.sensitivity) : Json(nullptr);
        f["specificity"] = fm.specificity ? Json(*fm.specificity) : Json(nullptr);
        f["confusion"] = {{"tp", fm.confusion.tp},
                          {"fp", fm.confusion.fp},
                          {"tn", fm.confusion.tn},
                          {"fn", fm.confusion.fn}};
        folds.push_back(f);
    }
    Json mean;
    mean["accuracy"] = report.accuracy;
    mean["f1_macro"] = report.f1_macro;
    mean["sensitivity"] = report.sensitivity ? Json(*report.sensitivity) : Json(nullptr);
    mean["specificity"] = report.specificity ? Json(*report.specificity) : Json(nullptr);
    return Json{{"folds", folds}, {"mean", mean}};
}

PipelineConfig config_from_json(const Json& j) {
    PipelineConfig c;
    if (j.contains("paths")) {
        const auto& p = j.at("paths");
        c.trajectories_csv = p.value("trajectories", c.trajectories_csv);
        c.scores_csv = p.value("scores", c.scores_csv);
        c.labels_csv = p.value("labels", c.labels_csv);
        c.out_dir = p.value("out", c.out_dir);
    }
    c.frame_rate = j.value("frame_rate", c.frame_rate);
    if (j.contains("synth")) {
        const auto& s = j.at("synth");
        c.synth.enabled = s.value("enabled", c.synth.enabled);
        c.synth.n_healthy = s.value("n_healthy", c.synth.n_healthy);
        c.synth.n_lame = s.value("n_lame", c.synth.n_lame);
        c.synth.jitter.noise_sd = s.value("noise_sd", c.synth.jitter.noise_sd);
        c.synth.jitter.outlier_rate = s.value("outlier_rate", c.synth.jitter.outlier_rate);
        c.synth.jitter.trait_jitter = s.value("trait_jitter", c.synth.jitter.trait_jitter);
    }
    if (j.contains("filter")) {
        const auto& f = j.at("filter");
        c.filter.mad_window = f.value("mad_window", c.filter.mad_window);
        c.filter.mad_k = f.value("mad_k", c.filter.mad_k);
        c.filter.mad_floor_px = f.value("mad_floor_px", c.filter.mad_floor_px);
        c.filter.sg_window = f.value("sg_window", c.filter.sg_window);
        c.filter.sg_order = f.value("sg_order", c.filter.sg_order);
    }
    if (j.contains("steps")) {
        const auto& s = j.at("steps");
        c.steps.stance_min_frames = s.value("stance_min_frames", c.steps.stance_min_frames);
        c.steps.stance_tol_px = s.value("stance_tol_px", c.steps.stance_tol_px);
        c.steps.accel_filter_size = s.value("accel_filter_size", c.steps.accel_filter_size);
    }
    if (j.contains("merge")) {
        const auto& m = j.at("merge");
        c.merge_strategy = m.value("strategy", c.merge_strategy);
        c.tau = m.value("tau", c.tau);
        c.intra_window_hours = m.value("intra_window_hours", c.intra_window_hours);
    }
    if (j.contains("cv")) {
        const auto& v = j.at("cv");
        c.cv.seed = v.value("seed", c.cv.seed);
        c.cv.k = v.value("k", c.cv.k);
        c.cv.n_iter = v.value("n_iter", c.cv.n_iter);
        c.cv.n_perm = v.value("n_perm", c.cv.n_perm);
        c.cv.search = v.value("search", c.cv.search);
        if (v.contains("classifiers")) {
            c.cv.classifiers = v.at("classifiers").get<std::vector<std::string>>();
        }
        if (v.contains("params")) {
            for (const auto& [kind, params] : v.at("params").items()) {
                for (const auto& [key, value] : params.items()) {
                    c.cv.params[kind][key] = value.get<double>();
                }
            }
        }
        if (v.contains("search_spaces")) {
            for (const auto& [kind, space] : v.at("search_spaces").items()) {
                for (const auto& [key, range] : space.items()) {
                    ParamRange r;
                    r.lo = range.at("lo").get<double>();
                    r.hi = range.at("hi").get<double>();
                    r.log_scale = range.value("log", false);
                    r.integer = range.value("int", false);
                    c.cv.search_spaces[kind][key] = r;
                }
            }
        }
    }
    return c;
}

Json config_to_json(const PipelineConfig& c) {
    Json j;
    j["paths"] = {{"trajectories", c.trajectories_csv},
                  {"scores", c.scores_csv},
                  {"labels", c.labels_csv},
                  {"out", c.out_dir}};
    j["frame_rate"] = c.frame_rate;
    j["synth"] = {{"enabled", c.synth.enabled},
                  {"n_healthy", c.synth.n_healthy},
                  {"n_lame", c.synth.n_lame},
                  {"noise_sd", c.synth.jitter.noise_sd},
                  {"outlier_rate", c.synth.jitter.outlier_rate},
                  {"trait_jitter", c.synth.jitter.trait_jitter}};
    j["filter"] = {{"mad_window", c.filter.mad_window},
                   {"mad_k", c.filter.mad_k},
                   {"mad_floor_px", c.filter.mad_floor_px},
                   {"sg_window", c.filter.sg_window},
                   {"sg_order", c.filter.sg_order}};
    j["steps"] = {{"stance_min_frames", c.steps.stance_min_frames},
                  {"stance_tol_px", c.steps.stance_tol_px},
                  {"accel_filter_size", c.steps.accel_filter_size}};
    j["merge"] = {{"strategy", c.merge_strategy},
                  {"tau", c.tau},
                  {"intra_window_hours", c.intra_window_hours}};
    Json params = Json::object();
    for (const auto& [kind, kv] : c.cv.params) {
        for (const auto& [key, value] : kv) params[kind][key] = value;
    }
    Json spaces = Json::object();
    for (const auto& [kind, space] : c.cv.search_spaces) {
        for (const auto& [key, r] : space) {
            spaces[kind][key] = {{"lo", r.lo}, {"hi", r.hi}, {"log", r.log_scale}, {"int", r.integer}};
        }
    }
    j["cv"] = {{"seed", c.cv.seed},     {"k", c.cv.k},
               {"n_iter", c.cv.n_iter}, {"n_perm", c.cv.n_perm},
               {"search", c.cv.search}, {"classifiers", c.cv.classifiers},
               {"params", params},      {"search_spaces", spaces}};
    return j;
}

PipelineConfig load_config(const std::string& path) { return config_from_json(read_json(path)); }

Json timeline_to_json(const std::string& video_id, const StepTimeline& timeline) {
    Json legs;
    for (int leg = 0; leg < kLegCount; ++leg) {
        const auto& ev = timeline.legs[static_cast<size_t>(leg)];
        Json stances = Json::array();
        for (const auto& st : ev.stances) {
            stances.push_back({{"start", st.start}, {"end", st.end}});
        }
        legs[leg_code(leg)] = {{"stances", stances}, {"midswings", ev.midswings}};
    }
    return Json{{"video_id", video_id},
                {"gait_period", timeline.gait_period},
                {"valid_range",
                 {{"first", timeline.valid_range.first}, {"last", timeline.valid_range.last}}},
                {"legs", legs}};
}

StepTimeline timeline_from_json(const Json& j) {
    StepTimeline tl;
    tl.gait_period = j.at("gait_period").get<double>();
    tl.valid_range.first = j.at("valid_range").at("first").get<int>();
    tl.valid_range.last = j.at("valid_range").at("last").get<int>();
    for (int leg = 0; leg < kLegCount; ++leg) {
        const auto& src = j.at("legs").at(leg_code(leg));
        auto& ev = tl.legs[static_cast<size_t>(leg)];
        for (const auto& st : src.at("stances")) {
            ev.stances.push_back({st.at("start").get<int>(), st.at("end").get<int>()});
        }
        ev.midswings = src.at("midswings").get<std::vector<int>>();
    }
    return tl;
}

std::map<std::string, int> load_binary_labels(const std::string& path) {
    const auto table = csv::read_file(path);
    const int c_video = table.column("video_id");
    const int c_binary = table.column("binary_label");
    if (c_video < 0 || c_binary < 0) {
        throw GaitError("labels csv missing video_id/binary_label: " + path);
    }
    std::map<std::string, int> out;
    for (const auto& row : table.rows) {
        const long v = csv::parse_long(row[static_cast<size_t>(c_binary)], "binary_label");
        if (v != 0 && v != 1) throw GaitError("binary label must be 0 or 1");
        out[row[static_cast<size_t>(c_video)]] = static_cast<int>(v);
    }
    return out;
}

Json importance_to_json(const ImportanceReport& report) {
    Json arr = Json::array();
    for (size_t i = 0; i < report.ranked.size(); ++i) {
        arr.push_back({{"rank", i + 1},
                       {"feature", report.ranked[i].feature},
                       {"mean_importance", report.ranked[i].mean},
                       {"std_importance", report.ranked[i].stddev}});
    }
    return Json{{"ranking", arr}};
}

std::string importance_to_csv(const ImportanceReport& report) {
    std::string out = "feature,mean_importance,std_importance,rank\n";
    for (size_t i = 0; i < report.ranked.size(); ++i) {
        out += report.ranked[i].feature + ',' + csv::format_double(report.ranked[i].mean) + ',' +
               csv::format_double(report.ranked[i].stddev) + ',' + std::to_string(i + 1) + '\n';
    }
    return out;
}

Json reliability_to_json(const ScoreTable& table, double window_hours) {
    Json reliability;
    const auto inter = inter_observer_report(table);
    Json sa = Json::object();
    for (const auto& [cat, value] : inter.agreement.sa) {
        sa[std::to_string(cat)] = value ? Json(*value) : Json(nullptr);
    }
    reliability["inter"] = {{"alpha", inter.alpha.alpha},
                            {"degenerate", inter.alpha.degenerate},
                            {"pa", inter.agreement.pa},
                            {"sa", sa}};
    Json intra = Json::object();
    for (const auto& [obs, rep] : intra_observer_reports(table, window_hours)) {
        Json obs_sa = Json::object();
        for (const auto& [cat, value] : rep.agreement.sa) {
            obs_sa[std::to_string(cat)] = value ? Json(*value) : Json(nullptr);
        }
        intra[obs] = {{"alpha", rep.alpha.alpha},
                      {"degenerate", rep.alpha.degenerate},
                      {"pa", rep.agreement.pa},
                      {"sa", obs_sa}};
    }
    reliability["intra"] = intra;
    reliability["repeat_pairs"] = pair_repeats(table, window_hours).size();
    return reliability;
}

std::string ablation_to_csv(const std::vector<MetricsReport>& reports,
                            const std::vector<int>& group_order) {
    std::string out = "step,groups,accuracy,f1_macro,sensitivity,specificity\n";
    std::string names;
    for (size_t s = 0; s < reports.size(); ++s) {
        if (!names.empty()) names += '+';
        names += trait_groups()[static_cast<size_t>(group_order[s])].name;
        out += std::to_string(s + 1) + ',' + names + ',' +
               csv::format_double(reports[s].accuracy) + ',' +
               csv::format_double(reports[s].f1_macro) + ',' +
               (reports[s].sensitivity ? csv::format_double(*reports[s].sensitivity) : "") + ',' +
               (reports[s].specificity ? csv::format_double(*reports[s].specificity) : "") + '\n';
    }
    return out;
}

namespace {

struct Exclusion {
    std::string video_id;
    std::string stage;
    std::string reason;
};

}  // namespace

void run_pipeline(const PipelineConfig& config) {
    const fs::path out_dir(config.out_dir);
    fs::create_directories(out_dir);

    Json manifest;
    manifest["config"] = config_to_json(config);
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a(manifest["config"].dump())));
    manifest["config_hash"] = hash_hex;
    manifest["seed"] = config.cv.seed;
    manifest["stages"] = Json::object();
    manifest["complete"] = false;
    std::vector<Exclusion> excluded;
    std::vector<std::string> artifacts;

    auto fail_stage = [&](const std::string& stage, const std::string& what) {
        manifest["stages"][stage] = {{"status", "failed"}, {"error", what}};
        Json ex = Json::array();
        for (const auto& e : excluded) {
            ex.push_back({{"video_id", e.video_id}, {"stage", e.stage}, {"reason", e.reason}});
        }
        manifest["excluded"] = ex;
        manifest["artifacts"] = artifacts;
        write_json(out_dir / "manifest.json", manifest);
        throw GaitError("stage " + stage + ": " + what);
    };

    // --- acquire -----------------------------------------------------------
    std::vector<TrajectorySet> trajectories;
    std::map<std::string, int> labels;
    try {
        if (config.synth.enabled) {
            auto ds = generate_dataset(config.synth.n_healthy, config.synth.n_lame,
                                       config.synth.jitter, config.cv.seed);
            trajectories = std::move(ds.trajectories);
            Json gt_json = Json::array();
            for (size_t i = 0; i < ds.truths.size(); ++i) {
                const auto& gt = ds.truths[i];
                gt_json.push_back({{"video_id", ds.rows[i].video_id},
                                   {"gait_period", gt.gait_period},
                                   {"head_length", gt.head_length},
                                   {"label", ds.rows[i].label},
                                   {"traits",
                                    {{"BPM", gt.traits.bpm},
                                     {"HBA", gt.traits.hba},
                                     {"TRK_L", gt.traits.trk_l},
                                     {"TRK_R", gt.traits.trk_r},
                                     {"STL_F", gt.traits.stl_f},
                                     {"STL_H", gt.traits.stl_h},
                                     {"STD_F", gt.traits.std_f},
                                     {"STD_H", gt.traits.std_h},
                                     {"SWD_F", gt.traits.swd_f},
                                     {"SWD_H", gt.traits.swd_h}}}});
            }
            write_json(out_dir / "groundtruth.json", Json{{"videos", gt_json}});
            artifacts.push_back("groundtruth.json");

            MergedLabels synth_labels;
            for (const auto& row : ds.rows) {
                labels[row.video_id] = row.label;
                synth_labels.labels.push_back(
                    {row.video_id, row.cow_id, row.label == 0 ? 1 : 3, row.label});
            }
            save_labels_csv((out_dir / "labels.csv").string(), synth_labels);
            artifacts.push_back("labels.csv");
        } else {
            if (config.trajectories_csv.empty()) throw GaitError("no trajectory input configured");
            trajectories = load_trajectory_csv(config.trajectories_csv, config.frame_rate);
        }
        save_trajectory_csv((out_dir / "raw_trajectories.csv").string(), trajectories);
        artifacts.push_back("raw_trajectories.csv");
        manifest["stages"]["acquire"] = {{"status", "ok"}, {"videos", trajectories.size()}};
    } catch (const GaitError& e) {
        fail_stage("acquire", e.what());
    }

    // --- direction + filter --------------------------------------------------
    std::vector<TrajectorySet> filtered;
    try {
        long corrected_cells = 0;
        long total_cells = 0;
        Json per_video = Json::array();
        for (const auto& traj : trajectories) {
            TrajectorySet normalized;
            try {
                normalized = normalize_direction(traj);
            } catch (const GaitError& e) {
                excluded.push_back({traj.video_id, "filter", e.what()});
                continue;
            }
            auto res = correct_trajectories(normalized, config.filter);
            corrected_cells += res.corrected_cells;
            total_cells += static_cast<long>(res.trajectory.frame_count()) * kKeypointCount;
            per_video.push_back({{"video_id", traj.video_id},
                                 {"outlier_fraction", res.outlier_fraction},
                                 {"corrected_cells", res.corrected_cells}});
            filtered.push_back(std::move(res.trajectory));
        }
        if (filtered.empty()) throw GaitError("no video survived filtering");
        const double fraction =
            total_cells > 0 ? static_cast<double>(corrected_cells) / total_cells : 0.0;
        write_json(out_dir / "filter_report.json",
                   Json{{"outlier_fraction", fraction},
                        {"corrected_cells", corrected_cells},
                        {"videos", per_video}});
        save_trajectory_csv((out_dir / "filtered_trajectories.csv").string(), filtered);
        artifacts.push_back("filtered_trajectories.csv");
        artifacts.push_back("filter_report.json");
        manifest["stages"]["filter"] = {{"status", "ok"},
                                        {"videos", filtered.size()},
                                        {"outlier_fraction", fraction}};
    } catch (const GaitError& e) {
        fail_stage("filter", e.what());
    }

    // --- steps ---------------------------------------------------------------
    std::vector<std::pair<size_t, StepTimeline>> timelines;  // index into filtered
    try {
        Json tl_json = Json::array();
        for (size_t i = 0; i < filtered.size(); ++i) {
            try {
                auto tl = detect_timeline(filtered[i], config.steps);
                tl_json.push_back(timeline_to_json(filtered[i].video_id, tl));
                timelines.push_back({i, std::move(tl)});
            } catch (const GaitError& e) {
                excluded.push_back({filtered[i].video_id, "steps", e.what()});
            }
        }
        if (timelines.empty()) throw GaitError("no video has a usable step timeline");
        Json ex = Json::array();
        for (const auto& e : excluded) {
            ex.push_back({{"video_id", e.video_id}, {"stage", e.stage}, {"reason", e.reason}});
        }
        write_json(out_dir / "timelines.json", Json{{"timelines", tl_json}, {"excluded", ex}});
        artifacts.push_back("timelines.json");
        manifest["stages"]["steps"] = {{"status", "ok"},
                                       {"videos", timelines.size()},
                                       {"excluded", excluded.size()}};
    } catch (const GaitError& e) {
        fail_stage("steps", e.what());
    }

    // --- traits ----------------------------------------------------------------
    std::vector<FeatureRecord> records;
    try {
        for (const auto& [idx, tl] : timelines) {
            const auto& traj = filtered[idx];
            FeatureRecord rec;
            try {
                rec.features = extract_features(traj, tl, head_length(traj));
                rec.valid = true;
            } catch (const GaitError& e) {
                rec.features.video_id = traj.video_id;
                rec.features.cow_id = traj.cow_id;
                rec.valid = false;
                excluded.push_back({traj.video_id, "traits", e.what()});
            }
            records.push_back(std::move(rec));
        }
        save_features_csv((out_dir / "features.csv").string(), records);
        artifacts.push_back("features.csv");
        long valid = 0;
        for (const auto& r : records) valid += r.valid ? 1 : 0;
        if (valid == 0) throw GaitError("no video yielded a feature vector");
        manifest["stages"]["traits"] = {{"status", "ok"}, {"valid_videos", valid}};
    } catch (const GaitError& e) {
        fail_stage("traits", e.what());
    }

    // --- labels ----------------------------------------------------------------
    try {
        if (!config.scores_csv.empty()) {
            auto table = load_score_csv(config.scores_csv);
            MergeParams params;
            params.tau = config.tau;
            params.intra_window_hours = config.intra_window_hours;
            auto merged =
                merge_scores(table, merge_strategy_from_name(config.merge_strategy), params);
            binarize(merged);
            for (const auto& l : merged.labels) labels[l.video_id] = l.binary;
            save_labels_csv((out_dir / "labels.csv").string(), merged);
            artifacts.push_back("labels.csv");

            write_json(out_dir / "reliability.json",
                       reliability_to_json(table, config.intra_window_hours));
            artifacts.push_back("reliability.json");
        } else if (!config.labels_csv.empty()) {
            labels = load_binary_labels(config.labels_csv);
            fs::copy_file(config.labels_csv, out_dir / "labels.csv",
                          fs::copy_options::overwrite_existing);
            artifacts.push_back("labels.csv");
        } else if (!config.synth.enabled) {
            throw GaitError("no label source configured");
        }
        manifest["stages"]["labels"] = {{"status", "ok"}, {"videos", labels.size()}};
    } catch (const GaitError& e) {
        fail_stage("labels", e.what());
    }

    // --- classification study ----------------------------------------------------
    try {
        auto dataset = make_dataset(records, labels);
        if (dataset.rows.size() < 10) throw GaitError("too few labeled videos for the study");
        auto folds = make_folds(dataset, config.cv.k, config.cv.seed);

        std::vector<std::string> names = config.cv.classifiers;
        if (names.empty()) {
            for (auto kind : all_classifier_kinds()) names.push_back(classifier_kind_name(kind));
        }

        Json cv_json = Json::object();
        ClassifierSpec best_spec;
        double best_acc = -1.0, best_f1 = -1.0;
        for (size_t i = 0; i < names.size(); ++i) {
            const auto kind = classifier_kind_from_name(names[i]);
            ClassifierSpec spec;
            spec.kind = kind;
            spec.seed = derive_seed(config.cv.seed, 101, i);
            if (config.cv.search) {
                const auto space_it = config.cv.search_spaces.find(names[i]);
                spec = random_search(kind, dataset, folds, config.cv.n_iter,
                                     derive_seed(config.cv.seed, 103, i),
                                     space_it == config.cv.search_spaces.end()
                                         ? nullptr
                                         : &space_it->second);
            }
            const auto it = config.cv.params.find(names[i]);
            if (it != config.cv.params.end()) {
                for (const auto& [key, value] : it->second) spec.params[key] = value;
            }
            const auto report = evaluate_cv(spec, dataset, folds);
            Json params = Json::object();
            for (const auto& [key, value] : spec.params) params[key] = value;
            cv_json[names[i]] = {{"params", params},
                                 {"seed", spec.seed},
                                 {"report", metrics_to_json(report)}};
            if (report.accuracy > best_acc + 1e-12 ||
                (std::abs(report.accuracy - best_acc) <= 1e-12 &&
                 report.f1_macro > best_f1 + 1e-12)) {
                best_acc = report.accuracy;
                best_f1 = report.f1_macro;
                best_spec = spec;
            }
        }
        Json fold_json = Json::array();
        for (const auto& fold : folds.validation_videos) {
            fold_json.push_back(std::vector<std::string>(fold.begin(), fold.end()));
        }
        write_json(out_dir / "cv_report.json",
                   Json{{"classifiers", cv_json},
                        {"folds", fold_json},
                        {"best",
                         {{"classifier", classifier_kind_name(best_spec.kind)},
                          {"accuracy", best_acc},
                          {"f1_macro", best_f1}}},
                        {"leakage_guard",
                         "scaler and SMOTE fit on the training split of each fold only"}});
        artifacts.push_back("cv_report.json");
        manifest["stages"]["cv"] = {{"status", "ok"},
                                    {"videos", dataset.rows.size()},
                                    {"best", classifier_kind_name(best_spec.kind)},
                                    {"best_accuracy", best_acc}};

        const auto importance = permutation_importance(best_spec, dataset, folds,
                                                       config.cv.n_perm,
                                                       derive_seed(config.cv.seed, 107));
        write_json(out_dir / "importance.json", importance_to_json(importance));
        write_text(out_dir / "importance.csv", importance_to_csv(importance));
        artifacts.push_back("importance.json");
        artifacts.push_back("importance.csv");
        manifest["stages"]["importance"] = {{"status", "ok"},
                                            {"top_feature", importance.ranked[0].feature}};

        const auto group_order =
            group_ranking_from_importance(importance, dataset.feature_names);
        const auto ablation = ablation_study(best_spec, dataset, folds, group_order);
        Json ablation_json = Json::array();
        std::string names_acc;
        for (size_t s = 0; s < ablation.size(); ++s) {
            if (!names_acc.empty()) names_acc += '+';
            names_acc += trait_groups()[static_cast<size_t>(group_order[s])].name;
            ablation_json.push_back(
                {{"step", s + 1}, {"groups", names_acc}, {"report", metrics_to_json(ablation[s])}});
        }
        write_json(out_dir / "ablation.json", Json{{"steps", ablation_json}});
        write_text(out_dir / "ablation_curve.csv", ablation_to_csv(ablation, group_order));
        artifacts.push_back("ablation.json");
        artifacts.push_back("ablation_curve.csv");
        manifest["stages"]["ablation"] = {{"status", "ok"}, {"steps", ablation.size()}};
    } catch (const GaitError& e) {
        fail_stage("cv", e.what());
    }

    Json ex = Json::array();
    for (const auto& e : excluded) {
        ex.push_back({{"video_id", e.video_id}, {"stage", e.stage}, {"reason", e.reason}});
    }
    manifest["excluded"] = ex;
    manifest["artifacts"] = artifacts;
    manifest["complete"] = true;
    write_json(out_dir / "manifest.json", manifest);
}

void emit_plot_data(const std::string& run_dir, const std::string& plots_dir) {
    const fs::path run(run_dir);
    const fs::path out(plots_dir);
    fs::create_directories(out);

    auto require = [&](const char* name) {
        const fs::path p = run / name;
        if (!fs::exists(p)) throw GaitError(std::string("missing stage output: ") + name);
        return p;
    };

    // Trajectory overlay: raw and filtered series side by side.
    {
        auto raw = load_trajectory_csv(require("raw_trajectories.csv").string());
        auto filtered = load_trajectory_csv(require("filtered_trajectories.csv").string());
        std::map<std::string, const TrajectorySet*> raw_by_id;
        for (const auto& t : raw) raw_by_id[t.video_id] = &t;
        std::ofstream f(out / "trajectory_overlay.csv");
        f << "video_id,frame,keypoint,stage,x,y\n";
        for (const auto& traj : filtered) {
            const auto* raw_t = raw_by_id.count(traj.video_id) ? raw_by_id[traj.video_id] : nullptr;
            for (int t = 0; t < traj.frame_count(); ++t) {
                for (int k = 1; k <= kKeypointCount; ++k) {
                    const auto id = static_cast<KeypointId>(k);
                    if (raw_t) {
                        const Point& rp = raw_t->at(t, id);
                        f << traj.video_id << ',' << t << ',' << keypoint_code(id) << ",raw,"
                          << csv::format_double(rp.x) << ',' << csv::format_double(rp.y) << '\n';
                    }
                    const Point& p = traj.at(t, id);
                    f << traj.video_id << ',' << t << ',' << keypoint_code(id) << ",filtered,"
                      << csv::format_double(p.x) << ',' << csv::format_double(p.y) << '\n';
                }
            }
        }
    }

    // Step markers on the hoof x-channels.
    {
        auto filtered = load_trajectory_csv(require("filtered_trajectories.csv").string());
        std::map<std::string, const TrajectorySet*> by_id;
        for (const auto& t : filtered) by_id[t.video_id] = &t;
        const Json timelines = read_json(require("timelines.json"));
        std::ofstream f(out / "step_markers.csv");
        f << "video_id,leg,event,frame,x\n";
        for (const auto& tj : timelines.at("timelines")) {
            const std::string vid = tj.at("video_id").get<std::string>();
            if (!by_id.count(vid)) continue;
            const auto* traj = by_id[vid];
            const auto tl = timeline_from_json(tj);
            for (int leg = 0; leg < kLegCount; ++leg) {
                const auto x = traj->channel_x(leg_keypoint(leg));
                for (const auto& st : tl.legs[static_cast<size_t>(leg)].stances) {
                    f << vid << ',' << leg_code(leg) << ",stance_start," << st.start << ','
                      << csv::format_double(x[static_cast<size_t>(st.start)]) << '\n';
                    f << vid << ',' << leg_code(leg) << ",stance_end," << st.end << ','
                      << csv::format_double(x[static_cast<size_t>(st.end)]) << '\n';
                }
                for (int ms : tl.legs[static_cast<size_t>(leg)].midswings) {
                    f << vid << ',' << leg_code(leg) << ",midswing," << ms << ','
                      << csv::format_double(x[static_cast<size_t>(ms)]) << '\n';
                }
            }
        }
    }

    // Per-class feature distributions.
    {
        auto records = load_features_csv(require("features.csv").string());
        auto labels = load_binary_labels(require("labels.csv").string());
        std::ofstream f(out / "feature_distributions.csv");
        f << "video_id,label,feature,value\n";
        for (const auto& rec : records) {
            if (!rec.valid || !labels.count(rec.features.video_id)) continue;
            const auto values = rec.features.values();
            for (size_t j = 0; j < values.size(); ++j) {
                f << rec.features.video_id << ',' << labels[rec.features.video_id] << ','
                  << kFeatureNames[j] << ',' << csv::format_double(values[j]) << '\n';
            }
        }
    }

    // Importance bars and the ablation curve are already column-oriented.
    fs::copy_file(require("importance.csv"), out / "importance.csv",
                  fs::copy_options::overwrite_existing);
    fs::copy_file(require("ablation_curve.csv"), out / "ablation_curve.csv",
                  fs::copy_options::overwrite_existing);
}

}  // namespace gait
