// Command-line front end for the gait study pipeline.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "gait/pipeline.hpp"

using namespace gait;
namespace fs = std::filesystem;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = "out";
    uint64_t seed = 0;
    double frame_rate = 30.0;
    bool seed_set = false;
    bool out_set = false;
    bool frame_rate_set = false;
};

PipelineConfig effective_config(const GlobalOpts& g) {
    PipelineConfig config;
    if (!g.config_path.empty()) config = load_config(g.config_path);
    if (g.seed_set) config.cv.seed = g.seed;
    if (g.out_set || config.out_dir.empty()) config.out_dir = g.out_dir;
    if (g.frame_rate_set) config.frame_rate = g.frame_rate;
    return config;
}

void write_json_file(const fs::path& path, const Json& j) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path);
    if (!out) throw GaitError("cannot write file: " + path.string());
    out << j.dump(2) << "\n";
}

void write_text_file(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path);
    if (!out) throw GaitError("cannot write file: " + path.string());
    out << text;
}

LabeledDataset load_study_dataset(const std::string& features_path,
                                  const std::string& labels_path) {
    return make_dataset(load_features_csv(features_path), load_binary_labels(labels_path));
}

ClassifierSpec spec_for(const PipelineConfig& config, const std::string& name, uint64_t stream) {
    ClassifierSpec spec;
    spec.kind = classifier_kind_from_name(name);
    spec.seed = derive_seed(config.cv.seed, stream);
    const auto it = config.cv.params.find(name);
    if (it != config.cv.params.end()) {
        for (const auto& [key, value] : it->second) spec.params[key] = value;
    }
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"locomotion-trait extraction and lameness classification toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "pipeline config JSON");
    app.add_option("--out", g.out_dir, "output directory")->each([&](const std::string&) {
        g.out_set = true;
    });
    app.add_option("--seed", g.seed, "master seed")->each([&](const std::string&) {
        g.seed_set = true;
    });
    app.add_option("--frame-rate", g.frame_rate, "frames per second")
        ->each([&](const std::string&) { g.frame_rate_set = true; });

    // synth ------------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "generate synthetic gait trajectories");
    std::string preset = "healthy";
    int n_healthy = 0, n_lame = 0;
    double noise_sd = -1.0, outlier_rate = -1.0, trait_jitter = -1.0;
    synth->add_option("--preset", preset, "healthy or lame (single-video mode)");
    synth->add_option("--n-healthy", n_healthy, "dataset mode: healthy video count");
    synth->add_option("--n-lame", n_lame, "dataset mode: lame video count");
    synth->add_option("--noise-sd", noise_sd, "pixel noise standard deviation");
    synth->add_option("--outlier-rate", outlier_rate, "outlier probability per cell");
    synth->add_option("--trait-jitter", trait_jitter, "per-video trait spread scale");

    // filter -----------------------------------------------------------------
    auto* filter = app.add_subcommand("filter", "MAD + Savitzky-Golay trajectory correction");
    std::string in_path;
    filter->add_option("--in", in_path, "trajectory csv")->required();

    // steps ------------------------------------------------------------------
    auto* steps = app.add_subcommand("steps", "stance and mid-swing detection");
    steps->add_option("--in", in_path, "filtered trajectory csv")->required();

    // traits -----------------------------------------------------------------
    auto* traits = app.add_subcommand("traits", "locomotion trait extraction");
    std::string timelines_path;
    traits->add_option("--in", in_path, "filtered trajectory csv")->required();
    traits->add_option("--timelines", timelines_path, "timelines json (detected inline if absent)");

    // reliability --------------------------------------------------------------
    auto* reliability = app.add_subcommand("reliability", "observer reliability and agreement");
    std::string scores_path;
    double window_hours = 48.0;
    reliability->add_option("--scores", scores_path, "scores csv")->required();
    reliability->add_option("--window-hours", window_hours, "repeat-pair window");

    // merge-scores ---------------------------------------------------------------
    auto* merge = app.add_subcommand("merge-scores", "merge observer scores into labels");
    std::string strategy = "tau_vote";
    double tau = 0.602;
    merge->add_option("--scores", scores_path, "scores csv")->required();
    merge->add_option("--strategy", strategy, "mean|majority|weighted|tau_vote");
    merge->add_option("--tau", tau, "intra-observer reliability threshold");
    merge->add_option("--window-hours", window_hours, "repeat-pair window");

    // study subcommands ------------------------------------------------------------
    std::string features_path, labels_path, classifier = "svm_rbf", importance_path;
    auto* cv = app.add_subcommand("cv", "cross-validated evaluation");
    cv->add_option("--features", features_path, "features csv")->required();
    cv->add_option("--labels", labels_path, "labels csv")->required();
    cv->add_option("--classifier", classifier, "classifier name or 'all'");

    auto* search = app.add_subcommand("search", "random hyper-parameter search");
    search->add_option("--features", features_path, "features csv")->required();
    search->add_option("--labels", labels_path, "labels csv")->required();
    search->add_option("--classifier", classifier, "classifier name");

    auto* importance = app.add_subcommand("importance", "permutation feature importance");
    importance->add_option("--features", features_path, "features csv")->required();
    importance->add_option("--labels", labels_path, "labels csv")->required();
    importance->add_option("--classifier", classifier, "classifier name");

    auto* ablation = app.add_subcommand("ablation", "incremental trait-group study");
    ablation->add_option("--features", features_path, "features csv")->required();
    ablation->add_option("--labels", labels_path, "labels csv")->required();
    ablation->add_option("--classifier", classifier, "classifier name");
    ablation->add_option("--importance", importance_path, "importance json for the group order");

    // run / emit-plots ----------------------------------------------------------
    auto* run = app.add_subcommand("run", "full pipeline");
    std::string run_dir;
    auto* emit = app.add_subcommand("emit-plots", "plot-ready csv series from a run directory");
    emit->add_option("--run", run_dir, "run output directory")->required();

    // Let --seed/--out/--config/--frame-rate appear after the subcommand too.
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        PipelineConfig config = effective_config(g);
        const fs::path out(config.out_dir);

        if (synth->parsed()) {
            fs::create_directories(out);
            if (n_healthy > 0 || n_lame > 0) {
                JitterSpec jitter = config.synth.jitter;
                if (noise_sd >= 0.0) jitter.noise_sd = noise_sd;
                if (outlier_rate >= 0.0) jitter.outlier_rate = outlier_rate;
                if (trait_jitter >= 0.0) jitter.trait_jitter = trait_jitter;
                auto ds = generate_dataset(std::max(n_healthy, 1), std::max(n_lame, 1), jitter,
                                           config.cv.seed);
                save_trajectory_csv((out / "trajectories.csv").string(), ds.trajectories);
                MergedLabels labels;
                for (const auto& row : ds.rows) {
                    labels.labels.push_back(
                        {row.video_id, row.cow_id, row.label == 0 ? 1 : 3, row.label});
                }
                save_labels_csv((out / "labels.csv").string(), labels);
                Json gt = Json::array();
                for (size_t i = 0; i < ds.truths.size(); ++i) {
                    gt.push_back({{"video_id", ds.rows[i].video_id},
                                  {"label", ds.rows[i].label},
                                  {"gait_period", ds.truths[i].gait_period}});
                }
                write_json_file(out / "groundtruth.json", Json{{"videos", gt}});
                std::cout << "wrote " << ds.trajectories.size() << " videos to "
                          << (out / "trajectories.csv") << "\n";
            } else {
                auto cfg = preset_by_name(preset, config.cv.seed);
                if (noise_sd >= 0.0) cfg.noise_sd = noise_sd;
                if (outlier_rate >= 0.0) cfg.outlier_rate = outlier_rate;
                auto res = generate(cfg, preset, "cow0");
                save_trajectory_csv((out / "trajectories.csv").string(), {res.trajectory});
                Json stances = Json::object();
                Json midswings = Json::object();
                for (int leg = 0; leg < kLegCount; ++leg) {
                    Json arr = Json::array();
                    for (const auto& st : res.truth.stances[static_cast<size_t>(leg)]) {
                        arr.push_back({{"start", st.start}, {"end", st.end}});
                    }
                    stances[leg_code(leg)] = arr;
                    midswings[leg_code(leg)] = res.truth.midswings[static_cast<size_t>(leg)];
                }
                write_json_file(out / "groundtruth.json",
                                Json{{"video_id", preset},
                                     {"gait_period", res.truth.gait_period},
                                     {"head_length", res.truth.head_length},
                                     {"stances", stances},
                                     {"midswings", midswings},
                                     {"traits",
                                      {{"BPM", res.truth.traits.bpm},
                                       {"HBA", res.truth.traits.hba},
                                       {"TRK_L", res.truth.traits.trk_l},
                                       {"TRK_R", res.truth.traits.trk_r},
                                       {"STL_F", res.truth.traits.stl_f},
                                       {"STL_H", res.truth.traits.stl_h},
                                       {"STD_F", res.truth.traits.std_f},
                                       {"STD_H", res.truth.traits.std_h},
                                       {"SWD_F", res.truth.traits.swd_f},
                                       {"SWD_H", res.truth.traits.swd_h}}}});
                std::cout << "wrote 1 video to " << (out / "trajectories.csv") << "\n";
            }
        } else if (filter->parsed()) {
            fs::create_directories(out);
            auto trajectories = load_trajectory_csv(in_path, config.frame_rate);
            std::vector<TrajectorySet> filtered;
            long corrected = 0;
            long cells = 0;
            Json per_video = Json::array();
            for (const auto& traj : trajectories) {
                auto res = correct_trajectories(normalize_direction(traj), config.filter);
                corrected += res.corrected_cells;
                cells += static_cast<long>(res.trajectory.frame_count()) * kKeypointCount;
                per_video.push_back({{"video_id", traj.video_id},
                                     {"outlier_fraction", res.outlier_fraction}});
                filtered.push_back(std::move(res.trajectory));
            }
            save_trajectory_csv((out / "filtered_trajectories.csv").string(), filtered);
            write_json_file(out / "filter_report.json",
                            Json{{"outlier_fraction",
                                  cells > 0 ? static_cast<double>(corrected) / cells : 0.0},
                                 {"corrected_cells", corrected},
                                 {"videos", per_video}});
            std::cout << "filtered " << filtered.size() << " videos\n";
        } else if (steps->parsed()) {
            fs::create_directories(out);
            auto trajectories = load_trajectory_csv(in_path, config.frame_rate);
            Json tl_json = Json::array();
            Json excluded = Json::array();
            for (const auto& traj : trajectories) {
                try {
                    tl_json.push_back(
                        timeline_to_json(traj.video_id, detect_timeline(traj, config.steps)));
                } catch (const GaitError& e) {
                    excluded.push_back({{"video_id", traj.video_id}, {"reason", e.what()}});
                }
            }
            write_json_file(out / "timelines.json",
                            Json{{"timelines", tl_json}, {"excluded", excluded}});
            std::cout << "timelines for " << tl_json.size() << " videos ("
                      << excluded.size() << " excluded)\n";
        } else if (traits->parsed()) {
            fs::create_directories(out);
            auto trajectories = load_trajectory_csv(in_path, config.frame_rate);
            std::map<std::string, StepTimeline> timelines;
            if (!timelines_path.empty()) {
                std::ifstream in(timelines_path);
                if (!in) throw GaitError("cannot open file: " + timelines_path);
                Json j;
                in >> j;
                for (const auto& tj : j.at("timelines")) {
                    timelines[tj.at("video_id").get<std::string>()] = timeline_from_json(tj);
                }
            }
            std::vector<FeatureRecord> records;
            for (const auto& traj : trajectories) {
                FeatureRecord rec;
                try {
                    StepTimeline tl;
                    if (!timelines_path.empty()) {
                        if (!timelines.count(traj.video_id)) {
                            throw GaitError("no timeline for " + traj.video_id);
                        }
                        tl = timelines[traj.video_id];
                    } else {
                        tl = detect_timeline(traj, config.steps);
                    }
                    rec.features = extract_features(traj, tl, head_length(traj));
                } catch (const GaitError&) {
                    rec.features.video_id = traj.video_id;
                    rec.features.cow_id = traj.cow_id;
                    rec.valid = false;
                }
                records.push_back(std::move(rec));
            }
            save_features_csv((out / "features.csv").string(), records);
            std::cout << "features for " << records.size() << " videos\n";
        } else if (reliability->parsed()) {
            fs::create_directories(out);
            auto table = load_score_csv(scores_path);
            write_json_file(out / "reliability.json", reliability_to_json(table, window_hours));
            std::cout << "reliability report written\n";
        } else if (merge->parsed()) {
            fs::create_directories(out);
            auto table = load_score_csv(scores_path);
            MergeParams params;
            params.tau = tau;
            params.intra_window_hours = window_hours;
            auto merged = merge_scores(table, merge_strategy_from_name(strategy), params);
            binarize(merged);
            save_labels_csv((out / "labels.csv").string(), merged);
            std::cout << "labels for " << merged.labels.size() << " videos\n";
        } else if (cv->parsed()) {
            fs::create_directories(out);
            auto dataset = load_study_dataset(features_path, labels_path);
            auto folds = make_folds(dataset, config.cv.k, config.cv.seed);
            std::vector<std::string> names;
            if (classifier == "all") {
                for (auto kind : all_classifier_kinds()) names.push_back(classifier_kind_name(kind));
            } else {
                names.push_back(classifier);
            }
            Json results = Json::object();
            for (size_t i = 0; i < names.size(); ++i) {
                auto spec = spec_for(config, names[i], 101 + i);
                results[names[i]] = metrics_to_json(evaluate_cv(spec, dataset, folds));
            }
            write_json_file(out / "cv_report.json", Json{{"classifiers", results}});
            std::cout << results.dump(2) << "\n";
        } else if (search->parsed()) {
            fs::create_directories(out);
            auto dataset = load_study_dataset(features_path, labels_path);
            auto folds = make_folds(dataset, config.cv.k, config.cv.seed);
            const auto space_it = config.cv.search_spaces.find(classifier);
            auto best = random_search(classifier_kind_from_name(classifier), dataset, folds,
                                      config.cv.n_iter, derive_seed(config.cv.seed, 103),
                                      space_it == config.cv.search_spaces.end()
                                          ? nullptr
                                          : &space_it->second);
            Json params = Json::object();
            for (const auto& [key, value] : best.params) params[key] = value;
            const auto report = evaluate_cv(best, dataset, folds);
            write_json_file(out / ("search_" + classifier + ".json"),
                            Json{{"classifier", classifier},
                                 {"params", params},
                                 {"seed", best.seed},
                                 {"report", metrics_to_json(report)}});
            std::cout << "best " << classifier << " macro-F1 " << report.f1_macro << "\n";
        } else if (importance->parsed()) {
            fs::create_directories(out);
            auto dataset = load_study_dataset(features_path, labels_path);
            auto folds = make_folds(dataset, config.cv.k, config.cv.seed);
            auto spec = spec_for(config, classifier, 101);
            auto report = permutation_importance(spec, dataset, folds, config.cv.n_perm,
                                                 derive_seed(config.cv.seed, 107));
            write_json_file(out / "importance.json", importance_to_json(report));
            write_text_file(out / "importance.csv", importance_to_csv(report));
            std::cout << "top feature: " << report.ranked[0].feature << "\n";
        } else if (ablation->parsed()) {
            fs::create_directories(out);
            auto dataset = load_study_dataset(features_path, labels_path);
            auto folds = make_folds(dataset, config.cv.k, config.cv.seed);
            auto spec = spec_for(config, classifier, 101);
            std::vector<int> group_order;
            if (!importance_path.empty()) {
                std::ifstream in(importance_path);
                if (!in) throw GaitError("cannot open file: " + importance_path);
                Json j;
                in >> j;
                ImportanceReport rep;
                for (const auto& item : j.at("ranking")) {
                    rep.ranked.push_back({item.at("feature").get<std::string>(),
                                          item.at("mean_importance").get<double>(), 0.0});
                }
                group_order = group_ranking_from_importance(rep, dataset.feature_names);
            } else {
                auto rep = permutation_importance(spec, dataset, folds, config.cv.n_perm,
                                                  derive_seed(config.cv.seed, 107));
                group_order = group_ranking_from_importance(rep, dataset.feature_names);
            }
            auto reports = ablation_study(spec, dataset, folds, group_order);
            Json steps_json = Json::array();
            std::string acc_names;
            for (size_t s = 0; s < reports.size(); ++s) {
                if (!acc_names.empty()) acc_names += '+';
                acc_names += trait_groups()[static_cast<size_t>(group_order[s])].name;
                steps_json.push_back({{"step", s + 1},
                                      {"groups", acc_names},
                                      {"report", metrics_to_json(reports[s])}});
            }
            write_json_file(out / "ablation.json", Json{{"steps", steps_json}});
            write_text_file(out / "ablation_curve.csv", ablation_to_csv(reports, group_order));
            std::cout << "ablation over " << reports.size() << " steps\n";
        } else if (run->parsed()) {
            run_pipeline(config);
            std::cout << "pipeline complete: " << config.out_dir << "\n";
        } else if (emit->parsed()) {
            emit_plot_data(run_dir, config.out_dir);
            std::cout << "plot data written to " << config.out_dir << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
