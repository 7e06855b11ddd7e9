#include "gait/ml.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "gait/csv.hpp"

namespace gait {

LabeledDataset LabeledDataset::select_features(const std::vector<int>& columns) const {
    LabeledDataset out;
    for (int c : columns) out.feature_names.push_back(feature_names[static_cast<size_t>(c)]);
    out.rows.reserve(rows.size());
    for (const auto& row : rows) {
        LabeledRow r;
        r.video_id = row.video_id;
        r.cow_id = row.cow_id;
        r.label = row.label;
        for (int c : columns) r.features.push_back(row.features[static_cast<size_t>(c)]);
        out.rows.push_back(std::move(r));
    }
    return out;
}

Matrix LabeledDataset::feature_matrix() const {
    Matrix x;
    x.reserve(rows.size());
    for (const auto& row : rows) x.push_back(row.features);
    return x;
}

std::vector<int> LabeledDataset::labels() const {
    std::vector<int> y;
    y.reserve(rows.size());
    for (const auto& row : rows) y.push_back(row.label);
    return y;
}

void save_features_csv(const std::string& path, const std::vector<FeatureRecord>& records) {
    std::ofstream out(path);
    if (!out) throw GaitError("cannot write file: " + path);
    out << "video_id,cow_id";
    for (const char* name : kFeatureNames) out << ',' << name;
    out << ",valid\n";
    for (const auto& rec : records) {
        out << rec.features.video_id << ',' << rec.features.cow_id;
        if (rec.valid) {
            for (double v : rec.features.values()) out << ',' << csv::format_double(v);
            out << ",1\n";
        } else {
            for (int i = 0; i < 10; ++i) out << ',';
            out << "0\n";
        }
    }
}

std::vector<FeatureRecord> load_features_csv(const std::string& path) {
    const auto table = csv::read_file(path);
    const int c_video = table.column("video_id");
    const int c_cow = table.column("cow_id");
    const int c_valid = table.column("valid");
    std::vector<int> cols;
    for (const char* name : kFeatureNames) {
        const int c = table.column(name);
        if (c < 0) throw GaitError("features csv missing column " + std::string(name));
        cols.push_back(c);
    }
    if (c_video < 0 || c_cow < 0 || c_valid < 0) {
        throw GaitError("features csv missing required columns: " + path);
    }
    std::vector<FeatureRecord> out;
    for (const auto& row : table.rows) {
        FeatureRecord rec;
        rec.features.video_id = row[static_cast<size_t>(c_video)];
        rec.features.cow_id = row[static_cast<size_t>(c_cow)];
        rec.valid = row[static_cast<size_t>(c_valid)] == "1";
        if (rec.valid) {
            std::array<double, 10> v{};
            for (size_t i = 0; i < 10; ++i) {
                v[i] = csv::parse_double(row[static_cast<size_t>(cols[i])], "feature");
            }
            rec.features.bpm = v[0];
            rec.features.hba = v[1];
            rec.features.trk_l = v[2];
            rec.features.trk_r = v[3];
            rec.features.stl_f = v[4];
            rec.features.stl_h = v[5];
            rec.features.std_f = v[6];
            rec.features.std_h = v[7];
            rec.features.swd_f = v[8];
            rec.features.swd_h = v[9];
        }
        out.push_back(std::move(rec));
    }
    return out;
}

LabeledDataset make_dataset(const std::vector<FeatureRecord>& records,
                            const std::map<std::string, int>& binary_labels) {
    LabeledDataset ds;
    for (const char* name : kFeatureNames) ds.feature_names.push_back(name);
    for (const auto& rec : records) {
        if (!rec.valid) continue;
        const auto it = binary_labels.find(rec.features.video_id);
        if (it == binary_labels.end()) continue;
        LabeledRow row;
        row.video_id = rec.features.video_id;
        row.cow_id = rec.features.cow_id;
        const auto values = rec.features.values();
        row.features.assign(values.begin(), values.end());
        row.label = it->second;
        if (!all_finite(row.features)) throw GaitError("non-finite feature for " + row.video_id);
        ds.rows.push_back(std::move(row));
    }
    return ds;
}

// ---------------------------------------------------------------------------

int FoldPlan::fold_of(const std::string& video_id) const {
    for (size_t f = 0; f < validation_videos.size(); ++f) {
        if (validation_videos[f].count(video_id)) return static_cast<int>(f);
    }
    return -1;
}

FoldPlan make_folds(const LabeledDataset& data, int k, uint64_t seed) {
    if (k < 2) throw GaitError("need at least 2 folds");
    struct Group {
        std::string cow;
        std::vector<std::string> videos;
        int pos = 0;
        int total = 0;
    };
    std::map<std::string, Group> by_cow;
    for (const auto& row : data.rows) {
        auto& g = by_cow[row.cow_id];
        g.cow = row.cow_id;
        g.videos.push_back(row.video_id);
        g.pos += row.label;
        ++g.total;
    }
    if (static_cast<int>(by_cow.size()) < k) throw GaitError("fewer cow groups than folds");

    std::vector<Group> groups;
    groups.reserve(by_cow.size());
    for (auto& [cow, g] : by_cow) groups.push_back(std::move(g));
    Rng rng(derive_seed(seed, 61));
    rng.shuffle(groups);
    std::stable_sort(groups.begin(), groups.end(),
                     [](const Group& a, const Group& b) { return a.total > b.total; });

    int total = 0, total_pos = 0;
    for (const auto& g : groups) {
        total += g.total;
        total_pos += g.pos;
    }
    const double p1 = static_cast<double>(total_pos) / static_cast<double>(total);

    std::vector<int> assignment(groups.size(), 0);
    std::vector<int> fold_pos(static_cast<size_t>(k), 0);
    std::vector<int> fold_total(static_cast<size_t>(k), 0);
    for (size_t gi = 0; gi < groups.size(); ++gi) {
        const auto& g = groups[gi];
        int best = 0;
        double best_div = 1e300;
        int best_size = 1 << 30;
        for (int f = 0; f < k; ++f) {
            const auto fu = static_cast<size_t>(f);
            const int np = fold_pos[fu] + g.pos;
            const int nt = fold_total[fu] + g.total;
            const double div = std::abs(static_cast<double>(np) - p1 * nt);
            if (div < best_div - 1e-12 || (std::abs(div - best_div) <= 1e-12 && nt < best_size)) {
                best = f;
                best_div = div;
                best_size = nt;
            }
        }
        assignment[gi] = best;
        fold_pos[static_cast<size_t>(best)] += g.pos;
        fold_total[static_cast<size_t>(best)] += g.total;
    }

    // The straight greedy drifts two ways: folds can exceed the +/-2
    // stratification band, and under class imbalance a near-balanced fold
    // out-competes an empty one, consolidating everything. A deterministic
    // best-improvement pass fixes both. Inside the band, size balance leads
    // and the class deviation only breaks ties; label-pure groups can then
    // migrate one at a time without tripping over a divergence wall.
    const double size_ideal = static_cast<double>(total) / k;
    auto objective = [&]() {
        double obj = 0.0;
        for (int f = 0; f < k; ++f) {
            const auto fu = static_cast<size_t>(f);
            const double dev =
                std::abs(static_cast<double>(fold_pos[fu]) - p1 * fold_total[fu]);
            obj += 1000.0 * std::max(0.0, dev - 1.8) + 0.2 * std::abs(fold_total[fu] - size_ideal) +
                   0.05 * dev;
        }
        return obj;
    };
    for (int round = 0; round < 500; ++round) {
        double current = objective();
        double best_obj = current;
        size_t best_group = 0;
        int best_fold = -1;
        for (size_t gi = 0; gi < groups.size(); ++gi) {
            const int from = assignment[gi];
            if (fold_total[static_cast<size_t>(from)] <= groups[gi].total) continue;  // never empty a fold
            for (int to = 0; to < k; ++to) {
                if (to == from) continue;
                fold_pos[static_cast<size_t>(from)] -= groups[gi].pos;
                fold_total[static_cast<size_t>(from)] -= groups[gi].total;
                fold_pos[static_cast<size_t>(to)] += groups[gi].pos;
                fold_total[static_cast<size_t>(to)] += groups[gi].total;
                const double obj = objective();
                fold_pos[static_cast<size_t>(from)] += groups[gi].pos;
                fold_total[static_cast<size_t>(from)] += groups[gi].total;
                fold_pos[static_cast<size_t>(to)] -= groups[gi].pos;
                fold_total[static_cast<size_t>(to)] -= groups[gi].total;
                if (obj < best_obj - 1e-9) {
                    best_obj = obj;
                    best_group = gi;
                    best_fold = to;
                }
            }
        }
        if (best_fold < 0) break;
        const int from = assignment[best_group];
        fold_pos[static_cast<size_t>(from)] -= groups[best_group].pos;
        fold_total[static_cast<size_t>(from)] -= groups[best_group].total;
        fold_pos[static_cast<size_t>(best_fold)] += groups[best_group].pos;
        fold_total[static_cast<size_t>(best_fold)] += groups[best_group].total;
        assignment[best_group] = best_fold;
    }

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.validation_videos.resize(static_cast<size_t>(k));
    for (size_t gi = 0; gi < groups.size(); ++gi) {
        for (const auto& vid : groups[gi].videos) {
            plan.validation_videos[static_cast<size_t>(assignment[gi])].insert(vid);
        }
    }
    return plan;
}

// ---------------------------------------------------------------------------

RobustScaler fit_robust_scaler(const Matrix& rows) {
    if (rows.size() < 2) throw GaitError("need at least 2 samples to fit a scaler");
    const size_t d = rows[0].size();
    RobustScaler s;
    s.center.resize(d);
    s.scale.resize(d);
    std::vector<double> column(rows.size());
    for (size_t j = 0; j < d; ++j) {
        for (size_t i = 0; i < rows.size(); ++i) column[i] = rows[i][j];
        s.center[j] = median(column);
        const double iqr = quantile(column, 0.75) - quantile(column, 0.25);
        s.scale[j] = iqr == 0.0 ? 1.0 : iqr;
    }
    return s;
}

Matrix apply_scaler(const RobustScaler& scaler, const Matrix& rows) {
    Matrix out = rows;
    for (auto& row : out) {
        for (size_t j = 0; j < row.size(); ++j) {
            row[j] = (row[j] - scaler.center[j]) / scaler.scale[j];
        }
    }
    return out;
}

SmoteResult smote_oversample(const Matrix& rows, const std::vector<int>& labels, int k_neighbors,
                             uint64_t seed) {
    if (rows.size() != labels.size()) throw GaitError("bad smote input shape");
    if (k_neighbors < 1) throw GaitError("k_neighbors must be >= 1");
    SmoteResult res;
    res.features = rows;
    res.labels = labels;

    std::vector<size_t> idx0, idx1;
    for (size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? idx1 : idx0).push_back(i);
    if (idx0.size() == idx1.size()) return res;
    const int minority_label = idx0.size() < idx1.size() ? 0 : 1;
    const auto& minority = minority_label == 0 ? idx0 : idx1;
    const size_t need = (minority_label == 0 ? idx1.size() : idx0.size()) - minority.size();
    if (minority.size() < 2) throw GaitError("cannot interpolate");

    const size_t k = std::min<size_t>(static_cast<size_t>(k_neighbors), minority.size() - 1);
    // k nearest minority neighbours per minority point (Euclidean, ties by index).
    std::vector<std::vector<size_t>> neighbors(minority.size());
    for (size_t a = 0; a < minority.size(); ++a) {
        std::vector<std::pair<double, size_t>> dists;
        for (size_t b = 0; b < minority.size(); ++b) {
            if (a == b) continue;
            double d2 = 0.0;
            const auto& xa = rows[minority[a]];
            const auto& xb = rows[minority[b]];
            for (size_t j = 0; j < xa.size(); ++j) {
                const double diff = xa[j] - xb[j];
                d2 += diff * diff;
            }
            dists.push_back({d2, b});
        }
        std::sort(dists.begin(), dists.end());
        for (size_t i = 0; i < k; ++i) neighbors[a].push_back(dists[i].second);
    }

    Rng rng(derive_seed(seed, 67));
    for (size_t t = 0; t < need; ++t) {
        const size_t a = t % minority.size();
        const size_t b = neighbors[a][rng.below(k)];
        const double u = rng.uniform();
        const auto& xa = rows[minority[a]];
        const auto& xb = rows[minority[b]];
        std::vector<double> x_new(xa.size());
        for (size_t j = 0; j < xa.size(); ++j) x_new[j] = xa[j] + u * (xb[j] - xa[j]);
        res.features.push_back(std::move(x_new));
        res.labels.push_back(minority_label);
        ++res.synthesized;
    }
    return res;
}

// ---------------------------------------------------------------------------

Confusion confusion_matrix(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size()) throw GaitError("prediction size mismatch");
    Confusion c;
    for (size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == 1) {
            y_pred[i] == 1 ? ++c.tp : ++c.fn;
        } else {
            y_pred[i] == 1 ? ++c.fp : ++c.tn;
        }
    }
    return c;
}

namespace {

double f1_of(long tp, long fp, long fn) {
    const long denom = 2 * tp + fp + fn;
    return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

double macro_f1_fraction(const Confusion& c) {
    // Class 1 (lame) and class 0 (normal) F1, averaged.
    return 0.5 * (f1_of(c.tp, c.fp, c.fn) + f1_of(c.tn, c.fn, c.fp));
}

}  // namespace

FoldMetrics metrics_from_confusion(const Confusion& c) {
    FoldMetrics m;
    m.confusion = c;
    m.accuracy = 100.0 * static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    m.f1_macro = 100.0 * macro_f1_fraction(c);
    if (c.tp + c.fn > 0) {
        m.sensitivity = 100.0 * static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    }
    if (c.tn + c.fp > 0) {
        m.specificity = 100.0 * static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
    }
    return m;
}

namespace {

struct FoldSplit {
    Matrix x_train;
    std::vector<int> y_train;
    Matrix x_val;
    std::vector<int> y_val;
};

FoldSplit split_fold(const LabeledDataset& data, const FoldPlan& folds, int fold) {
    FoldSplit s;
    const auto& val = folds.validation_videos[static_cast<size_t>(fold)];
    for (const auto& row : data.rows) {
        if (val.count(row.video_id)) {
            s.x_val.push_back(row.features);
            s.y_val.push_back(row.label);
        } else {
            s.x_train.push_back(row.features);
            s.y_train.push_back(row.label);
        }
    }
    return s;
}

struct FittedFold {
    RobustScaler scaler;
    std::unique_ptr<Classifier> model;
    Matrix x_val;  // scaled
    std::vector<int> y_val;
};

}  // namespace

RobustScaler fold_scaler(const LabeledDataset& data, const FoldPlan& folds, int fold) {
    return fit_robust_scaler(split_fold(data, folds, fold).x_train);
}

namespace {

// Per-fold pipeline: scaler and SMOTE see the training split only.
FittedFold fit_fold(const ClassifierSpec& spec, const LabeledDataset& data, const FoldPlan& folds,
                    int fold) {
    auto split = split_fold(data, folds, fold);
    FittedFold out;
    out.scaler = fold_scaler(data, folds, fold);
    Matrix x_train = apply_scaler(out.scaler, split.x_train);
    const int k_neighbors = static_cast<int>(spec.param("smote_k", 5));
    auto balanced = smote_oversample(x_train, split.y_train, k_neighbors,
                                     derive_seed(spec.seed, 71, static_cast<uint64_t>(fold)));
    ClassifierSpec fold_spec = spec;
    fold_spec.seed = derive_seed(spec.seed, 73, static_cast<uint64_t>(fold));
    out.model = make_classifier(fold_spec);
    out.model->fit(balanced.features, balanced.labels);
    out.x_val = apply_scaler(out.scaler, split.x_val);
    out.y_val = split.y_val;
    return out;
}

void finalize_means(MetricsReport& report) {
    double acc = 0.0, f1 = 0.0;
    double sens = 0.0, spec = 0.0;
    int n_sens = 0, n_spec = 0;
    for (const auto& fm : report.folds) {
        acc += fm.accuracy;
        f1 += fm.f1_macro;
        if (fm.sensitivity) {
            sens += *fm.sensitivity;
            ++n_sens;
        }
        if (fm.specificity) {
            spec += *fm.specificity;
            ++n_spec;
        }
    }
    const auto n = static_cast<double>(report.folds.size());
    report.accuracy = acc / n;
    report.f1_macro = f1 / n;
    if (n_sens > 0) report.sensitivity = sens / n_sens;
    if (n_spec > 0) report.specificity = spec / n_spec;
}

}  // namespace

MetricsReport evaluate_cv(const ClassifierSpec& spec, const LabeledDataset& data,
                          const FoldPlan& folds) {
    MetricsReport report;
    for (int f = 0; f < folds.k; ++f) {
        auto fitted = fit_fold(spec, data, folds, f);
        const auto pred = fitted.model->predict(fitted.x_val);
        report.folds.push_back(metrics_from_confusion(confusion_matrix(fitted.y_val, pred)));
    }
    finalize_means(report);
    return report;
}

const SearchSpace& default_search_space(ClassifierKind kind) {
    static const std::map<ClassifierKind, SearchSpace> spaces = {
        {ClassifierKind::LogisticRegression,
         {{"lr", {0.01, 0.5, true, false}},
          {"epochs", {150, 1200, true, true}},
          {"l2", {1e-5, 0.5, true, false}}}},
        {ClassifierKind::SvmLinear, {{"C", {0.01, 100.0, true, false}}}},
        {ClassifierKind::SvmRbf,
         {{"C", {0.1, 100.0, true, false}}, {"gamma", {0.01, 10.0, true, false}}}},
        {ClassifierKind::RandomForest,
         {{"n_trees", {50, 301, false, true}},
          {"max_depth", {2, 13, false, true}},
          {"min_leaf", {1, 9, false, true}}}},
        {ClassifierKind::GradientBoosting,
         {{"n_rounds", {50, 400, true, true}},
          {"max_depth", {1, 5, false, true}},
          {"learning_rate", {0.01, 0.3, true, false}}}},
        {ClassifierKind::Mlp,
         {{"hidden", {4, 64, true, true}},
          {"lr", {0.005, 0.2, true, false}},
          {"epochs", {200, 1200, true, true}},
          {"l2", {1e-6, 1e-2, true, false}}}},
    };
    return spaces.at(kind);
}

std::map<std::string, double> sample_params(const SearchSpace& space, Rng& rng) {
    std::map<std::string, double> p;
    for (const auto& [name, range] : space) {  // map order keeps draws deterministic
        double v = range.log_scale
                       ? std::exp(rng.uniform(std::log(range.lo), std::log(range.hi)))
                       : rng.uniform(range.lo, range.hi);
        if (range.integer) v = std::floor(v);
        p[name] = v;
    }
    return p;
}

std::map<std::string, double> sample_search_params(ClassifierKind kind, Rng& rng) {
    return sample_params(default_search_space(kind), rng);
}

ClassifierSpec random_search(ClassifierKind kind, const LabeledDataset& data,
                             const FoldPlan& folds, int n_iter, uint64_t seed,
                             const SearchSpace* space) {
    if (n_iter < 1) throw GaitError("n_iter must be >= 1");
    const SearchSpace& ranges = space ? *space : default_search_space(kind);
    ClassifierSpec best;
    double best_f1 = -1.0;
    for (int i = 0; i < n_iter; ++i) {
        Rng rng(derive_seed(seed, 79, static_cast<uint64_t>(i)));
        ClassifierSpec spec;
        spec.kind = kind;
        spec.params = sample_params(ranges, rng);
        spec.seed = derive_seed(seed, 83, static_cast<uint64_t>(i));
        const auto report = evaluate_cv(spec, data, folds);
        if (report.f1_macro > best_f1 + 1e-12) {  // first encountered wins ties
            best_f1 = report.f1_macro;
            best = spec;
        }
    }
    return best;
}

ImportanceReport permutation_importance(const ClassifierSpec& spec, const LabeledDataset& data,
                                        const FoldPlan& folds, int n_perm, uint64_t seed) {
    if (n_perm < 1) throw GaitError("n_perm must be >= 1");
    const size_t d = data.feature_names.size();
    std::vector<double> sum(d, 0.0), sum_sq(d, 0.0);
    long samples = 0;

    for (int f = 0; f < folds.k; ++f) {
        auto fitted = fit_fold(spec, data, folds, f);
        const double baseline =
            macro_f1_fraction(confusion_matrix(fitted.y_val, fitted.model->predict(fitted.x_val)));
        const size_t n_val = fitted.x_val.size();
        Matrix shuffled = fitted.x_val;
        for (size_t j = 0; j < d; ++j) {
            for (int rep = 0; rep < n_perm; ++rep) {
                Rng rng(derive_seed(seed, 89,
                                    (static_cast<uint64_t>(f) << 40) ^
                                        (static_cast<uint64_t>(j) << 20) ^
                                        static_cast<uint64_t>(rep)));
                std::vector<size_t> order(n_val);
                for (size_t i = 0; i < n_val; ++i) order[i] = i;
                rng.shuffle(order);
                for (size_t i = 0; i < n_val; ++i) shuffled[i][j] = fitted.x_val[order[i]][j];
                const double f1 = macro_f1_fraction(
                    confusion_matrix(fitted.y_val, fitted.model->predict(shuffled)));
                const double drop = baseline - f1;
                sum[j] += drop;
                sum_sq[j] += drop * drop;
            }
            for (size_t i = 0; i < n_val; ++i) shuffled[i][j] = fitted.x_val[i][j];
        }
        ++samples;
    }

    const double n = static_cast<double>(samples) * n_perm;
    std::vector<int> order(d);
    for (size_t j = 0; j < d; ++j) order[j] = static_cast<int>(j);
    std::vector<double> means(d), sds(d);
    for (size_t j = 0; j < d; ++j) {
        means[j] = sum[j] / n;
        const double var = std::max(sum_sq[j] / n - means[j] * means[j], 0.0);
        sds[j] = std::sqrt(var);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return means[static_cast<size_t>(a)] > means[static_cast<size_t>(b)]; });

    ImportanceReport report;
    for (int j : order) {
        report.ranking.push_back(j);
        report.ranked.push_back({data.feature_names[static_cast<size_t>(j)],
                                 means[static_cast<size_t>(j)], sds[static_cast<size_t>(j)]});
    }
    return report;
}

const std::vector<TraitGroup>& trait_groups() {
    static const std::vector<TraitGroup> groups = {
        {"BPM", {0}}, {"HBA", {1}}, {"TRK", {2, 3}},
        {"STL", {4, 5}}, {"STD", {6, 7}}, {"SWD", {8, 9}},
    };
    return groups;
}

std::vector<int> group_ranking_from_importance(const ImportanceReport& report,
                                               const std::vector<std::string>& feature_names) {
    std::map<std::string, double> by_name;
    for (const auto& fi : report.ranked) by_name[fi.feature] = fi.mean;
    const auto& groups = trait_groups();
    std::vector<std::pair<double, int>> scored;
    for (size_t g = 0; g < groups.size(); ++g) {
        double best = -1e300;
        for (int c : groups[g].columns) {
            const auto it = by_name.find(feature_names[static_cast<size_t>(c)]);
            if (it != by_name.end()) best = std::max(best, it->second);
        }
        scored.push_back({best, static_cast<int>(g)});
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<int> order;
    for (const auto& [score, g] : scored) order.push_back(g);
    return order;
}

std::vector<MetricsReport> ablation_study(const ClassifierSpec& spec, const LabeledDataset& data,
                                          const FoldPlan& folds,
                                          const std::vector<int>& group_order) {
    const auto& groups = trait_groups();
    std::vector<MetricsReport> out;
    std::vector<int> columns;
    for (int g : group_order) {
        for (int c : groups[static_cast<size_t>(g)].columns) columns.push_back(c);
        std::vector<int> sorted_cols = columns;
        std::sort(sorted_cols.begin(), sorted_cols.end());
        out.push_back(evaluate_cv(spec, data.select_features(sorted_cols), folds));
    }
    return out;
}

}  // namespace gait
