#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gait/common.hpp"
#include "gait/traits.hpp"

namespace gait {

using Matrix = std::vector<std::vector<double>>;

struct LabeledRow {
    std::string video_id;
    std::string cow_id;
    std::vector<double> features;
    int label = 0;  // 1 = lame (positive class)
};

struct LabeledDataset {
    std::vector<std::string> feature_names;
    std::vector<LabeledRow> rows;

    LabeledDataset select_features(const std::vector<int>& columns) const;
    Matrix feature_matrix() const;
    std::vector<int> labels() const;
};

// Feature records as written to / read from the features CSV; invalid videos
// keep their ids but carry no usable feature values.
struct FeatureRecord {
    FeatureVector features;
    bool valid = true;
};

void save_features_csv(const std::string& path, const std::vector<FeatureRecord>& records);
std::vector<FeatureRecord> load_features_csv(const std::string& path);

// Joins valid feature rows with binary labels (by video_id).
LabeledDataset make_dataset(const std::vector<FeatureRecord>& records,
                            const std::map<std::string, int>& binary_labels);

// ---------------------------------------------------------------------------
// Folds

struct FoldPlan {
    int k = 5;
    uint64_t seed = 0;
    std::vector<std::set<std::string>> validation_videos;  // one set per fold

    int fold_of(const std::string& video_id) const;
};

// Greedy group-aware stratified assignment: cow groups sorted by size
// descending (seeded shuffle breaks size ties), each placed on the fold that
// minimizes the deviation of its positive-class count from the stratified
// ideal, then fold size, then fold index.
FoldPlan make_folds(const LabeledDataset& data, int k, uint64_t seed);

// ---------------------------------------------------------------------------
// Preprocessing

struct RobustScaler {
    std::vector<double> center;  // per-feature median
    std::vector<double> scale;   // per-feature IQR, 1 where degenerate
};

RobustScaler fit_robust_scaler(const Matrix& rows);
Matrix apply_scaler(const RobustScaler& scaler, const Matrix& rows);

struct SmoteResult {
    Matrix features;
    std::vector<int> labels;
    int synthesized = 0;
};

// Balances the classes by interpolating new minority samples between existing
// minority points and their k nearest minority neighbours.
SmoteResult smote_oversample(const Matrix& rows, const std::vector<int>& labels, int k_neighbors,
                             uint64_t seed);

// ---------------------------------------------------------------------------
// Classifiers

enum class ClassifierKind {
    LogisticRegression,
    SvmLinear,
    SvmRbf,
    RandomForest,
    GradientBoosting,
    Mlp,
};

ClassifierKind classifier_kind_from_name(const std::string& name);
const char* classifier_kind_name(ClassifierKind kind);
const std::vector<ClassifierKind>& all_classifier_kinds();

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::SvmRbf;
    std::map<std::string, double> params;  // missing keys fall back to defaults
    uint64_t seed = 0;

    double param(const std::string& name, double fallback) const {
        auto it = params.find(name);
        return it == params.end() ? fallback : it->second;
    }
};

class Classifier {
public:
    virtual ~Classifier() = default;
    virtual void fit(const Matrix& x, const std::vector<int>& y) = 0;
    virtual std::vector<int> predict(const Matrix& x) const = 0;
};

std::unique_ptr<Classifier> make_classifier(const ClassifierSpec& spec);

// ---------------------------------------------------------------------------
// Evaluation

struct Confusion {
    long tp = 0, fp = 0, tn = 0, fn = 0;
    long total() const { return tp + fp + tn + fn; }
};

Confusion confusion_matrix(const std::vector<int>& y_true, const std::vector<int>& y_pred);

// Percentages; sensitivity/specificity are absent when their class is missing
// from the validation split.
struct FoldMetrics {
    Confusion confusion;
    double accuracy = 0.0;
    double f1_macro = 0.0;
    std::optional<double> sensitivity;
    std::optional<double> specificity;
};

FoldMetrics metrics_from_confusion(const Confusion& c);

struct MetricsReport {
    std::vector<FoldMetrics> folds;
    double accuracy = 0.0;
    double f1_macro = 0.0;
    std::optional<double> sensitivity;
    std::optional<double> specificity;
};

// Fits scaler + SMOTE on each training split only, trains, and scores the
// validation split; reports per-fold metrics and their means.
MetricsReport evaluate_cv(const ClassifierSpec& spec, const LabeledDataset& data,
                          const FoldPlan& folds);

// The scaler the cross-validation pipeline fits for one fold; depends on the
// training split only.
RobustScaler fold_scaler(const LabeledDataset& data, const FoldPlan& folds, int fold);

// Hyper-parameter search ranges; log_scale draws exp-uniformly, integer
// floors the draw.
struct ParamRange {
    double lo = 0.0;
    double hi = 1.0;
    bool log_scale = false;
    bool integer = false;
};
using SearchSpace = std::map<std::string, ParamRange>;

const SearchSpace& default_search_space(ClassifierKind kind);

std::map<std::string, double> sample_params(const SearchSpace& space, Rng& rng);

// One draw from a classifier's default search space.
std::map<std::string, double> sample_search_params(ClassifierKind kind, Rng& rng);

// Random hyper-parameter search maximizing mean macro-F1 over the folds;
// first-encountered draw wins ties. Draw i uses parameter stream
// derive_seed(seed, 79, i) and trains with seed derive_seed(seed, 83, i).
// A null space means the classifier's default search space.
ClassifierSpec random_search(ClassifierKind kind, const LabeledDataset& data,
                             const FoldPlan& folds, int n_iter, uint64_t seed,
                             const SearchSpace* space = nullptr);

struct FeatureImportance {
    std::string feature;
    double mean = 0.0;    // mean F1 drop (fractional F1 units)
    double stddev = 0.0;  // spread over fold x permutation samples
};

struct ImportanceReport {
    std::vector<FeatureImportance> ranked;  // descending by mean
    std::vector<int> ranking;               // original column indices, same order
};

ImportanceReport permutation_importance(const ClassifierSpec& spec, const LabeledDataset& data,
                                        const FoldPlan& folds, int n_perm, uint64_t seed);

// The six trait groups used by the incremental-feature study.
struct TraitGroup {
    std::string name;
    std::vector<int> columns;
};
const std::vector<TraitGroup>& trait_groups();

// Group order implied by a feature ranking: groups sorted by their best
// member feature.
std::vector<int> group_ranking_from_importance(const ImportanceReport& report,
                                               const std::vector<std::string>& feature_names);

// Re-trains with the top-1, top-2, ... top-n trait groups.
std::vector<MetricsReport> ablation_study(const ClassifierSpec& spec, const LabeledDataset& data,
                                          const FoldPlan& folds,
                                          const std::vector<int>& group_order);

}  // namespace gait
