#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "gait/filters.hpp"
#include "gait/ml.hpp"
#include "gait/scoring.hpp"
#include "gait/steps.hpp"
#include "gait/synth.hpp"

namespace gait {

using Json = nlohmann::json;

struct SynthStageConfig {
    bool enabled = false;
    int n_healthy = 20;
    int n_lame = 20;
    JitterSpec jitter;
};

struct CvStageConfig {
    uint64_t seed = 0;
    int k = 5;
    int n_iter = 100;
    int n_perm = 100;
    bool search = false;  // random-search hyper-parameters before the final CV
    std::vector<std::string> classifiers;  // empty = all six
    std::map<std::string, std::map<std::string, double>> params;  // per-classifier overrides
    std::map<std::string, SearchSpace> search_spaces;  // per-classifier range overrides
};

struct PipelineConfig {
    std::string trajectories_csv;  // empty + synth.enabled -> generated input
    std::string scores_csv;        // observer scores (merged into labels)
    std::string labels_csv;        // pre-merged labels (video_id,merged_score,binary_label)
    std::string out_dir = "out";
    double frame_rate = 30.0;
    SynthStageConfig synth;
    FilterParams filter;
    StepParams steps;
    std::string merge_strategy = "tau_vote";
    double tau = 0.602;
    double intra_window_hours = 48.0;
    CvStageConfig cv;
};

PipelineConfig config_from_json(const Json& j);
Json config_to_json(const PipelineConfig& config);
PipelineConfig load_config(const std::string& path);

Json timeline_to_json(const std::string& video_id, const StepTimeline& timeline);
StepTimeline timeline_from_json(const Json& j);

Json metrics_to_json(const MetricsReport& report);
Json reliability_to_json(const ScoreTable& table, double window_hours);
Json importance_to_json(const ImportanceReport& report);
std::string importance_to_csv(const ImportanceReport& report);
std::string ablation_to_csv(const std::vector<MetricsReport>& reports,
                            const std::vector<int>& group_order);
std::map<std::string, int> load_binary_labels(const std::string& path);

// Executes the full study: acquire -> filter -> steps -> traits -> labels ->
// cv -> importance -> ablation, persisting every intermediate artifact plus a
// manifest into config.out_dir. Videos failing a stage are excluded and
// listed; a stage-level failure aborts with a stage-tagged error after the
// manifest is written.
void run_pipeline(const PipelineConfig& config);

// Rewrites stage outputs as plot-ready CSV series (trajectory overlays, step
// markers, per-class feature distributions, importance bars, ablation curve).
void emit_plot_data(const std::string& run_dir, const std::string& plots_dir);

}  // namespace gait
