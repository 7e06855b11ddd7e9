#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gait/common.hpp"

namespace gait {

struct ScoreRow {
    std::string video_id;
    std::string cow_id;
    int64_t recorded_at = 0;  // epoch seconds, parsed from ISO-8601
    std::string observer_id;
    int score = 0;  // ordinal 1..5
};

struct ScoreTable {
    std::vector<ScoreRow> rows;
};

int64_t parse_iso8601(const std::string& text);
ScoreTable load_score_csv(const std::string& path);

// A unit is one item with the (>= 1) ratings it received; reliability and
// agreement run over units with at least two ratings.
using RatingUnits = std::vector<std::vector<int>>;

RatingUnits units_by_video(const ScoreTable& table);

struct AlphaResult {
    double alpha = 0.0;
    bool degenerate = false;  // single category everywhere: D_e = 0, alpha pinned to 1
};

// Krippendorff's alpha for ordinal data, computed from the coincidence matrix
// with the cumulative-marginal ordinal metric. Errors with "no comparable
// pairs" when every unit carries fewer than two ratings.
AlphaResult krippendorff_alpha_ordinal(const RatingUnits& units);

struct AgreementResult {
    double pa = 0.0;                                // percentage of agreeing pairs
    std::map<int, std::optional<double>> sa;        // per assigned category; nullopt = absent
};

AgreementResult percent_agreement(const RatingUnits& units);

struct VideoPair {
    std::string video_a;
    std::string video_b;
    std::string cow_id;
};

// All pairs of videos of the same cow recorded strictly less than
// window_hours apart; the repeat set behind the intra-observer approximation.
std::vector<VideoPair> pair_repeats(const ScoreTable& table, double window_hours);

// Intra-observer rating units for one observer: one unit per repeat pair the
// observer scored on both sides.
RatingUnits intra_observer_units(const ScoreTable& table, const std::vector<VideoPair>& pairs,
                                 const std::string& observer_id);

struct ReliabilityReport {
    AlphaResult alpha;
    AgreementResult agreement;
};

ReliabilityReport inter_observer_report(const ScoreTable& table);
std::map<std::string, ReliabilityReport> intra_observer_reports(const ScoreTable& table,
                                                                double window_hours);

enum class MergeStrategy { Mean, Majority, Weighted, TauVote };

MergeStrategy merge_strategy_from_name(const std::string& name);
const char* merge_strategy_name(MergeStrategy s);

struct MergeParams {
    double tau = 0.602;
    double intra_window_hours = 48.0;
    // Per-observer intra-observer alpha used by weighted and tau voting;
    // computed from the repeat pairs when not supplied.
    std::map<std::string, double> observer_alpha;
};

struct MergedLabel {
    std::string video_id;
    std::string cow_id;
    int merged_score = 0;
    int binary = -1;  // set by binarize: 0 normal, 1 lame
};

struct MergedLabels {
    std::vector<MergedLabel> labels;
    MergeStrategy strategy = MergeStrategy::Majority;
    std::map<std::string, double> weights;  // normalized weights / eligibility trace
};

MergedLabels merge_scores(const ScoreTable& table, MergeStrategy strategy,
                          const MergeParams& params = {});

// Maps merged score 1 -> 0 (normal) and 2..5 -> 1 (lame).
void binarize(MergedLabels& labels);

void save_labels_csv(const std::string& path, const MergedLabels& labels);

}  // namespace gait
