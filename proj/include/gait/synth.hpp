#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gait/steps.hpp"
#include "gait/traits.hpp"
#include "gait/trajectory.hpp"

namespace gait {

// Kinematic model of one walking bout. All four legs share the cycle length
// (stance_frames[leg] + swing_frames[leg] must be equal across legs); hooves
// hold still on their prints during stance and advance by one stride along a
// smoothstep profile during swing.
struct GaitConfig {
    double frame_rate = 30.0;
    int n_cycles = 4;
    std::array<int, kLegCount> stance_frames = {34, 34, 34, 34};  // LH, RH, LF, RF
    std::array<int, kLegCount> swing_frames = {6, 6, 6, 6};
    std::array<double, kLegCount> phase_offsets = {0.0, 0.5, 0.25, 0.70};  // fraction of cycle
    double stride_left_px = 300.0;
    double stride_right_px = 300.0;
    double head_length_px = 120.0;
    double bob_amplitude_px = 0.0;
    double arch_curvature = 0.0;   // 1/px; 0 = straight spine
    double tracking_offset = 0.0;  // head lengths; hind lands this far behind the front print
    double noise_sd = 0.0;
    double outlier_rate = 0.0;     // probability per (frame x keypoint) cell
    uint64_t seed = 0;

    int cycle_frames() const { return stance_frames[0] + swing_frames[0]; }
    int total_frames() const { return n_cycles * cycle_frames(); }
};

// Events and trait values implied analytically by a GaitConfig; never
// re-measured from the generated samples.
struct GroundTruth {
    std::array<std::vector<StancePhase>, kLegCount> stances;  // clipped to the video
    std::array<std::vector<int>, kLegCount> midswings;        // analytic acceleration peaks
    double gait_period = 0.0;
    double head_length = 0.0;
    FeatureVector traits;  // video/cow ids left empty
    int injected_outliers = 0;
};

struct SynthResult {
    TrajectorySet trajectory;
    GroundTruth truth;
};

GaitConfig healthy_preset(uint64_t seed = 0);
GaitConfig lame_preset(uint64_t seed = 0);
GaitConfig preset_by_name(const std::string& name, uint64_t seed = 0);

SynthResult generate(const GaitConfig& config, const std::string& video_id = "synth",
                     const std::string& cow_id = "cow");

// Dataset factory: per-video configs jittered around the two presets, cow ids
// following a configurable repeat-count profile, one binary label per video.
struct JitterSpec {
    double noise_sd = 1.0;
    double outlier_rate = 0.002;
    double trait_jitter = 1.0;  // scales the per-trait spread around each preset
};

struct DatasetRow {
    std::string video_id;
    std::string cow_id;
    int label = 0;  // 0 = healthy, 1 = lame
};

struct SynthDataset {
    std::vector<TrajectorySet> trajectories;
    std::vector<GroundTruth> truths;
    std::vector<DatasetRow> rows;
};

// Default repeat profile: pairs of (videos per cow, number of cows), cycled
// until every video is assigned.
extern const std::vector<std::pair<int, int>> kDefaultRepeatProfile;

SynthDataset generate_dataset(int n_healthy, int n_lame, const JitterSpec& jitter, uint64_t seed);

}  // namespace gait
