#pragma once

#include <array>
#include <optional>
#include <vector>

#include "gait/filters.hpp"
#include "gait/trajectory.hpp"

namespace gait {

// Hoof order used for all per-leg arrays: LH, RH, LF, RF.
constexpr int kLegCount = 4;
inline int leg_index(KeypointId hoof) { return static_cast<int>(hoof) - 1; }
inline KeypointId leg_keypoint(int leg) { return static_cast<KeypointId>(leg + 1); }
const char* leg_code(int leg);

// Contralateral leg of the same girdle: LH<->RH, LF<->RF.
inline int opposite_leg(int leg) { return leg ^ 1; }
inline bool is_hind(int leg) { return leg < 2; }

struct StancePhase {
    int start = 0;  // first frame of the plateau
    int end = 0;    // last frame of the plateau
    int length() const { return end - start + 1; }
};

struct StepParams {
    int stance_min_frames = 10;
    int stance_tol_px = 10;
    int accel_filter_size = 3;
};

struct LegEvents {
    std::vector<StancePhase> stances;
    std::vector<int> midswings;
};

struct FrameRange {
    int first = 0;
    int last = 0;
};

struct StepTimeline {
    std::array<LegEvents, kLegCount> legs;
    double gait_period = 0.0;  // frames; median hind inter-stance-start interval
    FrameRange valid_range;
};

// Maximal runs of consecutive frames whose frame-to-frame |dx| stays within
// tol, kept when at least min_len frames long.
std::vector<StancePhase> detect_stances(const Series& x, int min_len, double tol);

// One mid-swing per inter-stance gap (including leading/trailing gaps) of at
// least 3 frames: the frame maximizing uniform_filter(second_derivative(x), 3)
// within the gap, earliest frame on ties.
std::vector<int> detect_midswings(const Series& x, const std::vector<StancePhase>& stances,
                                  int accel_filter_size = 3);

// Gait-consistency validation: a mid-swing may not fall inside its own leg's
// stance and must be covered by a stance of the contralateral leg of the same
// girdle. Frames of rule-violating steps are invalidated and the timeline is
// trimmed to the longest contiguous clean range. Errors with "insufficient
// steps" when any leg keeps fewer than 2 stances.
StepTimeline validate_and_trim(const std::array<LegEvents, kLegCount>& detected, int n_frames);

// Detection over all four hooves of a (filtered) trajectory, then validation.
StepTimeline detect_timeline(const TrajectorySet& traj, const StepParams& params);

}  // namespace gait
