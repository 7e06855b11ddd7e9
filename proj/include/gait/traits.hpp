#pragma once

#include <array>
#include <string>

#include "gait/steps.hpp"
#include "gait/trajectory.hpp"

namespace gait {

// The ten locomotion-trait values of one video, in the canonical column order
// used by the features CSV and the classifier.
struct FeatureVector {
    std::string video_id;
    std::string cow_id;
    double bpm = 0.0;    // back posture: head length / spine circumcircle radius
    double hba = 0.0;    // head bobbing amplitude, pixels
    double trk_l = 0.0;  // tracking distance, head lengths
    double trk_r = 0.0;
    double stl_f = 0.0;  // |right - left| stride length, head lengths
    double stl_h = 0.0;
    double std_f = 0.0;  // |right - left| stance duration, frames
    double std_h = 0.0;
    double swd_f = 0.0;  // |right - left| swing duration, frames
    double swd_h = 0.0;

    std::array<double, 10> values() const {
        return {bpm, hba, trk_l, trk_r, stl_f, stl_h, std_f, std_h, swd_f, swd_h};
    }
};

constexpr std::array<const char*, 10> kFeatureNames = {
    "BPM", "HBA", "TRK_L", "TRK_R", "STL_F", "STL_H", "STD_F", "STD_H", "SWD_F", "SWD_H"};

struct CircleFit {
    Point center;
    double radius = 0.0;  // infinity marks collinear input
    bool collinear() const { return std::isinf(radius); }
};

enum class Side { Left, Right };
enum class Girdle { Front, Hind };

// Exact circumcircle through three distinct points; collinear triples
// (triangle area below 1e-9 * span^2) yield an infinite radius.
CircleFit fit_circle(const Point& p1, const Point& p2, const Point& p3);

// Largest per-leg median of h/r over mid-swing spine fits.
double back_posture(const TrajectorySet& traj, const StepTimeline& timeline, const HeadLength& h);

// Largest DFT amplitude of the forehead y-signal over frequency indices
// k in [1, ceil(N_v / P)], with A_k = |X_k| / N_v.
double head_bobbing(const TrajectorySet& traj, const StepTimeline& timeline);

// Median normalized gap between a front print and the subsequent hind landing
// on the same side.
double tracking_distance(const TrajectorySet& traj, const StepTimeline& timeline,
                         const HeadLength& h, Side side);

double stride_length_diff(const TrajectorySet& traj, const StepTimeline& timeline,
                          const HeadLength& h, Girdle girdle);

double stance_duration_diff(const StepTimeline& timeline, Girdle girdle);

double swing_duration_diff(const StepTimeline& timeline, Girdle girdle);

// Assembles all ten values; any component failure aborts the video with
// "feature extraction failed: <trait>".
FeatureVector extract_features(const TrajectorySet& traj, const StepTimeline& timeline,
                               const HeadLength& h);

}  // namespace gait
