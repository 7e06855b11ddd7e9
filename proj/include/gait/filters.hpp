#pragma once

#include <vector>

#include "gait/trajectory.hpp"

namespace gait {

using Series = std::vector<double>;

struct FilterParams {
    int mad_window = 3;
    double mad_k = 3.0;
    // Floor below which a deviation is never an outlier. With a 3-frame
    // window the MAD underestimates sigma badly, so the floor carries most of
    // the guard duty against flagging plain sensor noise.
    double mad_floor_px = 10.0;
    int sg_window = 10;
    int sg_order = 3;
};

struct MadResult {
    Series values;
    int outliers = 0;
};

// Median-absolute-deviation despiking over a centered, edge-truncated window.
// A value is replaced by its window median when it deviates from it by more
// than max(k * 1.4826 * MAD, floor). Windows read the input series, never
// previously corrected values.
MadResult mad_correct(const Series& s, int window, double k, double floor_px);

// Savitzky-Golay smoothing: per-position least-squares polynomial fit over a
// centered window, evaluated at the window's center. Even windows lean one
// sample forward and evaluate at the fractional center (window-1)/2, i.e. at
// i + 0.5. Edges refit on the truncated window with the order clamped to the
// available points.
Series savgol_smooth(const Series& s, int window, int order);

// Central second differences; endpoints copy the nearest interior value.
Series second_derivative(const Series& s);

// Centered moving average with edge truncation. Size 1 is the identity.
Series uniform_filter(const Series& s, int size);

struct CorrectionResult {
    TrajectorySet trajectory;
    double outlier_fraction = 0.0;  // corrected cells / (frames * keypoints)
    int corrected_cells = 0;
};

// MAD despiking followed by Savitzky-Golay smoothing, applied independently
// to every keypoint's x and y channel. A (frame, keypoint) cell counts as
// corrected when either channel was replaced by the MAD step.
CorrectionResult correct_trajectories(const TrajectorySet& traj, const FilterParams& params);

}  // namespace gait
