#pragma once

#include <array>
#include <string>
#include <vector>

#include "gait/common.hpp"

namespace gait {

// The nine anatomical landmarks tracked per frame. Numbering follows the
// conventional layout: hooves 1-4, then head and spine landmarks.
enum class KeypointId : int {
    LeftHindHoof = 1,
    RightHindHoof = 2,
    LeftFrontHoof = 3,
    RightFrontHoof = 4,
    Nose = 5,
    Forehead = 6,
    Withers = 7,
    Sacrum = 8,
    CaudalThoracic = 9,
};

constexpr int kKeypointCount = 9;

constexpr std::array<KeypointId, 4> kHooves = {
    KeypointId::LeftHindHoof,
    KeypointId::RightHindHoof,
    KeypointId::LeftFrontHoof,
    KeypointId::RightFrontHoof,
};

inline int keypoint_index(KeypointId id) { return static_cast<int>(id) - 1; }

const char* keypoint_code(KeypointId id);           // CSV code, e.g. "LH", "NOSE"
KeypointId keypoint_from_code(const std::string& code);

enum class Direction { Unset, LeftToRight, RightToLeft };

// One video's keypoint time series in pixel coordinates. Frames are
// contiguous from 0; every frame carries all nine keypoints.
struct TrajectorySet {
    std::string video_id;
    std::string cow_id;
    double frame_rate = 30.0;
    std::vector<std::array<Point, kKeypointCount>> frames;
    Direction direction = Direction::Unset;

    int frame_count() const { return static_cast<int>(frames.size()); }

    const Point& at(int frame, KeypointId id) const {
        return frames[static_cast<size_t>(frame)][static_cast<size_t>(keypoint_index(id))];
    }
    Point& at(int frame, KeypointId id) {
        return frames[static_cast<size_t>(frame)][static_cast<size_t>(keypoint_index(id))];
    }

    std::vector<double> channel_x(KeypointId id) const;
    std::vector<double> channel_y(KeypointId id) const;

    bool operator==(const TrajectorySet& other) const;
};

// Head length in pixels: per-video median of the Forehead-Nose distance.
struct HeadLength {
    double h = 0.0;
};

// Loads every video found in a trajectory CSV (long format, one row per
// frame x keypoint). Each video is validated: nine keypoints per frame,
// frames contiguous from 0, at least two frames, no duplicate rows.
std::vector<TrajectorySet> load_trajectory_csv(const std::string& path, double frame_rate = 30.0);

// Single-video convenience wrapper; errors if the file holds more than one video.
TrajectorySet load_trajectories(const std::string& path, double frame_rate = 30.0);

void save_trajectory_csv(const std::string& path, const std::vector<TrajectorySet>& trajectories);

// Canonicalizes walking direction to left-to-right by mirroring x when the
// sacrum's net displacement is negative. Errors with "cow not walking" when
// the net displacement is below one head length.
TrajectorySet normalize_direction(const TrajectorySet& traj);

HeadLength head_length(const TrajectorySet& traj);

}  // namespace gait
