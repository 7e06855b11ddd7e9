#include "gait/trajectory.hpp"

#include <fstream>
#include <map>
#include <set>

#include "gait/csv.hpp"

namespace gait {

namespace {

struct CodeEntry {
    const char* code;
    KeypointId id;
};

constexpr CodeEntry kCodes[] = {
    {"LH", KeypointId::LeftHindHoof},   {"RH", KeypointId::RightHindHoof},
    {"LF", KeypointId::LeftFrontHoof},  {"RF", KeypointId::RightFrontHoof},
    {"NOSE", KeypointId::Nose},         {"FOREHEAD", KeypointId::Forehead},
    {"WITHERS", KeypointId::Withers},   {"SACRUM", KeypointId::Sacrum},
    {"CAUDAL", KeypointId::CaudalThoracic},
};

}  // namespace

const char* keypoint_code(KeypointId id) {
    for (const auto& e : kCodes) {
        if (e.id == id) return e.code;
    }
    throw GaitError("unknown keypoint id");
}

KeypointId keypoint_from_code(const std::string& code) {
    for (const auto& e : kCodes) {
        if (code == e.code) return e.id;
    }
    throw GaitError("unknown keypoint code: '" + code + "'");
}

std::vector<double> TrajectorySet::channel_x(KeypointId id) const {
    std::vector<double> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(f[static_cast<size_t>(keypoint_index(id))].x);
    return out;
}

std::vector<double> TrajectorySet::channel_y(KeypointId id) const {
    std::vector<double> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(f[static_cast<size_t>(keypoint_index(id))].y);
    return out;
}

bool TrajectorySet::operator==(const TrajectorySet& other) const {
    if (video_id != other.video_id || cow_id != other.cow_id ||
        frame_rate != other.frame_rate || direction != other.direction ||
        frames.size() != other.frames.size()) {
        return false;
    }
    for (size_t t = 0; t < frames.size(); ++t) {
        for (int k = 0; k < kKeypointCount; ++k) {
            const auto ku = static_cast<size_t>(k);
            if (frames[t][ku].x != other.frames[t][ku].x ||
                frames[t][ku].y != other.frames[t][ku].y) {
                return false;
            }
        }
    }
    return true;
}

std::vector<TrajectorySet> load_trajectory_csv(const std::string& path, double frame_rate) {
    if (frame_rate <= 0.0) throw GaitError("frame rate must be positive");
    const auto table = csv::read_file(path);
    const int c_video = table.column("video_id");
    const int c_cow = table.column("cow_id");
    const int c_frame = table.column("frame");
    const int c_kp = table.column("keypoint");
    const int c_x = table.column("x");
    const int c_y = table.column("y");
    if (c_video < 0 || c_cow < 0 || c_frame < 0 || c_kp < 0 || c_x < 0 || c_y < 0) {
        throw GaitError("trajectory csv missing required columns: " + path);
    }

    // video -> frame -> keypoint index -> point
    std::map<std::string, std::map<long, std::map<int, Point>>> data;
    std::map<std::string, std::string> cows;
    std::vector<std::string> order;

    for (const auto& row : table.rows) {
        const std::string& vid = row[static_cast<size_t>(c_video)];
        const std::string& cow = row[static_cast<size_t>(c_cow)];
        const long frame = csv::parse_long(row[static_cast<size_t>(c_frame)], "frame");
        if (frame < 0) throw GaitError("negative frame index in " + vid);
        const KeypointId kp = keypoint_from_code(row[static_cast<size_t>(c_kp)]);
        Point p;
        p.x = csv::parse_double(row[static_cast<size_t>(c_x)], "x coordinate");
        p.y = csv::parse_double(row[static_cast<size_t>(c_y)], "y coordinate");
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw GaitError("non-finite coordinate in " + vid);
        }

        if (!data.count(vid)) {
            order.push_back(vid);
            cows[vid] = cow;
        } else if (cows[vid] != cow) {
            throw GaitError("conflicting cow_id for video " + vid);
        }
        auto& cell = data[vid][frame];
        if (cell.count(keypoint_index(kp))) {
            throw GaitError("duplicate (frame, keypoint) row in " + vid);
        }
        cell[keypoint_index(kp)] = p;
    }

    std::vector<TrajectorySet> out;
    for (const auto& vid : order) {
        const auto& frames = data[vid];
        TrajectorySet traj;
        traj.video_id = vid;
        traj.cow_id = cows[vid];
        traj.frame_rate = frame_rate;
        if (frames.size() < 2) throw GaitError("fewer than 2 frames in " + vid);
        long expected = 0;
        for (const auto& [frame, kps] : frames) {
            if (frame != expected) throw GaitError("non-contiguous frames in " + vid);
            ++expected;
            if (kps.size() != kKeypointCount) throw GaitError("incomplete frame in " + vid);
            std::array<Point, kKeypointCount> arr;
            for (const auto& [idx, p] : kps) arr[static_cast<size_t>(idx)] = p;
            traj.frames.push_back(arr);
        }
        out.push_back(std::move(traj));
    }
    if (out.empty()) throw GaitError("no trajectories in " + path);
    return out;
}

TrajectorySet load_trajectories(const std::string& path, double frame_rate) {
    auto all = load_trajectory_csv(path, frame_rate);
    if (all.size() != 1) {
        throw GaitError("expected a single video in " + path + ", found " +
                        std::to_string(all.size()));
    }
    return all[0];
}

void save_trajectory_csv(const std::string& path, const std::vector<TrajectorySet>& trajectories) {
    std::ofstream out(path);
    if (!out) throw GaitError("cannot write file: " + path);
    out << "video_id,cow_id,frame,keypoint,x,y\n";
    for (const auto& traj : trajectories) {
        for (int t = 0; t < traj.frame_count(); ++t) {
            for (int k = 1; k <= kKeypointCount; ++k) {
                const auto id = static_cast<KeypointId>(k);
                const Point& p = traj.at(t, id);
                out << traj.video_id << ',' << traj.cow_id << ',' << t << ','
                    << keypoint_code(id) << ',' << csv::format_double(p.x) << ','
                    << csv::format_double(p.y) << '\n';
            }
        }
    }
}

TrajectorySet normalize_direction(const TrajectorySet& traj) {
    if (traj.frame_count() < 2) throw GaitError("fewer than 2 frames");
    const auto sacrum = traj.channel_x(KeypointId::Sacrum);
    const double net = sacrum.back() - sacrum.front();
    const double h = head_length(traj).h;
    if (std::abs(net) < h) throw GaitError("cow not walking");

    TrajectorySet out = traj;
    if (net < 0.0) {
        double x_max = -1e300;
        for (const auto& f : traj.frames) {
            for (const auto& p : f) x_max = std::max(x_max, p.x);
        }
        for (auto& f : out.frames) {
            for (auto& p : f) p.x = x_max - p.x;
        }
    }
    out.direction = Direction::LeftToRight;
    return out;
}

HeadLength head_length(const TrajectorySet& traj) {
    std::vector<double> dists;
    dists.reserve(traj.frames.size());
    int zeros = 0;
    for (int t = 0; t < traj.frame_count(); ++t) {
        const double d = distance(traj.at(t, KeypointId::Forehead), traj.at(t, KeypointId::Nose));
        if (d < 1e-12) ++zeros;
        dists.push_back(d);
    }
    if (2 * zeros >= traj.frame_count()) throw GaitError("degenerate head keypoints");
    return HeadLength{median(dists)};
}

}  // namespace gait
