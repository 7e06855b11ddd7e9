#include "gait/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace gait {

namespace {

// Fixed body geometry, pixels. Only relative placement matters to the traits.
constexpr double kGroundY = 520.0;
constexpr double kBackY = 180.0;
constexpr double kHeadY = 140.0;
constexpr double kSpineHalfSpan = 160.0;  // arc length from caudal-thoracic to withers/sacrum
constexpr double kForeheadLead = 260.0;
constexpr double kFrontHoofLead = 240.0;
constexpr double kSwingLift = 18.0;

double smoothstep(double u) { return u * u * (3.0 - 2.0 * u); }

bool is_left(int leg) { return leg == 0 || leg == 2; }

int floor_div(int a, int b) {
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

void validate(const GaitConfig& c) {
    if (c.frame_rate <= 0.0) throw GaitError("frame rate must be positive");
    if (c.n_cycles < 1) throw GaitError("n_cycles must be >= 1");
    const int T = c.cycle_frames();
    for (int leg = 0; leg < kLegCount; ++leg) {
        const auto lu = static_cast<size_t>(leg);
        if (c.stance_frames[lu] < 10) throw GaitError("stance_frames must be >= 10");
        if (c.swing_frames[lu] < 3) throw GaitError("swing_frames must be >= 3");
        if (c.stance_frames[lu] + c.swing_frames[lu] != T) {
            throw GaitError("stance + swing must be equal across legs");
        }
        if (c.phase_offsets[lu] < 0.0 || c.phase_offsets[lu] >= 1.0) {
            throw GaitError("phase offsets must lie in [0, 1)");
        }
    }
    if (c.stride_left_px <= 0.0 || c.stride_right_px <= 0.0) {
        throw GaitError("strides must be positive");
    }
    if (c.head_length_px <= 0.0) throw GaitError("head length must be positive");
    if (c.bob_amplitude_px < 0.0 || c.arch_curvature < 0.0 || c.noise_sd < 0.0 ||
        c.outlier_rate < 0.0 || c.outlier_rate > 1.0) {
        throw GaitError("amplitudes and rates must be non-negative");
    }
}

}  // namespace

GaitConfig healthy_preset(uint64_t seed) {
    GaitConfig c;
    c.seed = seed;
    return c;
}

GaitConfig lame_preset(uint64_t seed) {
    GaitConfig c;
    c.seed = seed;
    c.bob_amplitude_px = 16.0;
    c.arch_curvature = 1.0 / 400.0;
    c.tracking_offset = 0.5;
    c.stride_right_px = 270.0;
    // Swings stay in the 5..7 frame range: shorter swings are sharper than
    // the default Savitzky-Golay window can follow without print-position bias.
    c.stance_frames = {33, 35, 34, 34};
    c.swing_frames = {7, 5, 6, 6};
    return c;
}

GaitConfig preset_by_name(const std::string& name, uint64_t seed) {
    if (name == "healthy") return healthy_preset(seed);
    if (name == "lame") return lame_preset(seed);
    throw GaitError("unknown preset: " + name);
}

SynthResult generate(const GaitConfig& config, const std::string& video_id,
                     const std::string& cow_id) {
    validate(config);
    const int T = config.cycle_frames();
    const int N = config.total_frames();
    const double h = config.head_length_px;

    Rng rng(derive_seed(config.seed, 7));
    const double x0 = 100.0 + rng.uniform() * 50.0;
    const double bob_phase = rng.uniform() * 2.0 * M_PI;
    const double body_speed =
        (config.stride_left_px + config.stride_right_px) / (2.0 * static_cast<double>(T));

    std::array<int, kLegCount> start{};
    std::array<double, kLegCount> stride{};
    std::array<double, kLegCount> base{};
    for (int leg = 0; leg < kLegCount; ++leg) {
        const auto lu = static_cast<size_t>(leg);
        start[lu] = static_cast<int>(std::llround(config.phase_offsets[lu] * T));
        stride[lu] = is_left(leg) ? config.stride_left_px : config.stride_right_px;
    }
    // Front prints ride ahead of the trunk; each hind hoof lands
    // tracking_offset head lengths behind the previous ipsilateral front print.
    const int lf = leg_index(KeypointId::LeftFrontHoof);
    const int rf = leg_index(KeypointId::RightFrontHoof);
    const int lh = leg_index(KeypointId::LeftHindHoof);
    const int rh = leg_index(KeypointId::RightHindHoof);
    base[static_cast<size_t>(lf)] = x0 + kFrontHoofLead + body_speed * start[static_cast<size_t>(lf)];
    base[static_cast<size_t>(rf)] = x0 + kFrontHoofLead + body_speed * start[static_cast<size_t>(rf)];
    base[static_cast<size_t>(lh)] =
        base[static_cast<size_t>(lf)] - config.stride_left_px - config.tracking_offset * h;
    base[static_cast<size_t>(rh)] =
        base[static_cast<size_t>(rf)] - config.stride_right_px - config.tracking_offset * h;

    SynthResult res;
    TrajectorySet& traj = res.trajectory;
    traj.video_id = video_id;
    traj.cow_id = cow_id;
    traj.frame_rate = config.frame_rate;
    traj.direction = Direction::LeftToRight;
    traj.frames.resize(static_cast<size_t>(N));

    for (int t = 0; t < N; ++t) {
        auto& frame = traj.frames[static_cast<size_t>(t)];
        for (int leg = 0; leg < kLegCount; ++leg) {
            const auto lu = static_cast<size_t>(leg);
            const int sf = config.stance_frames[lu];
            const int w = config.swing_frames[lu];
            const int q = floor_div(t - start[lu], T);
            const int phi = t - start[lu] - q * T;
            Point p;
            if (phi <= sf - 1) {
                p.x = base[lu] + static_cast<double>(q) * stride[lu];
                p.y = kGroundY;
            } else {
                const double u = static_cast<double>(phi - (sf - 1)) / static_cast<double>(w + 1);
                p.x = base[lu] + static_cast<double>(q) * stride[lu] + stride[lu] * smoothstep(u);
                p.y = kGroundY - kSwingLift * std::sin(M_PI * u);
            }
            frame[static_cast<size_t>(keypoint_index(leg_keypoint(leg)))] = p;
        }

        const double body_x = x0 + body_speed * static_cast<double>(t);
        Point withers, caudal, sacrum;
        if (config.arch_curvature == 0.0) {
            withers = {body_x + kSpineHalfSpan, kBackY};
            caudal = {body_x, kBackY};
            sacrum = {body_x - kSpineHalfSpan, kBackY};
        } else {
            // Three points on a circle of radius 1/curvature, arched upward.
            const double r = 1.0 / config.arch_curvature;
            const double alpha = kSpineHalfSpan / r;
            withers = {body_x + r * std::sin(alpha), kBackY + r * (1.0 - std::cos(alpha))};
            caudal = {body_x, kBackY};
            sacrum = {body_x - r * std::sin(alpha), kBackY + r * (1.0 - std::cos(alpha))};
        }
        frame[static_cast<size_t>(keypoint_index(KeypointId::Withers))] = withers;
        frame[static_cast<size_t>(keypoint_index(KeypointId::CaudalThoracic))] = caudal;
        frame[static_cast<size_t>(keypoint_index(KeypointId::Sacrum))] = sacrum;

        const double bob = config.bob_amplitude_px *
                           std::sin(2.0 * M_PI * static_cast<double>(t) / static_cast<double>(T) +
                                    bob_phase);
        const Point forehead{body_x + kForeheadLead, kHeadY + bob};
        frame[static_cast<size_t>(keypoint_index(KeypointId::Forehead))] = forehead;
        frame[static_cast<size_t>(keypoint_index(KeypointId::Nose))] =
            Point{forehead.x + 0.8 * h, forehead.y + 0.6 * h};
    }

    if (config.noise_sd > 0.0) {
        Rng noise(derive_seed(config.seed, 11));
        for (auto& frame : traj.frames) {
            for (auto& p : frame) {
                p.x += noise.normal(0.0, config.noise_sd);
                p.y += noise.normal(0.0, config.noise_sd);
            }
        }
    }

    GroundTruth& gt = res.truth;
    if (config.outlier_rate > 0.0) {
        // Isolated spikes: a fixed count of cells, at least 3 frames apart per
        // keypoint, displaced by 60..120 px in both coordinates. Hoof cells
        // within 5 frames of a stance boundary are exempt: a spike there sits
        // inside the smoothing window of a motion corner, where the 3-frame
        // MAD sees fast swing motion and cannot flag it, and the smoother then
        // smears the spike into the plateau edge. Such cells probe nothing
        // about correction quality; mid-stance hoof cells stay fair game.
        std::array<std::set<int>, kLegCount> boundary_frames;
        for (int leg = 0; leg < kLegCount; ++leg) {
            const auto lu = static_cast<size_t>(leg);
            const int sf = config.stance_frames[lu];
            for (int q = -2; q <= config.n_cycles + 1; ++q) {
                boundary_frames[lu].insert(start[lu] + q * T);           // landing
                boundary_frames[lu].insert(start[lu] + q * T + sf - 1);  // liftoff edge
            }
        }
        auto near_boundary = [&](int leg, int t) {
            for (int dt = -5; dt <= 5; ++dt) {
                if (boundary_frames[static_cast<size_t>(leg)].count(t + dt)) return true;
            }
            return false;
        };

        Rng spikes(derive_seed(config.seed, 13));
        const int target = static_cast<int>(
            std::llround(config.outlier_rate * static_cast<double>(N) * kKeypointCount));
        std::array<std::set<int>, kKeypointCount> used;
        int placed = 0;
        int attempts = 0;
        while (placed < target && attempts < 1000 * (target + 1)) {
            ++attempts;
            const int t = static_cast<int>(spikes.below(static_cast<uint64_t>(N)));
            const int k = static_cast<int>(spikes.below(kKeypointCount));
            if (k < kLegCount && near_boundary(k, t)) continue;
            auto& frames_used = used[static_cast<size_t>(k)];
            bool clash = false;
            for (int dt = -2; dt <= 2; ++dt) {
                if (frames_used.count(t + dt)) clash = true;
            }
            if (clash) continue;
            frames_used.insert(t);
            Point& p = traj.frames[static_cast<size_t>(t)][static_cast<size_t>(k)];
            p.x += (spikes.uniform() < 0.5 ? -1.0 : 1.0) * spikes.uniform(60.0, 120.0);
            p.y += (spikes.uniform() < 0.5 ? -1.0 : 1.0) * spikes.uniform(60.0, 120.0);
            ++placed;
        }
        gt.injected_outliers = placed;
    }

    for (int leg = 0; leg < kLegCount; ++leg) {
        const auto lu = static_cast<size_t>(leg);
        const int sf = config.stance_frames[lu];
        const int w = config.swing_frames[lu];
        for (int q = -2; q <= config.n_cycles + 1; ++q) {
            const int s = start[lu] + q * T;
            const int e = s + sf - 1;
            const int cs = std::max(s, 0);
            const int ce = std::min(e, N - 1);
            if (cs <= ce) gt.stances[lu].push_back({cs, ce});
            // The smoothstep's discrete acceleration peaks at the first moving
            // frame, so that frame is the analytic mid-swing.
            const int liftoff = e + 1;
            const int visible_end = std::min(e + w, N - 1);
            if (liftoff >= 0 && liftoff <= N - 1 && visible_end - liftoff + 1 >= 3) {
                gt.midswings[lu].push_back(liftoff);
            }
        }
    }
    gt.gait_period = static_cast<double>(T);
    gt.head_length = h;
    gt.traits.bpm = h * config.arch_curvature;
    gt.traits.hba = config.bob_amplitude_px / 2.0;
    gt.traits.trk_l = config.tracking_offset;
    gt.traits.trk_r = config.tracking_offset;
    const double stl = std::abs(config.stride_right_px - config.stride_left_px) / h;
    gt.traits.stl_f = stl;
    gt.traits.stl_h = stl;
    gt.traits.std_f = std::abs(config.stance_frames[static_cast<size_t>(rf)] -
                               config.stance_frames[static_cast<size_t>(lf)]);
    gt.traits.std_h = std::abs(config.stance_frames[static_cast<size_t>(rh)] -
                               config.stance_frames[static_cast<size_t>(lh)]);
    gt.traits.swd_f = std::abs(config.swing_frames[static_cast<size_t>(rf)] -
                               config.swing_frames[static_cast<size_t>(lf)]);
    gt.traits.swd_h = std::abs(config.swing_frames[static_cast<size_t>(rh)] -
                               config.swing_frames[static_cast<size_t>(lh)]);
    return res;
}

const std::vector<std::pair<int, int>> kDefaultRepeatProfile = {
    {1, 24}, {2, 21}, {3, 25}, {4, 17}, {5, 6}, {6, 3}, {7, 1}, {8, 1}};

namespace {

GaitConfig sample_config(int label, uint64_t vseed, const JitterSpec& jitter) {
    Rng r(derive_seed(vseed, 23));
    const double j = jitter.trait_jitter;
    GaitConfig c = label == 0 ? healthy_preset(vseed) : lame_preset(vseed);
    const double base = 300.0 * r.uniform(0.92, 1.08);
    const int cycle = c.cycle_frames();
    if (label == 0) {
        c.bob_amplitude_px = std::abs(r.normal(0.0, 0.8 * j));
        c.arch_curvature = std::abs(r.normal(0.0, 0.00025 * j));
        c.tracking_offset = r.normal(0.0, 0.06 * j);
        const double delta = r.normal(0.0, 4.0 * j);
        c.stride_left_px = base + delta / 2.0;
        c.stride_right_px = base - delta / 2.0;
        const int sf_lh = 34 + r.uniform_int(-1, 1);
        const int sf_rh = 34 + r.uniform_int(-1, 1);
        c.stance_frames = {sf_lh, sf_rh, 34, 34};
        c.swing_frames = {cycle - sf_lh, cycle - sf_rh, 6, 6};
    } else {
        c.bob_amplitude_px = 16.0 * r.uniform(0.75, 1.25);
        c.arch_curvature = 0.0025 * r.uniform(0.7, 1.3);
        c.tracking_offset = 0.5 * r.uniform(0.7, 1.3);
        const double delta = 30.0 * r.uniform(0.7, 1.3);
        c.stride_left_px = base + delta / 2.0;
        c.stride_right_px = base - delta / 2.0;
        const int sf_lh = r.uniform_int(33, 34);
        const int sf_rh = 35;
        c.stance_frames = {sf_lh, sf_rh, 34, 34};
        c.swing_frames = {cycle - sf_lh, cycle - sf_rh, 6, 6};
    }
    c.noise_sd = jitter.noise_sd;
    c.outlier_rate = jitter.outlier_rate;
    return c;
}

std::string padded(const char* prefix, int n) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%04d", prefix, n);
    return buf;
}

}  // namespace

SynthDataset generate_dataset(int n_healthy, int n_lame, const JitterSpec& jitter, uint64_t seed) {
    if (n_healthy < 1 || n_lame < 1) throw GaitError("both classes need at least one video");
    SynthDataset ds;
    std::array<int, 2> remaining = {n_healthy, n_lame};
    int cow_no = 0;
    int video_no = 0;
    size_t profile_pos = 0;
    int profile_count = 0;
    while (remaining[0] + remaining[1] > 0) {
        // Cycle through the repeat profile to shape the group sizes.
        const auto [mult, cows_at_mult] = kDefaultRepeatProfile[profile_pos];
        if (++profile_count >= cows_at_mult) {
            profile_count = 0;
            profile_pos = (profile_pos + 1) % kDefaultRepeatProfile.size();
        }
        const int label = remaining[0] >= remaining[1] ? 0 : 1;
        const int videos = std::min(mult, remaining[static_cast<size_t>(label)]);
        const std::string cow = padded("cow", cow_no++);
        for (int i = 0; i < videos; ++i) {
            const std::string vid = padded("v", video_no);
            const uint64_t vseed = derive_seed(seed, 31, static_cast<uint64_t>(video_no));
            const GaitConfig cfg = sample_config(label, vseed, jitter);
            auto res = generate(cfg, vid, cow);
            res.truth.traits.video_id = vid;
            res.truth.traits.cow_id = cow;
            ds.trajectories.push_back(std::move(res.trajectory));
            ds.truths.push_back(std::move(res.truth));
            ds.rows.push_back({vid, cow, label});
            ++video_no;
        }
        remaining[static_cast<size_t>(label)] -= videos;
    }
    return ds;
}

}  // namespace gait
