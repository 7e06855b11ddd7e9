#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gait/filters.hpp"
#include "gait/synth.hpp"
#include "gait/traits.hpp"

using namespace gait;

namespace {

StepTimeline timeline_of(const TrajectorySet& traj) { return detect_timeline(traj, StepParams{}); }

// One leg with the given stances/midswings; others copied symmetric enough
// for girdle math. Used for the hand-built duration examples.
StepTimeline manual_timeline() {
    StepTimeline tl;
    tl.gait_period = 30.0;
    tl.valid_range = {0, 99};
    return tl;
}

}  // namespace

TEST_CASE("fit_circle solves the hand-computed circumcircles") {
    auto fit = fit_circle({0, 0}, {2, 0}, {1, 1});
    CHECK(fit.center.x == doctest::Approx(1.0));
    CHECK(fit.center.y == doctest::Approx(0.0));
    CHECK(fit.radius == doctest::Approx(1.0));

    fit = fit_circle({0, 1}, {1, 0}, {0, -1});
    CHECK(fit.center.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fit.center.y == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fit.radius == doctest::Approx(1.0));
}

TEST_CASE("fit_circle flags collinear points as zero curvature") {
    auto fit = fit_circle({0, 0}, {1, 0}, {2, 0});
    CHECK(fit.collinear());
}

TEST_CASE("fit_circle rejects duplicate points") {
    CHECK_THROWS_WITH_AS(fit_circle({1, 1}, {1, 1}, {2, 0}), "degenerate spine", GaitError);
}

TEST_CASE("fit_circle residuals stay below 1e-6 relative on random triples") {
    Rng rng(1234);
    int tested = 0;
    while (tested < 1000) {
        Point p1{rng.uniform(0, 1920), rng.uniform(0, 1080)};
        Point p2{rng.uniform(0, 1920), rng.uniform(0, 1080)};
        Point p3{rng.uniform(0, 1920), rng.uniform(0, 1080)};
        CircleFit fit;
        try {
            fit = fit_circle(p1, p2, p3);
        } catch (const GaitError&) {
            continue;
        }
        if (fit.collinear()) continue;
        for (const auto& p : {p1, p2, p3}) {
            CHECK(std::abs(distance(fit.center, p) - fit.radius) <= 1e-6 * fit.radius);
        }
        ++tested;
    }
}

TEST_CASE("back posture is zero for a straight spine and h/r for an arched one") {
    auto straight = generate(healthy_preset(2));
    auto tl = timeline_of(straight.trajectory);
    CHECK(back_posture(straight.trajectory, tl, head_length(straight.trajectory)) ==
          doctest::Approx(0.0));

    auto cfg = healthy_preset(2);
    cfg.arch_curvature = 1.0 / 500.0;
    auto arched = generate(cfg);
    auto tl2 = timeline_of(arched.trajectory);
    CHECK(back_posture(arched.trajectory, tl2, head_length(arched.trajectory)) ==
          doctest::Approx(120.0 / 500.0).epsilon(1e-6));
}

TEST_CASE("back posture at a known circle: spine (0,0),(2,0),(1,1) scaled") {
    // Scale the unit circumcircle by 100: radius 100, with h = 200 -> BPM = 2.
    TrajectorySet traj;
    traj.frames.resize(1);
    auto& f = traj.frames[0];
    for (auto& p : f) p = {0.0, 0.0};
    f[static_cast<size_t>(keypoint_index(KeypointId::Withers))] = {0.0, 0.0};
    f[static_cast<size_t>(keypoint_index(KeypointId::Sacrum))] = {200.0, 0.0};
    f[static_cast<size_t>(keypoint_index(KeypointId::CaudalThoracic))] = {100.0, 100.0};
    StepTimeline tl;
    tl.legs[0].midswings = {0};
    CHECK(back_posture(traj, tl, HeadLength{200.0}) == doctest::Approx(2.0));
}

TEST_CASE("back posture requires at least one mid-swing") {
    auto res = generate(healthy_preset(2));
    StepTimeline tl;  // no events at all
    CHECK_THROWS_WITH_AS(back_posture(res.trajectory, tl, HeadLength{80.0}), "no swing events",
                         GaitError);
}

TEST_CASE("head bobbing: pure sinusoid at an in-band bin gives A/2") {
    TrajectorySet traj;
    const int n = 120;
    const double period = 30.0;
    traj.frames.resize(static_cast<size_t>(n));
    for (int t = 0; t < n; ++t) {
        for (auto& p : traj.frames[static_cast<size_t>(t)]) p = {0.0, 0.0};
        traj.at(t, KeypointId::Forehead).y = 10.0 * std::sin(2.0 * M_PI * t / period);
    }
    StepTimeline tl;
    tl.gait_period = period;
    tl.valid_range = {0, n - 1};
    CHECK(head_bobbing(traj, tl) == doctest::Approx(5.0).epsilon(0.01));
}

TEST_CASE("head bobbing of a constant signal is zero") {
    TrajectorySet traj;
    traj.frames.resize(64);
    for (auto& f : traj.frames) {
        for (auto& p : f) p = {0.0, 140.0};
    }
    StepTimeline tl;
    tl.gait_period = 16.0;
    tl.valid_range = {0, 63};
    CHECK(head_bobbing(traj, tl) <= 1e-9);
}

TEST_CASE("head bobbing: a pure linear trend stays well under trend plus bob") {
    auto make = [](double slope, double amp) {
        TrajectorySet traj;
        const int n = 120;
        traj.frames.resize(static_cast<size_t>(n));
        for (int t = 0; t < n; ++t) {
            for (auto& p : traj.frames[static_cast<size_t>(t)]) p = {0.0, 0.0};
            traj.at(t, KeypointId::Forehead).y =
                slope * t + amp * std::sin(2.0 * M_PI * t / 30.0);
        }
        StepTimeline tl;
        tl.gait_period = 30.0;
        tl.valid_range = {0, n - 1};
        return head_bobbing(traj, tl);
    };
    const double trend_only = make(0.01, 0.0);
    const double trend_plus_bob = make(0.01, 10.0);
    CHECK(trend_only < 0.1 * trend_plus_bob);
}

TEST_CASE("tracking distance matches direct substitution") {
    // Front print at x=300 landing before a hind landing at x=250, h=50.
    TrajectorySet traj;
    traj.frames.resize(40);
    for (int t = 0; t < 40; ++t) {
        for (auto& p : traj.frames[static_cast<size_t>(t)]) p = {0.0, 0.0};
        traj.at(t, KeypointId::LeftFrontHoof).x = 300.0;
        traj.at(t, KeypointId::LeftHindHoof).x = 250.0;
    }
    StepTimeline tl;
    tl.legs[static_cast<size_t>(leg_index(KeypointId::LeftFrontHoof))].stances = {{0, 12}};
    tl.legs[static_cast<size_t>(leg_index(KeypointId::LeftHindHoof))].stances = {{15, 30}};
    CHECK(tracking_distance(traj, tl, HeadLength{50.0}, Side::Left) == doctest::Approx(1.0));
}

TEST_CASE("tracking distance is zero when the hind lands on the front print") {
    auto res = generate(healthy_preset(4));
    auto tl = timeline_of(res.trajectory);
    const auto h = head_length(res.trajectory);
    CHECK(std::abs(tracking_distance(res.trajectory, tl, h, Side::Left)) < 0.02);
    CHECK(std::abs(tracking_distance(res.trajectory, tl, h, Side::Right)) < 0.02);
}

TEST_CASE("tracking distance on a short-tracking gait recovers the offset") {
    auto cfg = healthy_preset(4);
    cfg.tracking_offset = 0.5;
    auto res = generate(cfg);
    auto tl = timeline_of(res.trajectory);
    const auto h = head_length(res.trajectory);
    CHECK(tracking_distance(res.trajectory, tl, h, Side::Left) ==
          doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("tracking distance errors without a front-then-hind pair") {
    TrajectorySet traj;
    traj.frames.resize(10);
    for (auto& f : traj.frames) {
        for (auto& p : f) p = {0.0, 0.0};
    }
    StepTimeline tl;  // hind stance starts before the front one
    tl.legs[static_cast<size_t>(leg_index(KeypointId::LeftFrontHoof))].stances = {{5, 9}};
    tl.legs[static_cast<size_t>(leg_index(KeypointId::LeftHindHoof))].stances = {{0, 4}};
    CHECK_THROWS_WITH_AS(tracking_distance(traj, tl, HeadLength{50.0}, Side::Left),
                         "no tracking event", GaitError);
}

TEST_CASE("stride length difference from per-hoof medians") {
    // Left strides 2.0 h, right strides 2.5 h.
    TrajectorySet traj;
    traj.frames.resize(60);
    for (int t = 0; t < 60; ++t) {
        for (auto& p : traj.frames[static_cast<size_t>(t)]) p = {0.0, 0.0};
    }
    const double h = 50.0;
    auto set_stance_x = [&](KeypointId id, int frame, double x) {
        traj.at(frame, id).x = x;
    };
    StepTimeline tl;
    auto& lf = tl.legs[static_cast<size_t>(leg_index(KeypointId::LeftFrontHoof))];
    auto& rf = tl.legs[static_cast<size_t>(leg_index(KeypointId::RightFrontHoof))];
    lf.stances = {{0, 10}, {20, 30}};
    rf.stances = {{5, 15}, {25, 35}};
    set_stance_x(KeypointId::LeftFrontHoof, 0, 100.0);
    set_stance_x(KeypointId::LeftFrontHoof, 20, 200.0);  // stride 2.0 h
    set_stance_x(KeypointId::RightFrontHoof, 5, 100.0);
    set_stance_x(KeypointId::RightFrontHoof, 25, 225.0);  // stride 2.5 h
    CHECK(stride_length_diff(traj, tl, HeadLength{h}, Girdle::Front) == doctest::Approx(0.5));
}

TEST_CASE("stride length difference needs two stances per hoof") {
    TrajectorySet traj;
    traj.frames.resize(10);
    for (auto& f : traj.frames) {
        for (auto& p : f) p = {0.0, 0.0};
    }
    StepTimeline tl;
    tl.legs[static_cast<size_t>(leg_index(KeypointId::LeftFrontHoof))].stances = {{0, 4}};
    tl.legs[static_cast<size_t>(leg_index(KeypointId::RightFrontHoof))].stances = {{0, 4},
                                                                                   {6, 9}};
    CHECK_THROWS_WITH_AS(stride_length_diff(traj, tl, HeadLength{50.0}, Girdle::Front),
                         "insufficient strides", GaitError);
}

TEST_CASE("stance and swing duration differences use per-hoof medians") {
    StepTimeline tl = manual_timeline();
    auto& lh = tl.legs[static_cast<size_t>(leg_index(KeypointId::LeftHindHoof))];
    auto& rh = tl.legs[static_cast<size_t>(leg_index(KeypointId::RightHindHoof))];
    // Left durations {20, 22, 24}, right {30}.
    lh.stances = {{0, 20}, {30, 52}, {60, 84}};
    rh.stances = {{0, 30}, {40, 70}};
    CHECK(stance_duration_diff(tl, Girdle::Hind) == doctest::Approx(8.0));

    // Swings: left {10}, right {14} -> 4. Durations are end - start of the
    // open interval between stances.
    lh.stances = {{0, 20}, {31, 50}};   // swing [21, 30]
    rh.stances = {{0, 20}, {35, 60}};   // swing [21, 34]
    CHECK(swing_duration_diff(tl, Girdle::Hind) == doctest::Approx(4.0));

    // Symmetric gait: zero difference.
    rh.stances = lh.stances;
    CHECK(stance_duration_diff(tl, Girdle::Hind) == doctest::Approx(0.0));
    CHECK(swing_duration_diff(tl, Girdle::Hind) == doctest::Approx(0.0));
}

TEST_CASE("extract_features: healthy template is near zero everywhere") {
    auto res = generate(healthy_preset(6));
    auto tl = timeline_of(res.trajectory);
    auto fv = extract_features(res.trajectory, tl, head_length(res.trajectory));
    CHECK(fv.bpm == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(fv.hba <= 1e-6);
    CHECK(std::abs(fv.trk_l) < 0.02);
    CHECK(fv.stl_f == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(fv.std_f == 0.0);
    CHECK(fv.swd_f == 0.0);
}

TEST_CASE("extract_features: lame preset elevates BPM, HBA and TRK") {
    auto healthy = generate(healthy_preset(6));
    auto lame = generate(lame_preset(6));
    auto fh = extract_features(healthy.trajectory, timeline_of(healthy.trajectory),
                               head_length(healthy.trajectory));
    auto fl = extract_features(lame.trajectory, timeline_of(lame.trajectory),
                               head_length(lame.trajectory));
    CHECK(fl.bpm > fh.bpm);
    CHECK(fl.hba > fh.hba);
    CHECK(fl.trk_l > fh.trk_l);
}

TEST_CASE("extract_features fails when a hoof lacks stances") {
    auto res = generate(healthy_preset(6));
    auto tl = timeline_of(res.trajectory);
    tl.legs[static_cast<size_t>(leg_index(KeypointId::RightFrontHoof))].stances.resize(1);
    CHECK_THROWS_AS(extract_features(res.trajectory, tl, head_length(res.trajectory)),
                    GaitError);
}

TEST_CASE("scale invariance: coordinates scaled by c leave normalized traits") {
    auto res = generate(lame_preset(10));
    auto base = res.trajectory;
    auto tl = timeline_of(base);
    auto h = head_length(base);
    auto fv = extract_features(base, tl, h);

    TrajectorySet scaled = base;
    for (auto& f : scaled.frames) {
        for (auto& p : f) {
            p.x *= 2.0;
            p.y *= 2.0;
        }
    }
    auto tl2 = timeline_of(scaled);
    auto h2 = head_length(scaled);
    CHECK(h2.h == doctest::Approx(2.0 * h.h).epsilon(1e-9));
    auto fv2 = extract_features(scaled, tl2, h2);
    CHECK(fv2.bpm == doctest::Approx(fv.bpm).epsilon(1e-9));
    CHECK(fv2.trk_l == doctest::Approx(fv.trk_l).epsilon(1e-9));
    CHECK(fv2.stl_f == doctest::Approx(fv.stl_f).epsilon(1e-9));
    CHECK(fv2.hba == doctest::Approx(2.0 * fv.hba).epsilon(1e-9));
}

TEST_CASE("translation invariance: constant offsets change nothing") {
    auto res = generate(lame_preset(12));
    auto fv = extract_features(res.trajectory, timeline_of(res.trajectory),
                               head_length(res.trajectory));
    TrajectorySet moved = res.trajectory;
    for (auto& f : moved.frames) {
        for (auto& p : f) {
            p.x += 333.0;
            p.y += 77.0;
        }
    }
    auto fv2 = extract_features(moved, timeline_of(moved), head_length(moved));
    const auto a = fv.values();
    const auto b = fv2.values();
    for (size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-9));
}

TEST_CASE("left-right label mirror swaps TRK sides and keeps girdle diffs") {
    auto res = generate(lame_preset(13));
    auto fv = extract_features(res.trajectory, timeline_of(res.trajectory),
                               head_length(res.trajectory));
    TrajectorySet swapped = res.trajectory;
    for (auto& f : swapped.frames) {
        std::swap(f[static_cast<size_t>(keypoint_index(KeypointId::LeftHindHoof))],
                  f[static_cast<size_t>(keypoint_index(KeypointId::RightHindHoof))]);
        std::swap(f[static_cast<size_t>(keypoint_index(KeypointId::LeftFrontHoof))],
                  f[static_cast<size_t>(keypoint_index(KeypointId::RightFrontHoof))]);
    }
    auto fv2 = extract_features(swapped, timeline_of(swapped), head_length(swapped));
    CHECK(fv2.trk_l == doctest::Approx(fv.trk_r).epsilon(1e-9));
    CHECK(fv2.trk_r == doctest::Approx(fv.trk_l).epsilon(1e-9));
    CHECK(fv2.stl_h == doctest::Approx(fv.stl_h).epsilon(1e-9));
    CHECK(fv2.std_h == doctest::Approx(fv.std_h).epsilon(1e-9));
    CHECK(fv2.swd_h == doctest::Approx(fv.swd_h).epsilon(1e-9));
}

TEST_CASE("doubling generator curvature strictly increases BPM") {
    std::vector<double> bpm;
    for (double c : {0.001, 0.002, 0.004}) {
        auto cfg = healthy_preset(3);
        cfg.arch_curvature = c;
        auto res = generate(cfg);
        bpm.push_back(extract_features(res.trajectory, timeline_of(res.trajectory),
                                       head_length(res.trajectory))
                          .bpm);
    }
    CHECK(bpm[1] > bpm[0]);
    CHECK(bpm[2] > bpm[1]);
}

TEST_CASE("noisy filtered round trip still matches ground truth") {
    // Precursor of the acceptance filter gate: noise + spikes, then MAD + SG.
    for (uint64_t seed : {100, 101, 102}) {
        for (const char* preset : {"healthy", "lame"}) {
            auto cfg = preset_by_name(preset, seed);
            cfg.noise_sd = 2.0;
            cfg.outlier_rate = 0.005;
            auto res = generate(cfg);
            auto corrected = correct_trajectories(res.trajectory, FilterParams{});
            auto tl = detect_timeline(corrected.trajectory, StepParams{});
            auto fv = extract_features(corrected.trajectory, tl,
                                       head_length(corrected.trajectory));
            const auto& gt = res.truth.traits;
            auto close = [](double got, double want, double rel, double abs_tol) {
                return std::abs(got - want) <= std::max(rel * std::abs(want), abs_tol);
            };
            CHECK_MESSAGE(close(fv.bpm, gt.bpm, 0.05, 0.05), preset, " seed ", seed, " bpm ",
                          fv.bpm, " vs ", gt.bpm);
            CHECK_MESSAGE(close(fv.hba, gt.hba, 0.05, 0.5), preset, " seed ", seed, " hba ",
                          fv.hba, " vs ", gt.hba);
            CHECK_MESSAGE(close(fv.trk_l, gt.trk_l, 0.05, 0.05), preset, " seed ", seed,
                          " trk_l ", fv.trk_l, " vs ", gt.trk_l);
            CHECK_MESSAGE(close(fv.trk_r, gt.trk_r, 0.05, 0.05), preset, " seed ", seed,
                          " trk_r ", fv.trk_r, " vs ", gt.trk_r);
            CHECK_MESSAGE(close(fv.stl_f, gt.stl_f, 0.05, 0.05), preset, " seed ", seed,
                          " stl_f ", fv.stl_f, " vs ", gt.stl_f);
            CHECK_MESSAGE(close(fv.stl_h, gt.stl_h, 0.05, 0.05), preset, " seed ", seed,
                          " stl_h ", fv.stl_h, " vs ", gt.stl_h);
            CHECK_MESSAGE(std::abs(fv.std_f - gt.std_f) <= 2.0, preset, " seed ", seed,
                          " std_f ", fv.std_f, " vs ", gt.std_f);
            CHECK_MESSAGE(std::abs(fv.std_h - gt.std_h) <= 2.0, preset, " seed ", seed,
                          " std_h ", fv.std_h, " vs ", gt.std_h);
            CHECK_MESSAGE(std::abs(fv.swd_f - gt.swd_f) <= 2.0, preset, " seed ", seed,
                          " swd_f ", fv.swd_f, " vs ", gt.swd_f);
            CHECK_MESSAGE(std::abs(fv.swd_h - gt.swd_h) <= 2.0, preset, " seed ", seed,
                          " swd_h ", fv.swd_h, " vs ", gt.swd_h);
        }
    }
}
