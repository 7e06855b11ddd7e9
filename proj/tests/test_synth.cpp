#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "gait/filters.hpp"
#include "gait/synth.hpp"
#include "gait/traits.hpp"

using namespace gait;

TEST_CASE("healthy preset ground truth is all-zero traits") {
    auto res = generate(healthy_preset(0));
    const auto& t = res.truth.traits;
    CHECK(t.bpm == 0.0);
    CHECK(t.hba == 0.0);
    CHECK(t.trk_l == 0.0);
    CHECK(t.stl_f == 0.0);
    CHECK(t.std_h == 0.0);
    CHECK(t.swd_h == 0.0);
    CHECK(res.truth.gait_period == doctest::Approx(40.0));
}

TEST_CASE("lame preset ground truth matches its construction") {
    auto cfg = lame_preset(0);
    auto res = generate(cfg);
    const auto& t = res.truth.traits;
    CHECK(t.bpm == doctest::Approx(cfg.head_length_px * cfg.arch_curvature));
    CHECK(t.hba == doctest::Approx(cfg.bob_amplitude_px / 2.0));
    CHECK(t.trk_l == doctest::Approx(0.5));
    CHECK(t.stl_h == doctest::Approx(30.0 / 120.0));
    CHECK(t.std_h == doctest::Approx(2.0));
    CHECK(t.swd_h == doctest::Approx(2.0));
}

TEST_CASE("generation is deterministic for a fixed seed") {
    auto a = generate(lame_preset(77));
    auto b = generate(lame_preset(77));
    CHECK(a.trajectory == b.trajectory);
    auto c = generate(lame_preset(78));
    CHECK_FALSE(a.trajectory == c.trajectory);
}

TEST_CASE("invalid configs are rejected") {
    auto cfg = healthy_preset(0);
    cfg.stance_frames[0] = 8;  // below the detectable minimum
    cfg.swing_frames[0] = 32;
    CHECK_THROWS_AS(generate(cfg), GaitError);

    cfg = healthy_preset(0);
    cfg.swing_frames[1] = 2;
    cfg.stance_frames[1] = 38;
    CHECK_THROWS_AS(generate(cfg), GaitError);

    cfg = healthy_preset(0);
    cfg.stance_frames[2] = 33;  // cycle length no longer shared
    CHECK_THROWS_AS(generate(cfg), GaitError);
}

TEST_CASE("noise-free round trip recovers the ground truth traits") {
    for (uint64_t seed : {0, 1, 2, 3}) {
        for (const char* preset : {"healthy", "lame"}) {
            auto res = generate(preset_by_name(preset, seed));
            auto tl = detect_timeline(res.trajectory, StepParams{});
            auto h = head_length(res.trajectory);
            CHECK(h.h == doctest::Approx(res.truth.head_length).epsilon(1e-9));
            auto fv = extract_features(res.trajectory, tl, h);
            const auto& gt = res.truth.traits;
            auto close = [](double got, double want, double rel, double abs_tol) {
                return std::abs(got - want) <= std::max(rel * std::abs(want), abs_tol);
            };
            CHECK(close(fv.bpm, gt.bpm, 0.05, 0.05));
            CHECK(close(fv.hba, gt.hba, 0.05, 1e-6));
            CHECK(close(fv.trk_l, gt.trk_l, 0.05, 0.05));
            CHECK(close(fv.trk_r, gt.trk_r, 0.05, 0.05));
            CHECK(close(fv.stl_f, gt.stl_f, 0.05, 0.05));
            CHECK(close(fv.stl_h, gt.stl_h, 0.05, 0.05));
            CHECK(std::abs(fv.std_f - gt.std_f) <= 2.0);
            CHECK(std::abs(fv.std_h - gt.std_h) <= 2.0);
            CHECK(std::abs(fv.swd_f - gt.swd_f) <= 2.0);
            CHECK(std::abs(fv.swd_h - gt.swd_h) <= 2.0);
        }
    }
}

TEST_CASE("monotone response: each lameness parameter drives its trait") {
    // 5-point sweeps; extraction must increase strictly with the parameter.
    auto extract = [](const GaitConfig& cfg) {
        auto res = generate(cfg);
        auto tl = detect_timeline(res.trajectory, StepParams{});
        return extract_features(res.trajectory, tl, head_length(res.trajectory));
    };

    std::vector<double> bpm, hba, trk, stl;
    for (int i = 0; i < 5; ++i) {
        auto cfg = healthy_preset(1);
        cfg.arch_curvature = 0.0008 * i;
        bpm.push_back(extract(cfg).bpm);

        cfg = healthy_preset(1);
        cfg.bob_amplitude_px = 4.0 * i;
        hba.push_back(extract(cfg).hba);

        cfg = healthy_preset(1);
        cfg.tracking_offset = 0.2 * i;
        trk.push_back(extract(cfg).trk_l);

        cfg = healthy_preset(1);
        cfg.stride_right_px = 300.0 - 12.0 * i;
        stl.push_back(extract(cfg).stl_h);
    }
    for (int i = 1; i < 5; ++i) {
        CHECK(bpm[static_cast<size_t>(i)] > bpm[static_cast<size_t>(i - 1)]);
        CHECK(hba[static_cast<size_t>(i)] > hba[static_cast<size_t>(i - 1)]);
        CHECK(trk[static_cast<size_t>(i)] > trk[static_cast<size_t>(i - 1)]);
        CHECK(stl[static_cast<size_t>(i)] > stl[static_cast<size_t>(i - 1)]);
    }
}

TEST_CASE("large stance asymmetry: +6 frames on the right hind reads back as 6") {
    // Long swings need proportionally long strides so the takeoff step still
    // clears the plateau tolerance.
    GaitConfig cfg;
    cfg.seed = 5;
    cfg.stride_left_px = 720.0;
    cfg.stride_right_px = 720.0;
    cfg.stance_frames = {34, 40, 37, 37};
    cfg.swing_frames = {11, 5, 8, 8};
    cfg.n_cycles = 4;
    auto res = generate(cfg);
    CHECK(res.truth.traits.std_h == doctest::Approx(6.0));
    auto tl = detect_timeline(res.trajectory, StepParams{});
    auto fv = extract_features(res.trajectory, tl, head_length(res.trajectory));
    CHECK(std::abs(fv.std_h - 6.0) <= 2.0);
    CHECK(std::abs(fv.swd_h - 6.0) <= 2.0);
}

TEST_CASE("asymmetric swing of +4 frames reads back as 4") {
    GaitConfig cfg;
    cfg.seed = 6;
    cfg.stride_left_px = 500.0;
    cfg.stride_right_px = 500.0;
    cfg.stance_frames = {31, 35, 33, 33};
    cfg.swing_frames = {9, 5, 7, 7};
    cfg.n_cycles = 4;
    auto res = generate(cfg);
    CHECK(res.truth.traits.swd_h == doctest::Approx(4.0));
    auto tl = detect_timeline(res.trajectory, StepParams{});
    auto fv = extract_features(res.trajectory, tl, head_length(res.trajectory));
    CHECK(std::abs(fv.swd_h - 4.0) <= 2.0);
    CHECK(std::abs(fv.std_h - 4.0) <= 2.0);
}

TEST_CASE("dataset generation honours counts, labels and the repeat profile") {
    auto ds = generate_dataset(20, 20, JitterSpec{}, 5);
    CHECK(ds.rows.size() == 40);
    CHECK(ds.trajectories.size() == 40);
    int healthy = 0;
    std::map<std::string, std::pair<int, int>> cows;  // videos, label mix
    for (const auto& row : ds.rows) {
        healthy += row.label == 0 ? 1 : 0;
        auto& [count, labels] = cows[row.cow_id];
        ++count;
        labels |= 1 << row.label;
    }
    CHECK(healthy == 20);
    for (const auto& [cow, info] : cows) {
        CHECK(info.first <= 8);
        CHECK((info.second == 1 || info.second == 2));  // one class per cow
    }
    // Multiplicity profile prefix: 24 single-video cows come first.
    CHECK(cows.at("cow0000").first == 1);
}

TEST_CASE("zero-jitter dataset forms two tight feature clusters") {
    JitterSpec jitter;
    jitter.noise_sd = 0.0;
    jitter.outlier_rate = 0.0;
    jitter.trait_jitter = 0.0;
    auto ds = generate_dataset(6, 6, jitter, 3);
    // Ground-truth HBA separates the classes with a wide margin.
    for (size_t i = 0; i < ds.rows.size(); ++i) {
        if (ds.rows[i].label == 0) {
            CHECK(ds.truths[i].traits.hba <= 1.0);
        } else {
            CHECK(ds.truths[i].traits.hba >= 5.0);
        }
    }
}
