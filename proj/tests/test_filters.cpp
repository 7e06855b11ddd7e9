#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gait/common.hpp"
#include "gait/filters.hpp"
#include "gait/synth.hpp"

using namespace gait;

namespace {

Series make_cubic(int n, double a, double b, double c, double d) {
    Series s(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = i;
        s[static_cast<size_t>(i)] = a * x * x * x + b * x * x + c * x + d;
    }
    return s;
}

}  // namespace

TEST_CASE("mad_correct replaces an isolated spike with the window median") {
    Series s = {0, 0, 100, 0, 0};
    auto res = mad_correct(s, 3, 3.0, 5.0);
    CHECK(res.values == Series{0, 0, 0, 0, 0});
    CHECK(res.outliers == 1);
}

TEST_CASE("mad_correct leaves a constant series alone") {
    Series s(20, 7.5);
    auto res = mad_correct(s, 3, 3.0, 5.0);
    CHECK(res.values == s);
    CHECK(res.outliers == 0);
}

TEST_CASE("mad_correct keeps a linear ramp") {
    Series s = {0, 10, 20, 30};
    auto res = mad_correct(s, 3, 3.0, 5.0);
    CHECK(res.values == s);
    CHECK(res.outliers == 0);
}

TEST_CASE("mad_correct rejects windows larger than the series") {
    Series s = {1, 2};
    CHECK_THROWS_WITH_AS(mad_correct(s, 3, 3.0, 5.0), "window exceeds series", GaitError);
}

TEST_CASE("mad_correct is idempotent once spikes are replaced") {
    Series s = {5, 5, 90, 5, 5, 5, -70, 5, 5};
    auto first = mad_correct(s, 3, 3.0, 5.0);
    CHECK(first.outliers == 2);
    auto second = mad_correct(first.values, 3, 3.0, 5.0);
    CHECK(second.outliers == 0);
    CHECK(second.values == first.values);
}

TEST_CASE("mad_correct is translation equivariant") {
    Rng rng(42);
    Series s(40);
    for (auto& v : s) v = rng.uniform(-20.0, 20.0);
    s[10] += 300.0;
    auto plain = mad_correct(s, 5, 3.0, 5.0);
    Series shifted = s;
    for (auto& v : shifted) v += 123.25;
    auto moved = mad_correct(shifted, 5, 3.0, 5.0);
    REQUIRE(moved.outliers == plain.outliers);
    for (size_t i = 0; i < s.size(); ++i) {
        CHECK(moved.values[i] == doctest::Approx(plain.values[i] + 123.25).epsilon(1e-12));
    }
}

TEST_CASE("savgol reproduces cubics exactly with an odd window") {
    Series s = make_cubic(41, 0.02, -0.4, 3.0, -7.0);
    Series out = savgol_smooth(s, 11, 3);
    for (size_t i = 0; i < s.size(); ++i) {
        CHECK(out[i] == doctest::Approx(s[i]).epsilon(0).scale(1).epsilon(1e-12));
        CHECK(std::abs(out[i] - s[i]) < 1e-9);
    }
}

TEST_CASE("savgol keeps constants for any window parity") {
    Series s(25, 3.25);
    for (int window : {5, 10, 11}) {
        Series out = savgol_smooth(s, window, 3);
        for (double v : out) CHECK(v == doctest::Approx(3.25).epsilon(1e-12));
    }
}

TEST_CASE("savgol with order <= 1 equals the moving average on an impulse") {
    Series s = {0, 0, 0, 1, 0, 0, 0};
    Series out = savgol_smooth(s, 5, 1);
    CHECK(out[3] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("savgol even windows evaluate the fit at the fractional center") {
    // For a cubic input the least-squares cubic is the polynomial itself, so
    // output[i] must equal p(i + 0.5) on full interior windows.
    Series s = make_cubic(40, 0.01, -0.2, 1.5, 4.0);
    Series out = savgol_smooth(s, 10, 3);
    for (int i = 10; i < 30; ++i) {
        const double x = i + 0.5;
        const double expect = 0.01 * x * x * x - 0.2 * x * x + 1.5 * x + 4.0;
        CHECK(std::abs(out[static_cast<size_t>(i)] - expect) < 1e-9);
    }
}

TEST_CASE("savgol rejects series shorter than the window") {
    Series s = {1, 2, 3};
    CHECK_THROWS_AS(savgol_smooth(s, 5, 2), GaitError);
}

TEST_CASE("savgol is translation equivariant") {
    Rng rng(7);
    Series s(30);
    for (auto& v : s) v = rng.uniform(-5.0, 5.0);
    Series shifted = s;
    for (auto& v : shifted) v += 55.5;
    Series a = savgol_smooth(s, 10, 3);
    Series b = savgol_smooth(shifted, 10, 3);
    for (size_t i = 0; i < s.size(); ++i) {
        CHECK(b[i] == doctest::Approx(a[i] + 55.5).epsilon(1e-10));
    }
}

TEST_CASE("second derivative of a quadratic is constant") {
    Series s(20);
    for (int i = 0; i < 20; ++i) s[static_cast<size_t>(i)] = static_cast<double>(i) * i;
    Series d2 = second_derivative(s);
    for (double v : d2) CHECK(v == doctest::Approx(2.0));
}

TEST_CASE("second derivative of any affine series is zero") {
    Series s(15);
    for (int i = 0; i < 15; ++i) s[static_cast<size_t>(i)] = 3.5 * i - 2.0;
    for (double v : second_derivative(s)) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("second derivative central differences on a spike") {
    Series s = {0, 0, 4, 0, 0};
    Series d2 = second_derivative(s);
    CHECK(d2[1] == doctest::Approx(4.0));
    CHECK(d2[2] == doctest::Approx(-8.0));
    CHECK(d2[3] == doctest::Approx(4.0));
    CHECK(d2[0] == d2[1]);
    CHECK(d2[4] == d2[3]);
}

TEST_CASE("second derivative needs three samples") {
    Series s = {1, 2};
    CHECK_THROWS_AS(second_derivative(s), GaitError);
}

TEST_CASE("uniform filter size 1 is identity, size 3 truncates at edges") {
    Series s = {0, 3, 0};
    CHECK(uniform_filter(s, 1) == s);
    Series out = uniform_filter(s, 3);
    CHECK(out[0] == doctest::Approx(1.5));
    CHECK(out[1] == doctest::Approx(1.0));
    CHECK(out[2] == doctest::Approx(1.5));
    Series c(9, 2.0);
    CHECK(uniform_filter(c, 3) == c);
}

TEST_CASE("correct_trajectories counts one corrected cell for one spike") {
    // 53 constant frames; one 100 px jump injected into one keypoint.
    TrajectorySet traj;
    traj.video_id = "t";
    traj.cow_id = "c";
    traj.frames.resize(53);
    for (int t = 0; t < 53; ++t) {
        for (int k = 0; k < kKeypointCount; ++k) {
            traj.frames[static_cast<size_t>(t)][static_cast<size_t>(k)] = {100.0 + 10.0 * k,
                                                                           50.0 + 5.0 * k};
        }
    }
    traj.at(20, KeypointId::Withers).x += 100.0;
    auto res = correct_trajectories(traj, FilterParams{});
    CHECK(res.corrected_cells == 1);
    CHECK(res.outlier_fraction == doctest::Approx(1.0 / (53.0 * 9.0)).epsilon(1e-12));
    // The spike must be gone after correction.
    CHECK(res.trajectory.at(20, KeypointId::Withers).x ==
          doctest::Approx(traj.at(19, KeypointId::Withers).x).epsilon(1e-9));
}

TEST_CASE("correct_trajectories leaves a smooth synthetic trajectory untouched") {
    auto synth = generate(healthy_preset(3));
    auto res = correct_trajectories(synth.trajectory, FilterParams{});
    CHECK(res.corrected_cells == 0);
    CHECK(res.outlier_fraction == 0.0);
}

TEST_CASE("correct_trajectories keeps an all-constant trajectory unchanged") {
    TrajectorySet traj;
    traj.frames.resize(20);
    for (auto& frame : traj.frames) {
        for (int k = 0; k < kKeypointCount; ++k) {
            frame[static_cast<size_t>(k)] = {50.0 * k, 30.0 * k};
        }
    }
    auto res = correct_trajectories(traj, FilterParams{});
    CHECK(res.outlier_fraction == 0.0);
    for (int t = 0; t < 20; ++t) {
        for (int k = 1; k <= kKeypointCount; ++k) {
            const auto id = static_cast<KeypointId>(k);
            CHECK(res.trajectory.at(t, id).x == doctest::Approx(traj.at(t, id).x).epsilon(1e-12));
            CHECK(res.trajectory.at(t, id).y == doctest::Approx(traj.at(t, id).y).epsilon(1e-12));
        }
    }
}
