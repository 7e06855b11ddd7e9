#include "gait/filters.hpp"

#include <algorithm>
#include <cmath>

namespace gait {

namespace {

// Consistency factor that relates MAD to the standard deviation of a normal
// sample.
constexpr double kMadSigma = 1.4826;

double window_median(const Series& s, int lo, int hi) {
    std::vector<double> w(s.begin() + lo, s.begin() + hi + 1);
    return median(std::move(w));
}

// Least-squares polynomial fit over s[lo..hi], evaluated at position x
// (absolute index coordinates). Abscissae are centered on x before forming
// the normal equations to keep them well conditioned.
double polyfit_eval(const Series& s, int lo, int hi, int order, double x) {
    const int n = hi - lo + 1;
    const int p = std::min(order, n - 1);
    const int m = p + 1;

    // Normal equations A c = b with A[i][j] = sum t^(i+j), b[i] = sum t^i * y.
    std::vector<long double> pow_sums(static_cast<size_t>(2 * m - 1), 0.0L);
    std::vector<long double> b(static_cast<size_t>(m), 0.0L);
    for (int idx = lo; idx <= hi; ++idx) {
        const long double t = static_cast<long double>(idx) - static_cast<long double>(x);
        long double tp = 1.0L;
        for (int i = 0; i < 2 * m - 1; ++i) {
            pow_sums[static_cast<size_t>(i)] += tp;
            if (i < m) b[static_cast<size_t>(i)] += tp * static_cast<long double>(s[static_cast<size_t>(idx)]);
            tp *= t;
        }
    }
    std::vector<std::vector<long double>> a(static_cast<size_t>(m),
                                            std::vector<long double>(static_cast<size_t>(m + 1)));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) a[static_cast<size_t>(i)][static_cast<size_t>(j)] = pow_sums[static_cast<size_t>(i + j)];
        a[static_cast<size_t>(i)][static_cast<size_t>(m)] = b[static_cast<size_t>(i)];
    }
    // Gaussian elimination with partial pivoting.
    for (int col = 0; col < m; ++col) {
        int pivot = col;
        for (int r = col + 1; r < m; ++r) {
            if (std::abs(static_cast<double>(a[static_cast<size_t>(r)][static_cast<size_t>(col)])) >
                std::abs(static_cast<double>(a[static_cast<size_t>(pivot)][static_cast<size_t>(col)]))) {
                pivot = r;
            }
        }
        std::swap(a[static_cast<size_t>(col)], a[static_cast<size_t>(pivot)]);
        const long double diag = a[static_cast<size_t>(col)][static_cast<size_t>(col)];
        if (diag == 0.0L) continue;
        for (int r = 0; r < m; ++r) {
            if (r == col) continue;
            const long double f = a[static_cast<size_t>(r)][static_cast<size_t>(col)] / diag;
            for (int c2 = col; c2 <= m; ++c2) {
                a[static_cast<size_t>(r)][static_cast<size_t>(c2)] -= f * a[static_cast<size_t>(col)][static_cast<size_t>(c2)];
            }
        }
    }
    // The fit is centered on x, so the value at x is the constant coefficient.
    const long double diag0 = a[0][0];
    if (diag0 == 0.0L) return s[static_cast<size_t>(lo)];
    return static_cast<double>(a[0][static_cast<size_t>(m)] / diag0);
}

}  // namespace

MadResult mad_correct(const Series& s, int window, double k, double floor_px) {
    if (window < 3 || window % 2 == 0) throw GaitError("mad window must be odd and >= 3");
    if (k <= 0.0) throw GaitError("mad k must be positive");
    if (floor_px < 0.0) throw GaitError("mad floor must be non-negative");
    const int n = static_cast<int>(s.size());
    if (window > n) throw GaitError("window exceeds series");

    const int half = window / 2;
    MadResult res;
    res.values = s;
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half);
        const int hi = std::min(n - 1, i + half);
        const double m = window_median(s, lo, hi);
        std::vector<double> devs;
        devs.reserve(static_cast<size_t>(hi - lo + 1));
        for (int j = lo; j <= hi; ++j) devs.push_back(std::abs(s[static_cast<size_t>(j)] - m));
        const double mad = median(std::move(devs));
        const double threshold = std::max(k * kMadSigma * mad, floor_px);
        if (std::abs(s[static_cast<size_t>(i)] - m) > threshold) {
            res.values[static_cast<size_t>(i)] = m;
            ++res.outliers;
        }
    }
    return res;
}

Series savgol_smooth(const Series& s, int window, int order) {
    if (order < 0) throw GaitError("sg order must be non-negative");
    if (window < order + 2) throw GaitError("sg window must be at least order + 2");
    const int n = static_cast<int>(s.size());
    if (n < window) throw GaitError("series shorter than sg window");

    const int half_left = (window - 1) / 2;
    const int half_right = window / 2;
    const double center_shift = (window % 2 == 0) ? 0.5 : 0.0;

    Series out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half_left);
        const int hi = std::min(n - 1, i + half_right);
        out[static_cast<size_t>(i)] = polyfit_eval(s, lo, hi, order, i + center_shift);
    }
    return out;
}

Series second_derivative(const Series& s) {
    const int n = static_cast<int>(s.size());
    if (n < 3) throw GaitError("series too short for second derivative");
    Series out(static_cast<size_t>(n));
    for (int i = 1; i + 1 < n; ++i) {
        out[static_cast<size_t>(i)] = s[static_cast<size_t>(i + 1)] - 2.0 * s[static_cast<size_t>(i)] + s[static_cast<size_t>(i - 1)];
    }
    out[0] = out[1];
    out[static_cast<size_t>(n - 1)] = out[static_cast<size_t>(n - 2)];
    return out;
}

Series uniform_filter(const Series& s, int size) {
    if (size < 1) throw GaitError("uniform filter size must be >= 1");
    if (size == 1) return s;
    const int n = static_cast<int>(s.size());
    const int half_left = (size - 1) / 2;
    const int half_right = size / 2;
    Series out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half_left);
        const int hi = std::min(n - 1, i + half_right);
        double sum = 0.0;
        for (int j = lo; j <= hi; ++j) sum += s[static_cast<size_t>(j)];
        out[static_cast<size_t>(i)] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

CorrectionResult correct_trajectories(const TrajectorySet& traj, const FilterParams& params) {
    CorrectionResult res;
    res.trajectory = traj;
    const int n = traj.frame_count();

    std::vector<char> cell_corrected(static_cast<size_t>(n) * kKeypointCount, 0);
    for (int k = 1; k <= kKeypointCount; ++k) {
        const auto id = static_cast<KeypointId>(k);
        for (int axis = 0; axis < 2; ++axis) {
            Series ch = axis == 0 ? traj.channel_x(id) : traj.channel_y(id);
            auto mad = mad_correct(ch, params.mad_window, params.mad_k, params.mad_floor_px);
            for (int t = 0; t < n; ++t) {
                if (mad.values[static_cast<size_t>(t)] != ch[static_cast<size_t>(t)]) {
                    cell_corrected[static_cast<size_t>(t) * kKeypointCount + static_cast<size_t>(k - 1)] = 1;
                }
            }
            Series smooth = savgol_smooth(mad.values, params.sg_window, params.sg_order);
            for (int t = 0; t < n; ++t) {
                Point& p = res.trajectory.at(t, id);
                (axis == 0 ? p.x : p.y) = smooth[static_cast<size_t>(t)];
            }
        }
    }
    for (char c : cell_corrected) res.corrected_cells += c;
    res.outlier_fraction =
        static_cast<double>(res.corrected_cells) / (static_cast<double>(n) * kKeypointCount);
    return res;
}

}  // namespace gait
