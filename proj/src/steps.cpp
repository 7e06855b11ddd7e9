#include "gait/steps.hpp"

#include <algorithm>
#include <cmath>

namespace gait {

const char* leg_code(int leg) {
    static const char* codes[kLegCount] = {"LH", "RH", "LF", "RF"};
    if (leg < 0 || leg >= kLegCount) throw GaitError("bad leg index");
    return codes[leg];
}

std::vector<StancePhase> detect_stances(const Series& x, int min_len, double tol) {
    if (min_len < 2) throw GaitError("stance min length must be >= 2");
    if (tol <= 0.0) throw GaitError("stance tolerance must be positive");
    const int n = static_cast<int>(x.size());
    std::vector<StancePhase> out;
    if (n < 2) return out;

    // A run of q >= 1 consecutive qualifying diffs [t0, t1] spans frames
    // [t0, t1 + 1]. Isolated frames can never reach min_len >= 2.
    int run_start = -1;
    for (int t = 0; t <= n - 1; ++t) {
        const bool qualifies =
            t < n - 1 && std::abs(x[static_cast<size_t>(t + 1)] - x[static_cast<size_t>(t)]) <= tol;
        if (qualifies && run_start < 0) run_start = t;
        if (!qualifies && run_start >= 0) {
            StancePhase ph{run_start, t};
            if (ph.length() >= min_len) out.push_back(ph);
            run_start = -1;
        }
    }
    return out;
}

std::vector<int> detect_midswings(const Series& x, const std::vector<StancePhase>& stances,
                                  int accel_filter_size) {
    const int n = static_cast<int>(x.size());
    std::vector<int> out;
    if (n < 3) return out;
    const Series accel = uniform_filter(second_derivative(x), accel_filter_size);

    // Gaps are the complement of the stance frames.
    std::vector<std::pair<int, int>> gaps;
    int cursor = 0;
    for (const auto& st : stances) {
        if (st.start > cursor) gaps.emplace_back(cursor, st.start - 1);
        cursor = st.end + 1;
    }
    if (cursor <= n - 1) gaps.emplace_back(cursor, n - 1);

    for (const auto& [lo, hi] : gaps) {
        if (hi - lo + 1 < 3) continue;
        int best = lo;
        for (int t = lo + 1; t <= hi; ++t) {
            if (accel[static_cast<size_t>(t)] > accel[static_cast<size_t>(best)]) best = t;
        }
        out.push_back(best);
    }
    return out;
}

namespace {

bool inside_any_stance(const std::vector<StancePhase>& stances, int frame) {
    for (const auto& st : stances) {
        if (frame >= st.start && frame <= st.end) return true;
    }
    return false;
}

// The interval of the leg's timeline that contains the given frame: either a
// stance or the gap between/around stances.
std::pair<int, int> containing_interval(const std::vector<StancePhase>& stances, int frame,
                                        int n_frames) {
    int lo = 0;
    int hi = n_frames - 1;
    for (const auto& st : stances) {
        if (frame >= st.start && frame <= st.end) return {st.start, st.end};
        if (st.end < frame) lo = std::max(lo, st.end + 1);
        if (st.start > frame) hi = std::min(hi, st.start - 1);
    }
    return {lo, hi};
}

}  // namespace

StepTimeline validate_and_trim(const std::array<LegEvents, kLegCount>& detected, int n_frames) {
    if (n_frames < 1) throw GaitError("empty trajectory");
    std::vector<char> invalid(static_cast<size_t>(n_frames), 0);

    for (int leg = 0; leg < kLegCount; ++leg) {
        const auto& own = detected[static_cast<size_t>(leg)];
        const auto& other = detected[static_cast<size_t>(opposite_leg(leg))];
        for (int ms : own.midswings) {
            bool violated = inside_any_stance(own.stances, ms) ||
                            !inside_any_stance(other.stances, ms);
            if (!violated) continue;
            const auto [lo, hi] = containing_interval(own.stances, ms, n_frames);
            for (int t = lo; t <= hi; ++t) invalid[static_cast<size_t>(t)] = 1;
        }
    }

    // Longest contiguous clean range, earliest on ties.
    int best_lo = -1, best_hi = -2;
    int cur_lo = -1;
    for (int t = 0; t <= n_frames; ++t) {
        const bool ok = t < n_frames && !invalid[static_cast<size_t>(t)];
        if (ok && cur_lo < 0) cur_lo = t;
        if (!ok && cur_lo >= 0) {
            if (t - 1 - cur_lo > best_hi - best_lo) {
                best_lo = cur_lo;
                best_hi = t - 1;
            }
            cur_lo = -1;
        }
    }
    if (best_lo < 0) throw GaitError("insufficient steps");

    StepTimeline tl;
    tl.valid_range = {best_lo, best_hi};
    for (int leg = 0; leg < kLegCount; ++leg) {
        auto& out = tl.legs[static_cast<size_t>(leg)];
        for (const auto& st : detected[static_cast<size_t>(leg)].stances) {
            if (st.start >= best_lo && st.end <= best_hi) out.stances.push_back(st);
        }
    }
    for (int leg = 0; leg < kLegCount; ++leg) {
        auto& out = tl.legs[static_cast<size_t>(leg)];
        const auto& kept_other = tl.legs[static_cast<size_t>(opposite_leg(leg))];
        for (int ms : detected[static_cast<size_t>(leg)].midswings) {
            if (ms < best_lo || ms > best_hi) continue;
            if (inside_any_stance(out.stances, ms)) continue;
            if (!inside_any_stance(kept_other.stances, ms)) continue;
            out.midswings.push_back(ms);
        }
    }

    for (const auto& leg : tl.legs) {
        if (leg.stances.size() < 2) throw GaitError("insufficient steps");
    }

    std::vector<double> hind_intervals;
    for (int leg = 0; leg < 2; ++leg) {
        const auto& st = tl.legs[static_cast<size_t>(leg)].stances;
        for (size_t i = 1; i < st.size(); ++i) {
            hind_intervals.push_back(static_cast<double>(st[i].start - st[i - 1].start));
        }
    }
    if (hind_intervals.empty()) throw GaitError("no hind strides");
    tl.gait_period = median(std::move(hind_intervals));
    return tl;
}

StepTimeline detect_timeline(const TrajectorySet& traj, const StepParams& params) {
    std::array<LegEvents, kLegCount> detected;
    for (int leg = 0; leg < kLegCount; ++leg) {
        const Series x = traj.channel_x(leg_keypoint(leg));
        auto& ev = detected[static_cast<size_t>(leg)];
        ev.stances = detect_stances(x, params.stance_min_frames,
                                    static_cast<double>(params.stance_tol_px));
        ev.midswings = detect_midswings(x, ev.stances, params.accel_filter_size);
    }
    return validate_and_trim(detected, traj.frame_count());
}

}  // namespace gait
