#include "gait/traits.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <limits>

namespace gait {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SwingInterval {
    int start = 0;
    int end = 0;
};

std::vector<SwingInterval> swing_intervals(const LegEvents& leg) {
    std::vector<SwingInterval> out;
    for (size_t i = 1; i < leg.stances.size(); ++i) {
        const int a = leg.stances[i - 1].end + 1;
        const int b = leg.stances[i].start - 1;
        if (b >= a) out.push_back({a, b});
    }
    return out;
}

int front_leg(Side side) { return side == Side::Left ? leg_index(KeypointId::LeftFrontHoof)
                                                     : leg_index(KeypointId::RightFrontHoof); }
int hind_leg(Side side) { return side == Side::Left ? leg_index(KeypointId::LeftHindHoof)
                                                    : leg_index(KeypointId::RightHindHoof); }

int left_leg(Girdle g) { return g == Girdle::Front ? leg_index(KeypointId::LeftFrontHoof)
                                                   : leg_index(KeypointId::LeftHindHoof); }
int right_leg(Girdle g) { return g == Girdle::Front ? leg_index(KeypointId::RightFrontHoof)
                                                    : leg_index(KeypointId::RightHindHoof); }

}  // namespace

CircleFit fit_circle(const Point& p1, const Point& p2, const Point& p3) {
    if ((p1.x == p2.x && p1.y == p2.y) || (p1.x == p3.x && p1.y == p3.y) ||
        (p2.x == p3.x && p2.y == p3.y)) {
        throw GaitError("degenerate spine");
    }
    // Centre the coordinates to keep the determinant well conditioned.
    const double cx = (p1.x + p2.x + p3.x) / 3.0;
    const double cy = (p1.y + p2.y + p3.y) / 3.0;
    const double x1 = p1.x - cx, y1 = p1.y - cy;
    const double x2 = p2.x - cx, y2 = p2.y - cy;
    const double x3 = p3.x - cx, y3 = p3.y - cy;

    const double span = std::max({distance(p1, p2), distance(p1, p3), distance(p2, p3)});
    const double area2 = std::abs((x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1));
    if (0.5 * area2 < 1e-9 * span * span) {
        return CircleFit{{kInf, kInf}, kInf};
    }

    const double d = 2.0 * (x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2));
    const double q1 = x1 * x1 + y1 * y1;
    const double q2 = x2 * x2 + y2 * y2;
    const double q3 = x3 * x3 + y3 * y3;
    CircleFit fit;
    fit.center.x = (q1 * (y2 - y3) + q2 * (y3 - y1) + q3 * (y1 - y2)) / d + cx;
    fit.center.y = (q1 * (x3 - x2) + q2 * (x1 - x3) + q3 * (x2 - x1)) / d + cy;
    fit.radius = distance(fit.center, p1);
    return fit;
}

double back_posture(const TrajectorySet& traj, const StepTimeline& timeline,
                    const HeadLength& h) {
    bool any = false;
    double best = 0.0;
    for (const auto& leg : timeline.legs) {
        if (leg.midswings.empty()) continue;
        std::vector<double> values;
        values.reserve(leg.midswings.size());
        for (int frame : leg.midswings) {
            const auto fit = fit_circle(traj.at(frame, KeypointId::Withers),
                                        traj.at(frame, KeypointId::Sacrum),
                                        traj.at(frame, KeypointId::CaudalThoracic));
            values.push_back(fit.collinear() ? 0.0 : h.h / fit.radius);
        }
        const double leg_bpm = median(std::move(values));
        if (!any || leg_bpm > best) best = leg_bpm;
        any = true;
    }
    if (!any) throw GaitError("no swing events");
    return best;
}

double head_bobbing(const TrajectorySet& traj, const StepTimeline& timeline) {
    if (timeline.gait_period <= 0.0) throw GaitError("no hind strides");
    const int first = timeline.valid_range.first;
    const int last = timeline.valid_range.last;
    const int n = last - first + 1;
    if (n < 8) throw GaitError("too few frames for spectrum");

    const Series y_all = traj.channel_y(KeypointId::Forehead);
    const int k_max = static_cast<int>(std::ceil(static_cast<double>(n) / timeline.gait_period));

    double best = 0.0;
    for (int k = 1; k <= k_max; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (int t = 0; t < n; ++t) {
            const double phase = -2.0 * M_PI * static_cast<double>(k) * static_cast<double>(t) /
                                 static_cast<double>(n);
            acc += y_all[static_cast<size_t>(first + t)] *
                   std::complex<double>(std::cos(phase), std::sin(phase));
        }
        best = std::max(best, std::abs(acc) / static_cast<double>(n));
    }
    return best;
}

double tracking_distance(const TrajectorySet& traj, const StepTimeline& timeline,
                         const HeadLength& h, Side side) {
    const auto& front = timeline.legs[static_cast<size_t>(front_leg(side))];
    const auto& hind = timeline.legs[static_cast<size_t>(hind_leg(side))];
    const Series xf = traj.channel_x(leg_keypoint(front_leg(side)));
    const Series xh = traj.channel_x(leg_keypoint(hind_leg(side)));

    std::vector<double> values;
    for (const auto& fs : front.stances) {
        const StancePhase* next_hind = nullptr;
        for (const auto& hs : hind.stances) {
            if (hs.start > fs.start) {
                next_hind = &hs;
                break;
            }
        }
        if (!next_hind) continue;
        values.push_back((xf[static_cast<size_t>(fs.start)] -
                          xh[static_cast<size_t>(next_hind->start)]) / h.h);
    }
    if (values.empty()) throw GaitError("no tracking event");
    return median(std::move(values));
}

namespace {

double hoof_median_stride(const TrajectorySet& traj, const LegEvents& leg, int leg_idx,
                          const HeadLength& h) {
    if (leg.stances.size() < 2) throw GaitError("insufficient strides");
    const Series x = traj.channel_x(leg_keypoint(leg_idx));
    std::vector<double> strides;
    for (size_t i = 1; i < leg.stances.size(); ++i) {
        strides.push_back((x[static_cast<size_t>(leg.stances[i].start)] -
                           x[static_cast<size_t>(leg.stances[i - 1].start)]) / h.h);
    }
    return median(std::move(strides));
}

double hoof_median_stance_duration(const LegEvents& leg) {
    if (leg.stances.empty()) throw GaitError("insufficient steps");
    std::vector<double> durations;
    for (const auto& st : leg.stances) durations.push_back(static_cast<double>(st.end - st.start));
    return median(std::move(durations));
}

double hoof_median_swing_duration(const LegEvents& leg) {
    const auto swings = swing_intervals(leg);
    if (swings.empty()) throw GaitError("insufficient swings");
    std::vector<double> durations;
    for (const auto& sw : swings) durations.push_back(static_cast<double>(sw.end - sw.start));
    return median(std::move(durations));
}

}  // namespace

double stride_length_diff(const TrajectorySet& traj, const StepTimeline& timeline,
                          const HeadLength& h, Girdle girdle) {
    const double left = hoof_median_stride(
        traj, timeline.legs[static_cast<size_t>(left_leg(girdle))], left_leg(girdle), h);
    const double right = hoof_median_stride(
        traj, timeline.legs[static_cast<size_t>(right_leg(girdle))], right_leg(girdle), h);
    return std::abs(right - left);
}

double stance_duration_diff(const StepTimeline& timeline, Girdle girdle) {
    const double left =
        hoof_median_stance_duration(timeline.legs[static_cast<size_t>(left_leg(girdle))]);
    const double right =
        hoof_median_stance_duration(timeline.legs[static_cast<size_t>(right_leg(girdle))]);
    return std::abs(right - left);
}

double swing_duration_diff(const StepTimeline& timeline, Girdle girdle) {
    const double left =
        hoof_median_swing_duration(timeline.legs[static_cast<size_t>(left_leg(girdle))]);
    const double right =
        hoof_median_swing_duration(timeline.legs[static_cast<size_t>(right_leg(girdle))]);
    return std::abs(right - left);
}

FeatureVector extract_features(const TrajectorySet& traj, const StepTimeline& timeline,
                               const HeadLength& h) {
    FeatureVector fv;
    fv.video_id = traj.video_id;
    fv.cow_id = traj.cow_id;
    auto compute = [](const char* trait, const std::function<double()>& fn) {
        try {
            return fn();
        } catch (const GaitError& e) {
            throw GaitError(std::string("feature extraction failed: ") + trait + " (" + e.what() +
                            ")");
        }
    };
    fv.bpm = compute("BPM", [&] { return back_posture(traj, timeline, h); });
    fv.hba = compute("HBA", [&] { return head_bobbing(traj, timeline); });
    fv.trk_l = compute("TRK_L", [&] { return tracking_distance(traj, timeline, h, Side::Left); });
    fv.trk_r = compute("TRK_R", [&] { return tracking_distance(traj, timeline, h, Side::Right); });
    fv.stl_f = compute("STL_F", [&] { return stride_length_diff(traj, timeline, h, Girdle::Front); });
    fv.stl_h = compute("STL_H", [&] { return stride_length_diff(traj, timeline, h, Girdle::Hind); });
    fv.std_f = compute("STD_F", [&] { return stance_duration_diff(timeline, Girdle::Front); });
    fv.std_h = compute("STD_H", [&] { return stance_duration_diff(timeline, Girdle::Hind); });
    fv.swd_f = compute("SWD_F", [&] { return swing_duration_diff(timeline, Girdle::Front); });
    fv.swd_h = compute("SWD_H", [&] { return swing_duration_diff(timeline, Girdle::Hind); });
    for (double v : fv.values()) {
        if (!std::isfinite(v)) throw GaitError("feature extraction failed: non-finite value");
    }
    return fv;
}

}  // namespace gait
