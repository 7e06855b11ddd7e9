#include "gait/scoring.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include "gait/csv.hpp"

namespace gait {

namespace {

int64_t days_from_civil(int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<uint64_t>(y - era * 400);
    const uint64_t doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const uint64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

}  // namespace

int64_t parse_iso8601(const std::string& text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char sep = 0;
    const int n = std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h, &mi, &s);
    if (n != 3 && n != 7) throw GaitError("bad ISO-8601 timestamp: '" + text + "'");
    if (n == 7 && sep != 'T' && sep != ' ') {
        throw GaitError("bad ISO-8601 timestamp: '" + text + "'");
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 ||
        s > 60) {
        throw GaitError("bad ISO-8601 timestamp: '" + text + "'");
    }
    return days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) * 86400 +
           h * 3600 + mi * 60 + s;
}

ScoreTable load_score_csv(const std::string& path) {
    const auto table = csv::read_file(path);
    const int c_video = table.column("video_id");
    const int c_cow = table.column("cow_id");
    const int c_at = table.column("recorded_at");
    const int c_obs = table.column("observer_id");
    const int c_score = table.column("score");
    if (c_video < 0 || c_cow < 0 || c_at < 0 || c_obs < 0 || c_score < 0) {
        throw GaitError("scores csv missing required columns: " + path);
    }
    ScoreTable out;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& row : table.rows) {
        ScoreRow r;
        r.video_id = row[static_cast<size_t>(c_video)];
        r.cow_id = row[static_cast<size_t>(c_cow)];
        r.recorded_at = parse_iso8601(row[static_cast<size_t>(c_at)]);
        r.observer_id = row[static_cast<size_t>(c_obs)];
        r.score = static_cast<int>(csv::parse_long(row[static_cast<size_t>(c_score)], "score"));
        if (r.score < 1 || r.score > 5) throw GaitError("score outside 1..5 in " + r.video_id);
        if (!seen.insert({r.video_id, r.observer_id}).second) {
            throw GaitError("duplicate score for (" + r.video_id + ", " + r.observer_id + ")");
        }
        out.rows.push_back(std::move(r));
    }
    return out;
}

RatingUnits units_by_video(const ScoreTable& table) {
    std::map<std::string, std::vector<int>> by_video;
    std::vector<std::string> order;
    for (const auto& r : table.rows) {
        if (!by_video.count(r.video_id)) order.push_back(r.video_id);
        by_video[r.video_id].push_back(r.score);
    }
    RatingUnits units;
    units.reserve(order.size());
    for (const auto& v : order) units.push_back(by_video[v]);
    return units;
}

AlphaResult krippendorff_alpha_ordinal(const RatingUnits& units) {
    // Category list over pairable values only.
    std::set<int> cats;
    bool any_pairable = false;
    for (const auto& u : units) {
        if (u.size() < 2) continue;
        any_pairable = true;
        for (int v : u) cats.insert(v);
    }
    if (!any_pairable) throw GaitError("no comparable pairs");
    std::vector<int> cat_list(cats.begin(), cats.end());
    const size_t nc = cat_list.size();
    auto cat_index = [&](int v) {
        return static_cast<size_t>(std::lower_bound(cat_list.begin(), cat_list.end(), v) -
                                   cat_list.begin());
    };

    // Coincidence matrix: each ordered pair within a unit contributes
    // 1 / (m_u - 1).
    std::vector<std::vector<double>> o(nc, std::vector<double>(nc, 0.0));
    for (const auto& u : units) {
        const size_t m = u.size();
        if (m < 2) continue;
        const double w = 1.0 / static_cast<double>(m - 1);
        for (size_t i = 0; i < m; ++i) {
            for (size_t j = 0; j < m; ++j) {
                if (i == j) continue;
                o[cat_index(u[i])][cat_index(u[j])] += w;
            }
        }
    }
    std::vector<double> marg(nc, 0.0);
    double n = 0.0;
    for (size_t c = 0; c < nc; ++c) {
        for (size_t k = 0; k < nc; ++k) marg[c] += o[c][k];
        n += marg[c];
    }

    // Ordinal metric from cumulative marginals.
    auto delta2 = [&](size_t c, size_t k) {
        if (c > k) std::swap(c, k);
        double cum = 0.0;
        for (size_t g = c; g <= k; ++g) cum += marg[g];
        const double d = cum - (marg[c] + marg[k]) / 2.0;
        return d * d;
    };

    double d_obs = 0.0;
    double d_exp = 0.0;
    for (size_t c = 0; c < nc; ++c) {
        for (size_t k = 0; k < nc; ++k) {
            if (c == k) continue;
            const double d2 = delta2(c, k);
            d_obs += o[c][k] * d2;
            d_exp += marg[c] * marg[k] * d2;
        }
    }
    AlphaResult res;
    if (d_exp == 0.0) {
        res.alpha = 1.0;
        res.degenerate = true;
        return res;
    }
    res.alpha = 1.0 - (n - 1.0) * d_obs / d_exp;
    return res;
}

AgreementResult percent_agreement(const RatingUnits& units) {
    long total_pairs = 0;
    long agreeing = 0;
    std::map<int, long> agree_on;     // A_k: pairs agreeing on category k
    std::map<int, long> discordant;   // D_k: pairs where exactly one member is k
    std::set<int> assigned;
    for (const auto& u : units) {
        for (int v : u) assigned.insert(v);
        const size_t m = u.size();
        if (m < 2) continue;
        for (size_t i = 0; i < m; ++i) {
            for (size_t j = i + 1; j < m; ++j) {
                ++total_pairs;
                if (u[i] == u[j]) {
                    ++agreeing;
                    ++agree_on[u[i]];
                } else {
                    ++discordant[u[i]];
                    ++discordant[u[j]];
                }
            }
        }
    }
    if (total_pairs == 0) throw GaitError("no comparable pairs");
    AgreementResult res;
    res.pa = 100.0 * static_cast<double>(agreeing) / static_cast<double>(total_pairs);
    for (int k : assigned) {
        const double a = static_cast<double>(agree_on.count(k) ? agree_on[k] : 0);
        const double d = static_cast<double>(discordant.count(k) ? discordant[k] : 0);
        if (a == 0.0 && d == 0.0) {
            res.sa[k] = std::nullopt;  // assigned only inside single-rating units
        } else {
            res.sa[k] = 100.0 * 2.0 * a / (2.0 * a + d);
        }
    }
    return res;
}

std::vector<VideoPair> pair_repeats(const ScoreTable& table, double window_hours) {
    struct VideoInfo {
        std::string cow;
        int64_t at = 0;
    };
    std::map<std::string, VideoInfo> videos;
    std::vector<std::string> order;
    for (const auto& r : table.rows) {
        if (!videos.count(r.video_id)) {
            order.push_back(r.video_id);
            videos[r.video_id] = {r.cow_id, r.recorded_at};
        }
    }
    std::vector<VideoPair> out;
    const auto window = static_cast<int64_t>(window_hours * 3600.0);
    for (size_t i = 0; i < order.size(); ++i) {
        for (size_t j = i + 1; j < order.size(); ++j) {
            const auto& a = videos[order[i]];
            const auto& b = videos[order[j]];
            if (a.cow != b.cow) continue;
            if (std::abs(a.at - b.at) < window) out.push_back({order[i], order[j], a.cow});
        }
    }
    return out;
}

RatingUnits intra_observer_units(const ScoreTable& table, const std::vector<VideoPair>& pairs,
                                 const std::string& observer_id) {
    std::map<std::string, int> scores;
    for (const auto& r : table.rows) {
        if (r.observer_id == observer_id) scores[r.video_id] = r.score;
    }
    RatingUnits units;
    for (const auto& p : pairs) {
        const auto a = scores.find(p.video_a);
        const auto b = scores.find(p.video_b);
        if (a == scores.end() || b == scores.end()) continue;
        units.push_back({a->second, b->second});
    }
    return units;
}

ReliabilityReport inter_observer_report(const ScoreTable& table) {
    const auto units = units_by_video(table);
    return {krippendorff_alpha_ordinal(units), percent_agreement(units)};
}

std::map<std::string, ReliabilityReport> intra_observer_reports(const ScoreTable& table,
                                                                double window_hours) {
    const auto pairs = pair_repeats(table, window_hours);
    std::set<std::string> observers;
    for (const auto& r : table.rows) observers.insert(r.observer_id);
    std::map<std::string, ReliabilityReport> out;
    for (const auto& obs : observers) {
        const auto units = intra_observer_units(table, pairs, obs);
        try {
            out[obs] = {krippendorff_alpha_ordinal(units), percent_agreement(units)};
        } catch (const GaitError&) {
            // Observer without usable repeat pairs: skipped from the report.
        }
    }
    return out;
}

MergeStrategy merge_strategy_from_name(const std::string& name) {
    if (name == "mean") return MergeStrategy::Mean;
    if (name == "majority") return MergeStrategy::Majority;
    if (name == "weighted") return MergeStrategy::Weighted;
    if (name == "tau_vote") return MergeStrategy::TauVote;
    throw GaitError("unknown merge strategy: " + name);
}

const char* merge_strategy_name(MergeStrategy s) {
    switch (s) {
        case MergeStrategy::Mean: return "mean";
        case MergeStrategy::Majority: return "majority";
        case MergeStrategy::Weighted: return "weighted";
        case MergeStrategy::TauVote: return "tau_vote";
    }
    return "unknown";
}

namespace {

// Weighted vote over scores 1..5; ties resolve to the lowest tied score.
int vote(const std::vector<std::pair<int, double>>& score_weights) {
    std::map<int, double> totals;
    for (const auto& [score, w] : score_weights) totals[score] += w;
    int best = 0;
    double best_w = -1.0;
    for (const auto& [score, w] : totals) {  // ascending score order
        if (w > best_w + 1e-12) {
            best = score;
            best_w = w;
        }
    }
    return best;
}

}  // namespace

MergedLabels merge_scores(const ScoreTable& table, MergeStrategy strategy,
                          const MergeParams& params) {
    std::map<std::string, double> alphas = params.observer_alpha;
    if (alphas.empty() &&
        (strategy == MergeStrategy::Weighted || strategy == MergeStrategy::TauVote)) {
        for (const auto& [obs, rep] : intra_observer_reports(table, params.intra_window_hours)) {
            alphas[obs] = rep.alpha.alpha;
        }
    }

    MergedLabels out;
    out.strategy = strategy;

    std::set<std::string> eligible;
    if (strategy == MergeStrategy::TauVote) {
        for (const auto& [obs, a] : alphas) {
            if (a >= params.tau) eligible.insert(obs);
        }
        if (eligible.empty()) throw GaitError("no eligible observers");
        for (const auto& obs : eligible) out.weights[obs] = 1.0;
    } else if (strategy == MergeStrategy::Weighted) {
        double sum = 0.0;
        for (auto& [obs, a] : alphas) sum += std::max(a, 0.0);
        for (const auto& [obs, a] : alphas) {
            // Clamp negatives; fall back to equal weights when nothing is left.
            out.weights[obs] = sum > 0.0 ? std::max(a, 0.0) / sum : 1.0;
        }
    }

    struct VideoScores {
        std::string cow;
        std::vector<std::pair<std::string, int>> scores;  // observer, score
    };
    std::map<std::string, VideoScores> by_video;
    std::vector<std::string> order;
    for (const auto& r : table.rows) {
        if (!by_video.count(r.video_id)) {
            order.push_back(r.video_id);
            by_video[r.video_id].cow = r.cow_id;
        }
        by_video[r.video_id].scores.push_back({r.observer_id, r.score});
    }

    for (const auto& vid : order) {
        const auto& vs = by_video[vid];
        MergedLabel label;
        label.video_id = vid;
        label.cow_id = vs.cow;
        switch (strategy) {
            case MergeStrategy::Mean: {
                long sum = 0;
                long count = 0;
                for (const auto& [obs, score] : vs.scores) {
                    sum += score;
                    ++count;
                }
                // Round to nearest with halves rounded down, in exact integer
                // arithmetic: ceil(mean - 1/2) = floor((2*sum + count - 1) / (2*count)).
                label.merged_score = static_cast<int>((2 * sum + count - 1) / (2 * count));
                break;
            }
            case MergeStrategy::Majority: {
                std::vector<std::pair<int, double>> sw;
                for (const auto& [obs, score] : vs.scores) sw.push_back({score, 1.0});
                label.merged_score = vote(sw);
                break;
            }
            case MergeStrategy::Weighted: {
                std::vector<std::pair<int, double>> sw;
                for (const auto& [obs, score] : vs.scores) {
                    const auto it = out.weights.find(obs);
                    sw.push_back({score, it == out.weights.end() ? 0.0 : it->second});
                }
                label.merged_score = vote(sw);
                break;
            }
            case MergeStrategy::TauVote: {
                std::vector<std::pair<int, double>> sw;
                for (const auto& [obs, score] : vs.scores) {
                    if (eligible.count(obs)) sw.push_back({score, 1.0});
                }
                if (sw.empty()) throw GaitError("no eligible observers");
                label.merged_score = vote(sw);
                break;
            }
        }
        out.labels.push_back(label);
    }
    return out;
}

void binarize(MergedLabels& labels) {
    for (auto& l : labels.labels) {
        if (l.merged_score < 1 || l.merged_score > 5) {
            throw GaitError("merged score outside 1..5");
        }
        l.binary = l.merged_score == 1 ? 0 : 1;
    }
}

void save_labels_csv(const std::string& path, const MergedLabels& labels) {
    std::ofstream out(path);
    if (!out) throw GaitError("cannot write file: " + path);
    out << "video_id,merged_score,binary_label\n";
    for (const auto& l : labels.labels) {
        out << l.video_id << ',' << l.merged_score << ',' << l.binary << '\n';
    }
}

}  // namespace gait
