#include <algorithm>
#include <cmath>

#include "gait/ml.hpp"

namespace gait {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void check_inputs(const Matrix& x, const std::vector<int>& y) {
    if (x.empty() || x.size() != y.size()) throw GaitError("bad training data shape");
    for (const auto& row : x) {
        if (!all_finite(row)) throw GaitError("non-finite feature value");
    }
    for (int label : y) {
        if (label != 0 && label != 1) throw GaitError("labels must be binary");
    }
}

// ---------------------------------------------------------------------------

class LogisticRegressionClassifier : public Classifier {
public:
    explicit LogisticRegressionClassifier(const ClassifierSpec& spec)
        : lr_(spec.param("lr", 0.1)),
          epochs_(static_cast<int>(spec.param("epochs", 500))),
          l2_(spec.param("l2", 1e-3)) {}

    void fit(const Matrix& x, const std::vector<int>& y) override {
        check_inputs(x, y);
        const size_t n = x.size();
        const size_t d = x[0].size();
        w_.assign(d, 0.0);
        b_ = 0.0;
        std::vector<double> grad(d);
        for (int epoch = 0; epoch < epochs_; ++epoch) {
            std::fill(grad.begin(), grad.end(), 0.0);
            double grad_b = 0.0;
            for (size_t i = 0; i < n; ++i) {
                const double err = sigmoid(dot(w_, x[i]) + b_) - y[i];
                for (size_t j = 0; j < d; ++j) grad[j] += err * x[i][j];
                grad_b += err;
            }
            for (size_t j = 0; j < d; ++j) {
                w_[j] -= lr_ * (grad[j] / static_cast<double>(n) + l2_ * w_[j]);
            }
            b_ -= lr_ * grad_b / static_cast<double>(n);
        }
    }

    std::vector<int> predict(const Matrix& x) const override {
        std::vector<int> out;
        out.reserve(x.size());
        for (const auto& row : x) out.push_back(sigmoid(dot(w_, row) + b_) >= 0.5 ? 1 : 0);
        return out;
    }

    double decision(const std::vector<double>& row) const { return dot(w_, row) + b_; }

private:
    double lr_;
    int epochs_;
    double l2_;
    std::vector<double> w_;
    double b_ = 0.0;
};

// ---------------------------------------------------------------------------
// Support vector machine trained with simplified sequential minimal
// optimization; linear or RBF kernel.

class SvmClassifier : public Classifier {
public:
    SvmClassifier(const ClassifierSpec& spec, bool rbf)
        : rbf_(rbf),
          c_(spec.param("C", rbf ? 10.0 : 1.0)),
          gamma_(spec.param("gamma", 0.1)),
          tol_(spec.param("tol", 1e-3)),
          max_passes_(static_cast<int>(spec.param("max_passes", 5))),
          max_sweeps_(static_cast<int>(spec.param("max_sweeps", 300))),
          seed_(spec.seed) {}

    void fit(const Matrix& x, const std::vector<int>& y01) override {
        check_inputs(x, y01);
        x_ = x;
        const size_t n = x.size();
        y_.resize(n);
        for (size_t i = 0; i < n; ++i) y_[i] = y01[i] == 1 ? 1.0 : -1.0;
        alpha_.assign(n, 0.0);
        b_ = 0.0;

        Matrix k(n, std::vector<double>(n));
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = i; j < n; ++j) {
                k[i][j] = k[j][i] = kernel(x_[i], x_[j]);
            }
        }

        Rng rng(derive_seed(seed_, 41));
        auto f = [&](size_t i) {
            double s = b_;
            for (size_t j = 0; j < n; ++j) {
                if (alpha_[j] != 0.0) s += alpha_[j] * y_[j] * k[i][j];
            }
            return s;
        };

        int passes = 0;
        int sweeps = 0;
        while (passes < max_passes_ && sweeps < max_sweeps_) {
            ++sweeps;
            int changed = 0;
            for (size_t i = 0; i < n; ++i) {
                const double ei = f(i) - y_[i];
                if (!((y_[i] * ei < -tol_ && alpha_[i] < c_) ||
                      (y_[i] * ei > tol_ && alpha_[i] > 0.0))) {
                    continue;
                }
                size_t j = rng.below(n - 1);
                if (j >= i) ++j;
                const double ej = f(j) - y_[j];
                const double ai_old = alpha_[i];
                const double aj_old = alpha_[j];
                double lo, hi;
                if (y_[i] != y_[j]) {
                    lo = std::max(0.0, aj_old - ai_old);
                    hi = std::min(c_, c_ + aj_old - ai_old);
                } else {
                    lo = std::max(0.0, ai_old + aj_old - c_);
                    hi = std::min(c_, ai_old + aj_old);
                }
                if (lo >= hi) continue;
                const double eta = 2.0 * k[i][j] - k[i][i] - k[j][j];
                if (eta >= 0.0) continue;
                double aj = aj_old - y_[j] * (ei - ej) / eta;
                aj = std::clamp(aj, lo, hi);
                if (std::abs(aj - aj_old) < 1e-5) continue;
                const double ai = ai_old + y_[i] * y_[j] * (aj_old - aj);
                alpha_[i] = ai;
                alpha_[j] = aj;
                const double b1 = b_ - ei - y_[i] * (ai - ai_old) * k[i][i] -
                                  y_[j] * (aj - aj_old) * k[i][j];
                const double b2 = b_ - ej - y_[i] * (ai - ai_old) * k[i][j] -
                                  y_[j] * (aj - aj_old) * k[j][j];
                if (ai > 0.0 && ai < c_) {
                    b_ = b1;
                } else if (aj > 0.0 && aj < c_) {
                    b_ = b2;
                } else {
                    b_ = (b1 + b2) / 2.0;
                }
                ++changed;
            }
            passes = changed == 0 ? passes + 1 : 0;
        }

        // Keep only support vectors.
        Matrix sv;
        std::vector<double> sv_coef;
        for (size_t i = 0; i < n; ++i) {
            if (std::abs(alpha_[i]) > 1e-12) {
                sv.push_back(x_[i]);
                sv_coef.push_back(alpha_[i] * y_[i]);
            }
        }
        x_ = std::move(sv);
        coef_ = std::move(sv_coef);
    }

    std::vector<int> predict(const Matrix& x) const override {
        std::vector<int> out;
        out.reserve(x.size());
        for (const auto& row : x) {
            double s = b_;
            for (size_t i = 0; i < x_.size(); ++i) s += coef_[i] * kernel(x_[i], row);
            out.push_back(s >= 0.0 ? 1 : 0);
        }
        return out;
    }

private:
    double kernel(const std::vector<double>& a, const std::vector<double>& b) const {
        if (!rbf_) return dot(a, b);
        double d2 = 0.0;
        for (size_t i = 0; i < a.size(); ++i) {
            const double diff = a[i] - b[i];
            d2 += diff * diff;
        }
        return std::exp(-gamma_ * d2);
    }

    bool rbf_;
    double c_;
    double gamma_;
    double tol_;
    int max_passes_;
    int max_sweeps_;
    uint64_t seed_;
    Matrix x_;
    std::vector<double> y_;
    std::vector<double> alpha_;
    std::vector<double> coef_;
    double b_ = 0.0;
};

// ---------------------------------------------------------------------------
// CART with Gini splits, used by the random forest.

struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int leaf_class = 0;
};

class ClassificationTree {
public:
    void fit(const Matrix& x, const std::vector<int>& y, const std::vector<size_t>& indices,
             int max_depth, int min_leaf, int max_features, Rng& rng) {
        nodes_.clear();
        build(x, y, indices, 0, max_depth, min_leaf, max_features, rng);
    }

    int predict(const std::vector<double>& row) const {
        int node = 0;
        while (nodes_[static_cast<size_t>(node)].feature >= 0) {
            const auto& nd = nodes_[static_cast<size_t>(node)];
            node = row[static_cast<size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
        }
        return nodes_[static_cast<size_t>(node)].leaf_class;
    }

    bool uses_feature(int feature) const {
        for (const auto& nd : nodes_) {
            if (nd.feature == feature) return true;
        }
        return false;
    }

private:
    int build(const Matrix& x, const std::vector<int>& y, const std::vector<size_t>& indices,
              int depth, int max_depth, int min_leaf, int max_features, Rng& rng) {
        const int node_id = static_cast<int>(nodes_.size());
        nodes_.push_back({});

        long pos = 0;
        for (size_t i : indices) pos += y[i];
        const long n = static_cast<long>(indices.size());
        const bool pure = pos == 0 || pos == n;
        if (depth >= max_depth || n < 2 * min_leaf || pure) {
            nodes_[static_cast<size_t>(node_id)].leaf_class = 2 * pos > n ? 1 : 0;
            return node_id;
        }

        const int d = static_cast<int>(x[0].size());
        std::vector<int> features(static_cast<size_t>(d));
        for (int j = 0; j < d; ++j) features[static_cast<size_t>(j)] = j;
        rng.shuffle(features);
        const int n_try = std::min(d, std::max(1, max_features));

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_gini = 1e300;
        std::vector<std::pair<double, int>> sorted;
        for (int fi = 0; fi < n_try; ++fi) {
            const int feature = features[static_cast<size_t>(fi)];
            sorted.clear();
            for (size_t i : indices) {
                sorted.push_back({x[i][static_cast<size_t>(feature)], y[i]});
            }
            std::sort(sorted.begin(), sorted.end());
            long left_pos = 0;
            for (long i = 0; i < n - 1; ++i) {
                left_pos += sorted[static_cast<size_t>(i)].second;
                if (sorted[static_cast<size_t>(i)].first ==
                    sorted[static_cast<size_t>(i + 1)].first) {
                    continue;
                }
                const long nl = i + 1;
                const long nr = n - nl;
                if (nl < min_leaf || nr < min_leaf) continue;
                const double pl = static_cast<double>(left_pos) / static_cast<double>(nl);
                const double pr =
                    static_cast<double>(pos - left_pos) / static_cast<double>(nr);
                const double gini = static_cast<double>(nl) * 2.0 * pl * (1.0 - pl) +
                                    static_cast<double>(nr) * 2.0 * pr * (1.0 - pr);
                if (gini < best_gini - 1e-12) {
                    best_gini = gini;
                    best_feature = feature;
                    best_threshold = (sorted[static_cast<size_t>(i)].first +
                                      sorted[static_cast<size_t>(i + 1)].first) / 2.0;
                }
            }
        }

        if (best_feature < 0) {
            nodes_[static_cast<size_t>(node_id)].leaf_class = 2 * pos > n ? 1 : 0;
            return node_id;
        }

        std::vector<size_t> left_idx, right_idx;
        for (size_t i : indices) {
            if (x[i][static_cast<size_t>(best_feature)] <= best_threshold) {
                left_idx.push_back(i);
            } else {
                right_idx.push_back(i);
            }
        }
        nodes_[static_cast<size_t>(node_id)].feature = best_feature;
        nodes_[static_cast<size_t>(node_id)].threshold = best_threshold;
        const int left = build(x, y, left_idx, depth + 1, max_depth, min_leaf, max_features, rng);
        const int right =
            build(x, y, right_idx, depth + 1, max_depth, min_leaf, max_features, rng);
        nodes_[static_cast<size_t>(node_id)].left = left;
        nodes_[static_cast<size_t>(node_id)].right = right;
        return node_id;
    }

    std::vector<TreeNode> nodes_;
};

class RandomForestClassifier : public Classifier {
public:
    explicit RandomForestClassifier(const ClassifierSpec& spec)
        : n_trees_(static_cast<int>(spec.param("n_trees", 200))),
          max_depth_(static_cast<int>(spec.param("max_depth", 8))),
          min_leaf_(static_cast<int>(spec.param("min_leaf", 2))),
          max_features_(static_cast<int>(spec.param("max_features", 0))),
          seed_(spec.seed) {}

    void fit(const Matrix& x, const std::vector<int>& y) override {
        check_inputs(x, y);
        trees_.assign(static_cast<size_t>(n_trees_), {});
        const size_t n = x.size();
        const int d = static_cast<int>(x[0].size());
        const int mf = max_features_ > 0
                           ? max_features_
                           : std::max(1, static_cast<int>(std::sqrt(static_cast<double>(d))));
        for (int t = 0; t < n_trees_; ++t) {
            Rng rng(derive_seed(seed_, 43, static_cast<uint64_t>(t)));
            std::vector<size_t> sample(n);
            for (auto& s : sample) s = rng.below(n);  // bootstrap
            trees_[static_cast<size_t>(t)].fit(x, y, sample, max_depth_, min_leaf_, mf, rng);
        }
    }

    std::vector<int> predict(const Matrix& x) const override {
        std::vector<int> out;
        out.reserve(x.size());
        for (const auto& row : x) {
            int votes = 0;
            for (const auto& tree : trees_) votes += tree.predict(row);
            out.push_back(2 * votes > n_trees_ ? 1 : 0);
        }
        return out;
    }

    bool any_tree_uses(int feature) const {
        for (const auto& tree : trees_) {
            if (tree.uses_feature(feature)) return true;
        }
        return false;
    }

private:
    int n_trees_;
    int max_depth_;
    int min_leaf_;
    int max_features_;
    uint64_t seed_;
    std::vector<ClassificationTree> trees_;
};

// ---------------------------------------------------------------------------
// Gradient boosting: stagewise regression trees on the logistic gradient with
// Newton leaf values.

class RegressionTree {
public:
    void fit(const Matrix& x, const std::vector<double>& grad, const std::vector<double>& hess,
             int max_depth, int min_leaf) {
        nodes_.clear();
        std::vector<size_t> indices(x.size());
        for (size_t i = 0; i < indices.size(); ++i) indices[i] = i;
        build(x, grad, hess, indices, 0, max_depth, min_leaf);
    }

    double predict(const std::vector<double>& row) const {
        int node = 0;
        while (nodes_[static_cast<size_t>(node)].feature >= 0) {
            const auto& nd = nodes_[static_cast<size_t>(node)];
            node = row[static_cast<size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
        }
        return values_[static_cast<size_t>(node)];
    }

private:
    static double gain_term(double g, double h) { return g * g / (h + 1e-6); }

    int build(const Matrix& x, const std::vector<double>& grad, const std::vector<double>& hess,
              const std::vector<size_t>& indices, int depth, int max_depth, int min_leaf) {
        const int node_id = static_cast<int>(nodes_.size());
        nodes_.push_back({});
        values_.push_back(0.0);

        double sum_g = 0.0, sum_h = 0.0;
        for (size_t i : indices) {
            sum_g += grad[i];
            sum_h += hess[i];
        }
        const long n = static_cast<long>(indices.size());

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_gain = 1e-12;
        if (depth < max_depth && n >= 2 * min_leaf) {
            const int d = static_cast<int>(x[0].size());
            std::vector<std::pair<double, size_t>> sorted;
            for (int feature = 0; feature < d; ++feature) {
                sorted.clear();
                for (size_t i : indices) sorted.push_back({x[i][static_cast<size_t>(feature)], i});
                std::sort(sorted.begin(), sorted.end());
                double gl = 0.0, hl = 0.0;
                for (long i = 0; i < n - 1; ++i) {
                    gl += grad[sorted[static_cast<size_t>(i)].second];
                    hl += hess[sorted[static_cast<size_t>(i)].second];
                    if (sorted[static_cast<size_t>(i)].first ==
                        sorted[static_cast<size_t>(i + 1)].first) {
                        continue;
                    }
                    const long nl = i + 1;
                    const long nr = n - nl;
                    if (nl < min_leaf || nr < min_leaf) continue;
                    const double gain = gain_term(gl, hl) + gain_term(sum_g - gl, sum_h - hl) -
                                        gain_term(sum_g, sum_h);
                    if (gain > best_gain + 1e-12) {
                        best_gain = gain;
                        best_feature = feature;
                        best_threshold = (sorted[static_cast<size_t>(i)].first +
                                          sorted[static_cast<size_t>(i + 1)].first) / 2.0;
                    }
                }
            }
        }

        if (best_feature < 0) {
            values_[static_cast<size_t>(node_id)] = sum_g / (sum_h + 1e-6);
            return node_id;
        }
        std::vector<size_t> left_idx, right_idx;
        for (size_t i : indices) {
            if (x[i][static_cast<size_t>(best_feature)] <= best_threshold) {
                left_idx.push_back(i);
            } else {
                right_idx.push_back(i);
            }
        }
        nodes_[static_cast<size_t>(node_id)].feature = best_feature;
        nodes_[static_cast<size_t>(node_id)].threshold = best_threshold;
        const int left = build(x, grad, hess, left_idx, depth + 1, max_depth, min_leaf);
        const int right = build(x, grad, hess, right_idx, depth + 1, max_depth, min_leaf);
        nodes_[static_cast<size_t>(node_id)].left = left;
        nodes_[static_cast<size_t>(node_id)].right = right;
        return node_id;
    }

    std::vector<TreeNode> nodes_;
    std::vector<double> values_;
};

class GradientBoostingClassifier : public Classifier {
public:
    explicit GradientBoostingClassifier(const ClassifierSpec& spec)
        : n_rounds_(static_cast<int>(spec.param("n_rounds", 150))),
          max_depth_(static_cast<int>(spec.param("max_depth", 2))),
          min_leaf_(static_cast<int>(spec.param("min_leaf", 2))),
          learning_rate_(spec.param("learning_rate", 0.1)) {}

    void fit(const Matrix& x, const std::vector<int>& y) override {
        check_inputs(x, y);
        const size_t n = x.size();
        double pos = 0.0;
        for (int v : y) pos += v;
        const double p0 = std::clamp(pos / static_cast<double>(n), 1e-6, 1.0 - 1e-6);
        f0_ = std::log(p0 / (1.0 - p0));

        std::vector<double> f(n, f0_);
        std::vector<double> grad(n), hess(n);
        trees_.clear();
        for (int round = 0; round < n_rounds_; ++round) {
            for (size_t i = 0; i < n; ++i) {
                const double p = sigmoid(f[i]);
                grad[i] = y[i] - p;
                hess[i] = std::max(p * (1.0 - p), 1e-9);
            }
            RegressionTree tree;
            tree.fit(x, grad, hess, max_depth_, min_leaf_);
            for (size_t i = 0; i < n; ++i) f[i] += learning_rate_ * tree.predict(x[i]);
            trees_.push_back(std::move(tree));
        }
    }

    std::vector<int> predict(const Matrix& x) const override {
        std::vector<int> out;
        out.reserve(x.size());
        for (const auto& row : x) {
            double f = f0_;
            for (const auto& tree : trees_) f += learning_rate_ * tree.predict(row);
            out.push_back(f >= 0.0 ? 1 : 0);
        }
        return out;
    }

private:
    int n_rounds_;
    int max_depth_;
    int min_leaf_;
    double learning_rate_;
    double f0_ = 0.0;
    std::vector<RegressionTree> trees_;
};

// ---------------------------------------------------------------------------
// One-hidden-layer perceptron, ReLU units, sigmoid output, full-batch descent.

class MlpClassifier : public Classifier {
public:
    explicit MlpClassifier(const ClassifierSpec& spec)
        : hidden_(static_cast<int>(spec.param("hidden", 16))),
          lr_(spec.param("lr", 0.05)),
          epochs_(static_cast<int>(spec.param("epochs", 600))),
          l2_(spec.param("l2", 1e-4)),
          seed_(spec.seed) {}

    void fit(const Matrix& x, const std::vector<int>& y) override {
        check_inputs(x, y);
        const size_t n = x.size();
        const size_t d = x[0].size();
        const auto h = static_cast<size_t>(hidden_);
        Rng rng(derive_seed(seed_, 47));
        w1_.assign(h, std::vector<double>(d));
        b1_.assign(h, 0.0);
        w2_.assign(h, 0.0);
        b2_ = 0.0;
        for (auto& row : w1_) {
            for (auto& w : row) w = rng.normal(0.0, 1.0 / std::sqrt(static_cast<double>(d)));
        }
        for (auto& w : w2_) w = rng.normal(0.0, 1.0 / std::sqrt(static_cast<double>(h)));

        std::vector<std::vector<double>> a1(n, std::vector<double>(h));
        std::vector<double> out(n);
        for (int epoch = 0; epoch < epochs_; ++epoch) {
            for (size_t i = 0; i < n; ++i) {
                for (size_t j = 0; j < h; ++j) {
                    const double z = dot(w1_[j], x[i]) + b1_[j];
                    a1[i][j] = z > 0.0 ? z : 0.0;
                }
                out[i] = sigmoid(dot(w2_, a1[i]) + b2_);
            }
            std::vector<std::vector<double>> gw1(h, std::vector<double>(d, 0.0));
            std::vector<double> gb1(h, 0.0), gw2(h, 0.0);
            double gb2 = 0.0;
            for (size_t i = 0; i < n; ++i) {
                const double delta = (out[i] - y[i]) / static_cast<double>(n);
                for (size_t j = 0; j < h; ++j) {
                    gw2[j] += delta * a1[i][j];
                    if (a1[i][j] > 0.0) {
                        const double dh = delta * w2_[j];
                        for (size_t f = 0; f < d; ++f) gw1[j][f] += dh * x[i][f];
                        gb1[j] += dh;
                    }
                }
                gb2 += delta;
            }
            for (size_t j = 0; j < h; ++j) {
                w2_[j] -= lr_ * (gw2[j] + l2_ * w2_[j]);
                b1_[j] -= lr_ * gb1[j];
                for (size_t f = 0; f < d; ++f) {
                    w1_[j][f] -= lr_ * (gw1[j][f] + l2_ * w1_[j][f]);
                }
            }
            b2_ -= lr_ * gb2;
        }
    }

    std::vector<int> predict(const Matrix& x) const override {
        std::vector<int> out;
        out.reserve(x.size());
        const size_t h = w2_.size();
        std::vector<double> a1(h);
        for (const auto& row : x) {
            for (size_t j = 0; j < h; ++j) {
                const double z = dot(w1_[j], row) + b1_[j];
                a1[j] = z > 0.0 ? z : 0.0;
            }
            out.push_back(sigmoid(dot(w2_, a1) + b2_) >= 0.5 ? 1 : 0);
        }
        return out;
    }

private:
    int hidden_;
    double lr_;
    int epochs_;
    double l2_;
    uint64_t seed_;
    std::vector<std::vector<double>> w1_;
    std::vector<double> b1_;
    std::vector<double> w2_;
    double b2_ = 0.0;
};

}  // namespace

ClassifierKind classifier_kind_from_name(const std::string& name) {
    if (name == "logistic_regression") return ClassifierKind::LogisticRegression;
    if (name == "svm_linear") return ClassifierKind::SvmLinear;
    if (name == "svm_rbf") return ClassifierKind::SvmRbf;
    if (name == "random_forest") return ClassifierKind::RandomForest;
    if (name == "gradient_boosting") return ClassifierKind::GradientBoosting;
    if (name == "mlp") return ClassifierKind::Mlp;
    throw GaitError("unknown classifier: " + name);
}

const char* classifier_kind_name(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::LogisticRegression: return "logistic_regression";
        case ClassifierKind::SvmLinear: return "svm_linear";
        case ClassifierKind::SvmRbf: return "svm_rbf";
        case ClassifierKind::RandomForest: return "random_forest";
        case ClassifierKind::GradientBoosting: return "gradient_boosting";
        case ClassifierKind::Mlp: return "mlp";
    }
    return "unknown";
}

const std::vector<ClassifierKind>& all_classifier_kinds() {
    static const std::vector<ClassifierKind> kinds = {
        ClassifierKind::LogisticRegression, ClassifierKind::SvmLinear, ClassifierKind::SvmRbf,
        ClassifierKind::RandomForest,       ClassifierKind::GradientBoosting,
        ClassifierKind::Mlp,
    };
    return kinds;
}

std::unique_ptr<Classifier> make_classifier(const ClassifierSpec& spec) {
    switch (spec.kind) {
        case ClassifierKind::LogisticRegression:
            return std::make_unique<LogisticRegressionClassifier>(spec);
        case ClassifierKind::SvmLinear: return std::make_unique<SvmClassifier>(spec, false);
        case ClassifierKind::SvmRbf: return std::make_unique<SvmClassifier>(spec, true);
        case ClassifierKind::RandomForest: return std::make_unique<RandomForestClassifier>(spec);
        case ClassifierKind::GradientBoosting:
            return std::make_unique<GradientBoostingClassifier>(spec);
        case ClassifierKind::Mlp: return std::make_unique<MlpClassifier>(spec);
    }
    throw GaitError("unknown classifier kind");
}

}  // namespace gait
