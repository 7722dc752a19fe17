#include "grulstm/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "grulstm/error.hpp"
#include "grulstm/numerics.hpp"
#include "grulstm/rng.hpp"
#include "grulstm/textio.hpp"

namespace grulstm {

std::vector<LabeledRow> to_rows(const Dataset& d) {
    std::vector<LabeledRow> rows;
    rows.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        LabeledRow r;
        r.features.resize(kNumFeatures);
        for (int j = 0; j < kNumFeatures; ++j) r.features[j] = d.features(i, j);
        r.label = d.labels[i];
        rows.push_back(std::move(r));
    }
    return rows;
}

Criterion criterion_from_string(const std::string& s) {
    if (s == "gini") return Criterion::Gini;
    if (s == "entropy") return Criterion::Entropy;
    if (s == "misclassification") return Criterion::Misclassification;
    throw Error(errc::kValidation,
                "unknown criterion '" + s + "' (expected gini|entropy|misclassification)");
}

std::string to_string(Criterion c) {
    switch (c) {
        case Criterion::Gini: return "gini";
        case Criterion::Entropy: return "entropy";
        case Criterion::Misclassification: return "misclassification";
    }
    return "?";
}

double impurity(const std::vector<long>& counts, Criterion criterion) {
    long total = 0;
    for (long c : counts) {
        if (c < 0) throw Error(errc::kContract, "impurity: negative count");
        total += c;
    }
    if (total == 0) throw Error(errc::kContract, "impurity: all-zero counts");

    const double n = static_cast<double>(total);
    switch (criterion) {
        case Criterion::Gini: {
            double sum_sq = 0.0;
            for (long c : counts) {
                const double p = static_cast<double>(c) / n;
                sum_sq += p * p;
            }
            return 1.0 - sum_sq;
        }
        case Criterion::Entropy: {
            double ent = 0.0;
            for (long c : counts) {
                if (c == 0) continue;
                const double p = static_cast<double>(c) / n;
                ent -= p * std::log2(p);
            }
            return ent;
        }
        case Criterion::Misclassification: {
            long mx = 0;
            for (long c : counts) mx = std::max(mx, c);
            return 1.0 - static_cast<double>(mx) / n;
        }
    }
    return 0.0;
}

namespace {

std::vector<long> class_counts_of(const std::vector<LabeledRow>& rows,
                                  const std::vector<std::size_t>& idx) {
    std::vector<long> counts(kNumClasses, 0);
    for (std::size_t i : idx) counts[rows[i].label] += 1;
    return counts;
}

int majority_class(const std::vector<long>& counts) {
    int best = 0;
    for (int c = 1; c < kNumClasses; ++c) {
        if (counts[c] > counts[best]) best = c;
    }
    return best;
}

}  // namespace

std::optional<SplitChoice> best_split(const std::vector<LabeledRow>& rows, Criterion criterion,
                                      int min_samples_leaf, const std::vector<int>* feature_subset) {
    const std::size_t n = rows.size();
    if (n < 2) return std::nullopt;
    const std::size_t n_features = rows[0].features.size();

    std::vector<long> total_counts(kNumClasses, 0);
    for (const auto& r : rows) total_counts[r.label] += 1;
    const double parent = impurity(total_counts, criterion);

    std::vector<int> all_features;
    if (feature_subset == nullptr) {
        all_features.resize(n_features);
        std::iota(all_features.begin(), all_features.end(), 0);
        feature_subset = &all_features;
    }

    std::optional<SplitChoice> best;
    std::vector<std::size_t> order(n);

    for (int f : *feature_subset) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return rows[a].features[f] < rows[b].features[f];
        });

        std::vector<long> left(kNumClasses, 0);
        std::vector<long> right = total_counts;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const auto& row = rows[order[k]];
            left[row.label] += 1;
            right[row.label] -= 1;
            const double a = row.features[f];
            const double b = rows[order[k + 1]].features[f];
            if (a == b) continue;
            const std::size_t nl = k + 1, nr = n - nl;
            if (nl < static_cast<std::size_t>(min_samples_leaf) ||
                nr < static_cast<std::size_t>(min_samples_leaf)) {
                continue;
            }
            const double child = (static_cast<double>(nl) * impurity(left, criterion) +
                                  static_cast<double>(nr) * impurity(right, criterion)) /
                                 static_cast<double>(n);
            // Strict improvement keeps ties resolved at the first
            // (lowest feature, lowest threshold) candidate seen.
            if (!best || child < best->child_impurity) {
                best = SplitChoice{f, (a + b) / 2.0, child};
            }
        }
    }
    if (best && best->child_impurity < parent) return best;
    return std::nullopt;
}

namespace {

std::unique_ptr<TreeNode> make_class_leaf(const std::vector<long>& counts) {
    auto leaf = std::make_unique<TreeNode>();
    leaf->class_counts = counts;
    leaf->predicted_class = majority_class(counts);
    return leaf;
}

std::unique_ptr<TreeNode> fit_tree_impl(const std::vector<LabeledRow>& rows,
                                        std::vector<std::size_t>& idx, const TreeConfig& cfg,
                                        int depth, SeededRng* feature_rng, int feature_subset_size) {
    auto counts = class_counts_of(rows, idx);
    const bool pure = impurity(counts, cfg.criterion) == 0.0;
    if (pure || idx.size() < static_cast<std::size_t>(cfg.min_samples_split) ||
        (cfg.max_depth >= 0 && depth >= cfg.max_depth)) {
        return make_class_leaf(counts);
    }

    std::vector<LabeledRow> subset;
    subset.reserve(idx.size());
    for (std::size_t i : idx) subset.push_back(rows[i]);

    std::optional<SplitChoice> choice;
    std::vector<int> features(rows[0].features.size());
    std::iota(features.begin(), features.end(), 0);
    if (feature_rng != nullptr) {
        feature_rng->shuffle(features);
        features.resize(std::min<std::size_t>(features.size(),
                                              static_cast<std::size_t>(feature_subset_size)));
        std::sort(features.begin(), features.end());
        choice = best_split(subset, cfg.criterion, cfg.min_samples_leaf, &features);
    } else {
        choice = best_split(subset, cfg.criterion, cfg.min_samples_leaf);
    }
    if (!choice) {
        // Mixed node where no candidate strictly reduces impurity (the XOR
        // situation). Split anyway on the first available midpoint so rows
        // with distinct features still get separated further down.
        for (int f : features) {
            std::vector<double> vals;
            for (std::size_t i : idx) vals.push_back(rows[i].features[static_cast<std::size_t>(f)]);
            std::sort(vals.begin(), vals.end());
            vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
            if (vals.size() >= 2) {
                SplitChoice fallback;
                fallback.feature = f;
                fallback.threshold = (vals[0] + vals[1]) / 2.0;
                fallback.child_impurity = impurity(counts, cfg.criterion);
                choice = fallback;
                break;
            }
        }
    }
    if (!choice) return make_class_leaf(counts);

    std::vector<std::size_t> left_idx, right_idx;
    for (std::size_t i : idx) {
        (rows[i].features[choice->feature] < choice->threshold ? left_idx : right_idx).push_back(i);
    }
    const auto msl = static_cast<std::size_t>(cfg.min_samples_leaf);
    if (left_idx.size() < msl || right_idx.size() < msl) return make_class_leaf(counts);

    auto node = std::make_unique<TreeNode>();
    node->is_leaf = false;
    node->feature = choice->feature;
    node->threshold = choice->threshold;
    node->class_counts = counts;
    node->predicted_class = majority_class(counts);
    node->left = fit_tree_impl(rows, left_idx, cfg, depth + 1, feature_rng, feature_subset_size);
    node->right = fit_tree_impl(rows, right_idx, cfg, depth + 1, feature_rng, feature_subset_size);
    return node;
}

}  // namespace

std::unique_ptr<TreeNode> fit_tree(const std::vector<LabeledRow>& rows, const TreeConfig& cfg) {
    if (rows.empty()) throw Error(errc::kContract, "fit_tree: empty input");
    std::vector<std::size_t> idx(rows.size());
    std::iota(idx.begin(), idx.end(), 0);
    return fit_tree_impl(rows, idx, cfg, 0, nullptr, 0);
}

int predict_tree(const TreeNode& node, const std::vector<double>& features) {
    const TreeNode* cur = &node;
    while (!cur->is_leaf) {
        cur = features[cur->feature] < cur->threshold ? cur->left.get() : cur->right.get();
    }
    return cur->predicted_class;
}

Forest fit_forest(const std::vector<LabeledRow>& rows, const ForestConfig& cfg, std::uint64_t seed) {
    if (rows.empty()) throw Error(errc::kContract, "fit_forest: empty input");
    if (cfg.n_trees < 1) throw Error(errc::kValidation, "fit_forest: n_trees must be >= 1");

    Forest forest;
    forest.seed = seed;
    forest.feature_subset_size = cfg.feature_subset_size;

    TreeConfig tree_cfg{cfg.criterion, cfg.max_depth, cfg.min_samples_split, cfg.min_samples_leaf};
    const std::size_t n = rows.size();
    for (int t = 0; t < cfg.n_trees; ++t) {
        // Seed derived from the tree index so results are independent of
        // any fitting order.
        SeededRng rng(derive_seed(seed, "forest_tree_" + std::to_string(t)));
        std::vector<std::size_t> idx(n);
        if (cfg.bootstrap) {
            for (auto& i : idx) i = rng.below(n);
        } else {
            std::iota(idx.begin(), idx.end(), 0);
        }
        forest.trees.push_back(
            fit_tree_impl(rows, idx, tree_cfg, 0, &rng, cfg.feature_subset_size));
    }
    return forest;
}

int predict_forest(const Forest& f, const std::vector<double>& features) {
    std::array<long, kNumClasses> votes{};
    for (const auto& t : f.trees) votes[predict_tree(*t, features)] += 1;
    int best = 0;
    for (int c = 1; c < kNumClasses; ++c) {
        if (votes[c] > votes[best]) best = c;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Regression trees for the boosters.

namespace {

struct RegTarget {
    double g = 0.0;  // residual (first-order) or gradient (second-order)
    double h = 1.0;  // hessian; 1 for plain squared error
};

struct RegSplit {
    int feature = -1;
    double threshold = 0.0;
    double score = 0.0;
};

// Squared-error split: maximize sumL^2/nL + sumR^2/nR over midpoints.
std::optional<RegSplit> best_reg_split_sse(const std::vector<LabeledRow>& rows,
                                           const std::vector<RegTarget>& targets,
                                           const std::vector<std::size_t>& idx,
                                           const std::vector<int>& features, int min_samples_leaf) {
    const std::size_t n = idx.size();
    if (n < 2) return std::nullopt;
    double total = 0.0;
    for (std::size_t i : idx) total += targets[i].g;

    std::optional<RegSplit> best;
    std::vector<std::size_t> order(idx);
    for (int f : features) {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return rows[a].features[f] < rows[b].features[f];
        });
        double left_sum = 0.0;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            left_sum += targets[order[k]].g;
            const double a = rows[order[k]].features[f];
            const double b = rows[order[k + 1]].features[f];
            if (a == b) continue;
            const std::size_t nl = k + 1, nr = n - nl;
            if (nl < static_cast<std::size_t>(min_samples_leaf) ||
                nr < static_cast<std::size_t>(min_samples_leaf)) {
                continue;
            }
            const double right_sum = total - left_sum;
            const double score = left_sum * left_sum / static_cast<double>(nl) +
                                 right_sum * right_sum / static_cast<double>(nr);
            if (!best || score > best->score) best = RegSplit{f, (a + b) / 2.0, score};
        }
    }
    // Worth splitting only if the score beats the single-node baseline.
    if (best && best->score > total * total / static_cast<double>(n)) return best;
    return std::nullopt;
}

std::unique_ptr<TreeNode> make_value_leaf(double value) {
    auto leaf = std::make_unique<TreeNode>();
    leaf->value = value;
    return leaf;
}

std::unique_ptr<TreeNode> fit_reg_tree_sse(const std::vector<LabeledRow>& rows,
                                           const std::vector<RegTarget>& targets,
                                           std::vector<std::size_t>& idx,
                                           const GradientBoostConfig& cfg, int depth) {
    double sum = 0.0;
    for (std::size_t i : idx) sum += targets[i].g;
    const double mean = sum / static_cast<double>(idx.size());

    if ((cfg.max_depth >= 0 && depth >= cfg.max_depth) ||
        idx.size() < static_cast<std::size_t>(cfg.min_samples_split)) {
        return make_value_leaf(mean);
    }
    std::vector<int> features(rows[0].features.size());
    std::iota(features.begin(), features.end(), 0);
    auto split = best_reg_split_sse(rows, targets, idx, features, cfg.min_samples_leaf);
    if (!split) return make_value_leaf(mean);

    std::vector<std::size_t> left_idx, right_idx;
    for (std::size_t i : idx) {
        (rows[i].features[split->feature] < split->threshold ? left_idx : right_idx).push_back(i);
    }
    if (left_idx.empty() || right_idx.empty()) return make_value_leaf(mean);

    auto node = std::make_unique<TreeNode>();
    node->is_leaf = false;
    node->feature = split->feature;
    node->threshold = split->threshold;
    node->left = fit_reg_tree_sse(rows, targets, left_idx, cfg, depth + 1);
    node->right = fit_reg_tree_sse(rows, targets, right_idx, cfg, depth + 1);
    return node;
}

double predict_reg(const TreeNode& node, const std::vector<double>& features) {
    const TreeNode* cur = &node;
    while (!cur->is_leaf) {
        cur = features[cur->feature] < cur->threshold ? cur->left.get() : cur->right.get();
    }
    return cur->value;
}

double clamp_prob(double p) { return std::clamp(p, 1e-12, 1.0 - 1e-12); }

}  // namespace

Booster fit_gradient_boost(const std::vector<LabeledRow>& rows, const GradientBoostConfig& cfg) {
    if (rows.empty()) throw Error(errc::kContract, "fit_gradient_boost: empty input");
    const std::size_t n = rows.size();

    Booster b;
    b.kind = "gb";
    b.learning_rate = cfg.learning_rate;

    for (int c = 0; c < kNumClasses; ++c) {
        double positives = 0.0;
        for (const auto& r : rows) positives += r.label == c ? 1.0 : 0.0;
        const double p = clamp_prob(positives / static_cast<double>(n));
        b.prior[c] = std::log(p / (1.0 - p));
    }

    std::array<std::vector<double>, kNumClasses> score;
    for (int c = 0; c < kNumClasses; ++c) score[c].assign(n, b.prior[c]);

    std::vector<RegTarget> targets(n);
    for (int round = 0; round < cfg.n_rounds; ++round) {
        for (int c = 0; c < kNumClasses; ++c) {
            for (std::size_t i = 0; i < n; ++i) {
                const double y = rows[i].label == c ? 1.0 : 0.0;
                targets[i].g = y - sigmoid_scalar(score[c][i]);  // negative gradient
            }
            std::vector<std::size_t> idx(n);
            std::iota(idx.begin(), idx.end(), 0);
            auto tree = fit_reg_tree_sse(rows, targets, idx, cfg, 0);
            for (std::size_t i = 0; i < n; ++i) {
                score[c][i] += cfg.learning_rate * predict_reg(*tree, rows[i].features);
            }
            b.stages[c].push_back(std::move(tree));
        }
    }
    return b;
}

double xgb_split_gain(double g_left, double h_left, double g_right, double h_right, double lambda,
                      double gamma) {
    const double g_total = g_left + g_right;
    const double h_total = h_left + h_right;
    return 0.5 * (g_left * g_left / (h_left + lambda) + g_right * g_right / (h_right + lambda) -
                  g_total * g_total / (h_total + lambda)) -
           gamma;
}

double xgb_leaf_weight(double g_sum, double h_sum, double lambda) {
    return -g_sum / (h_sum + lambda);
}

namespace {

std::unique_ptr<TreeNode> fit_xgb_tree(const std::vector<LabeledRow>& rows,
                                       const std::vector<RegTarget>& targets,
                                       std::vector<std::size_t>& idx, const XgbConfig& cfg,
                                       const std::vector<int>& features, int depth) {
    double g_sum = 0.0, h_sum = 0.0;
    for (std::size_t i : idx) {
        g_sum += targets[i].g;
        h_sum += targets[i].h;
    }
    if ((cfg.max_depth >= 0 && depth >= cfg.max_depth) || idx.size() < 2) {
        return make_value_leaf(xgb_leaf_weight(g_sum, h_sum, cfg.lambda));
    }

    struct Best {
        int feature;
        double threshold;
        double gain;
    };
    std::optional<Best> best;
    std::vector<std::size_t> order(idx);
    for (int f : features) {
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return rows[a].features[f] < rows[b].features[f];
        });
        double gl = 0.0, hl = 0.0;
        for (std::size_t k = 0; k + 1 < order.size(); ++k) {
            gl += targets[order[k]].g;
            hl += targets[order[k]].h;
            const double a = rows[order[k]].features[f];
            const double b = rows[order[k + 1]].features[f];
            if (a == b) continue;
            const double gain = xgb_split_gain(gl, hl, g_sum - gl, h_sum - hl, cfg.lambda, cfg.gamma);
            if (!best || gain > best->gain) best = Best{f, (a + b) / 2.0, gain};
        }
    }
    // Negative-gain pruning.
    if (!best || best->gain <= 0.0) {
        return make_value_leaf(xgb_leaf_weight(g_sum, h_sum, cfg.lambda));
    }

    std::vector<std::size_t> left_idx, right_idx;
    for (std::size_t i : idx) {
        (rows[i].features[best->feature] < best->threshold ? left_idx : right_idx).push_back(i);
    }
    if (left_idx.empty() || right_idx.empty()) {
        return make_value_leaf(xgb_leaf_weight(g_sum, h_sum, cfg.lambda));
    }

    auto node = std::make_unique<TreeNode>();
    node->is_leaf = false;
    node->feature = best->feature;
    node->threshold = best->threshold;
    node->left = fit_xgb_tree(rows, targets, left_idx, cfg, features, depth + 1);
    node->right = fit_xgb_tree(rows, targets, right_idx, cfg, features, depth + 1);
    return node;
}

}  // namespace

Booster fit_xgb(const std::vector<LabeledRow>& rows, const XgbConfig& cfg, std::uint64_t seed) {
    if (rows.empty()) throw Error(errc::kContract, "fit_xgb: empty input");
    const std::size_t n = rows.size();
    const std::size_t n_features = rows[0].features.size();

    Booster b;
    b.kind = "xgb";
    b.learning_rate = cfg.learning_rate;
    for (int c = 0; c < kNumClasses; ++c) {
        double positives = 0.0;
        for (const auto& r : rows) positives += r.label == c ? 1.0 : 0.0;
        const double p = clamp_prob(positives / static_cast<double>(n));
        b.prior[c] = std::log(p / (1.0 - p));
    }

    std::array<std::vector<double>, kNumClasses> score;
    for (int c = 0; c < kNumClasses; ++c) score[c].assign(n, b.prior[c]);

    std::vector<RegTarget> targets(n);
    for (int round = 0; round < cfg.n_rounds; ++round) {
        for (int c = 0; c < kNumClasses; ++c) {
            SeededRng rng(derive_seed(seed, "xgb_r" + std::to_string(round) + "_c" + std::to_string(c)));
            for (std::size_t i = 0; i < n; ++i) {
                const double y = rows[i].label == c ? 1.0 : 0.0;
                const double p = sigmoid_scalar(score[c][i]);
                targets[i].g = p - y;
                targets[i].h = p * (1.0 - p);
            }

            std::vector<std::size_t> idx(n);
            std::iota(idx.begin(), idx.end(), 0);
            if (cfg.subsample < 1.0) {
                rng.shuffle(idx);
                const auto keep = std::max<std::size_t>(
                    1, static_cast<std::size_t>(cfg.subsample * static_cast<double>(n)));
                idx.resize(keep);
                std::sort(idx.begin(), idx.end());
            }
            std::vector<int> features(n_features);
            std::iota(features.begin(), features.end(), 0);
            if (cfg.colsample < 1.0) {
                rng.shuffle(features);
                const auto keep = std::max<std::size_t>(
                    1, static_cast<std::size_t>(cfg.colsample * static_cast<double>(n_features)));
                features.resize(keep);
                std::sort(features.begin(), features.end());
            }

            auto tree = fit_xgb_tree(rows, targets, idx, cfg, features, 0);
            for (std::size_t i = 0; i < n; ++i) {
                score[c][i] += cfg.learning_rate * predict_reg(*tree, rows[i].features);
            }
            b.stages[c].push_back(std::move(tree));
        }
    }
    return b;
}

std::array<double, kNumClasses> booster_scores(const Booster& b, const std::vector<double>& features) {
    std::array<double, kNumClasses> out{};
    for (int c = 0; c < kNumClasses; ++c) {
        double f = b.prior[c];
        for (const auto& t : b.stages[c]) f += b.learning_rate * predict_reg(*t, features);
        out[c] = f;
    }
    return out;
}

int predict_booster(const Booster& b, const std::vector<double>& features) {
    auto scores = booster_scores(b, features);
    int best = 0;
    for (int c = 1; c < kNumClasses; ++c) {
        if (scores[c] > scores[best]) best = c;
    }
    return best;
}

double booster_training_loss(const Booster& b, const std::vector<LabeledRow>& rows) {
    double total = 0.0;
    for (const auto& r : rows) {
        auto scores = booster_scores(b, r.features);
        for (int c = 0; c < kNumClasses; ++c) {
            const double y = r.label == c ? 1.0 : 0.0;
            const double p = clamp_prob(sigmoid_scalar(scores[c]));
            total += -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
        }
    }
    return total / static_cast<double>(rows.size());
}

double rbf_kernel(const std::vector<double>& x, const std::vector<double>& y, double sigma) {
    if (sigma <= 0.0) throw Error(errc::kValidation, "rbf_kernel: sigma must be > 0");
    if (x.size() != y.size()) {
        throw Error(errc::kDim, "rbf_kernel: lengths " + std::to_string(x.size()) + " vs " +
                                    std::to_string(y.size()));
    }
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        d2 += d * d;
    }
    return std::exp(-d2 / (2.0 * sigma * sigma));
}

int svm_decision(const SvmParams& p, const std::vector<double>& x) {
    if (p.support_vectors.empty()) {
        throw Error(errc::kContract, "svm_decision: needs at least one support vector");
    }
    double f = p.bias;
    for (std::size_t i = 0; i < p.support_vectors.size(); ++i) {
        f += p.coefficients[i] * rbf_kernel(p.support_vectors[i], x, p.sigma);
    }
    return f < 0.0 ? -1 : +1;
}

// ---------------------------------------------------------------------------
// Persistence.

namespace {

void write_node(std::ostream& out, const TreeNode& t) {
    if (t.is_leaf) {
        out << "leaf " << t.predicted_class << ' ' << format_double(t.value);
        out << ' ' << t.class_counts.size();
        for (long c : t.class_counts) out << ' ' << c;
        out << '\n';
        return;
    }
    out << "internal " << t.feature << ' ' << format_double(t.threshold) << '\n';
    write_node(out, *t.left);
    write_node(out, *t.right);
}

std::unique_ptr<TreeNode> read_node(std::istream& in, const std::string& path) {
    std::string tag;
    if (!(in >> tag)) throw Error(errc::kFormat, path + ": truncated tree");
    auto node = std::make_unique<TreeNode>();
    if (tag == "leaf") {
        std::size_t k;
        if (!(in >> node->predicted_class >> node->value >> k)) {
            throw Error(errc::kFormat, path + ": malformed leaf");
        }
        node->class_counts.resize(k);
        for (auto& c : node->class_counts) {
            if (!(in >> c)) throw Error(errc::kFormat, path + ": malformed leaf counts");
        }
        return node;
    }
    if (tag != "internal") throw Error(errc::kFormat, path + ": unexpected node tag '" + tag + "'");
    node->is_leaf = false;
    if (!(in >> node->feature >> node->threshold)) {
        throw Error(errc::kFormat, path + ": malformed internal node");
    }
    node->left = read_node(in, path);
    node->right = read_node(in, path);
    return node;
}

void check_header(std::istream& in, const std::string& path, const std::string& kind) {
    std::string line;
    if (!std::getline(in, line) || line != "grulstm-baseline") {
        throw Error(errc::kFormat, path + ": not a baseline file (bad magic)");
    }
    std::string key;
    long long version;
    in >> key >> version;
    if (key != "format_version" || version != 1) {
        throw Error(errc::kFormat, path + ": unsupported format_version");
    }
    std::string kkey, got;
    in >> kkey >> got;
    if (kkey != "kind" || got != kind) {
        throw Error(errc::kFormat, path + ": expected kind '" + kind + "', got '" + got + "'");
    }
}

void write_header(std::ostream& out, const std::string& kind) {
    out << "grulstm-baseline\nformat_version 1\nkind " << kind << '\n';
}

}  // namespace

void save_tree(const TreeNode& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(errc::kIo, "cannot write " + path);
    write_header(out, "tree");
    write_node(out, t);
    if (!out) throw Error(errc::kIo, "write failure on " + path);
}

std::unique_ptr<TreeNode> load_tree(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::kIo, "cannot open " + path);
    check_header(in, path, "tree");
    return read_node(in, path);
}

void save_forest(const Forest& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(errc::kIo, "cannot write " + path);
    write_header(out, "forest");
    out << "seed " << f.seed << '\n';
    out << "feature_subset_size " << f.feature_subset_size << '\n';
    out << "n_trees " << f.trees.size() << '\n';
    for (const auto& t : f.trees) write_node(out, *t);
    if (!out) throw Error(errc::kIo, "write failure on " + path);
}

Forest load_forest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::kIo, "cannot open " + path);
    check_header(in, path, "forest");
    Forest f;
    std::string key;
    std::size_t n_trees;
    if (!(in >> key >> f.seed) || key != "seed") throw Error(errc::kFormat, path + ": missing seed");
    if (!(in >> key >> f.feature_subset_size) || key != "feature_subset_size") {
        throw Error(errc::kFormat, path + ": missing feature_subset_size");
    }
    if (!(in >> key >> n_trees) || key != "n_trees") {
        throw Error(errc::kFormat, path + ": missing n_trees");
    }
    for (std::size_t i = 0; i < n_trees; ++i) f.trees.push_back(read_node(in, path));
    return f;
}

void save_booster(const Booster& b, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(errc::kIo, "cannot write " + path);
    write_header(out, b.kind);
    out << "learning_rate " << format_double(b.learning_rate) << '\n';
    out << "prior";
    for (double p : b.prior) out << ' ' << format_double(p);
    out << '\n';
    for (int c = 0; c < kNumClasses; ++c) {
        out << "class " << c << ' ' << b.stages[c].size() << '\n';
        for (const auto& t : b.stages[c]) write_node(out, *t);
    }
    if (!out) throw Error(errc::kIo, "write failure on " + path);
}

Booster load_booster(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::kIo, "cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "grulstm-baseline") {
        throw Error(errc::kFormat, path + ": not a baseline file (bad magic)");
    }
    std::string key;
    long long version;
    in >> key >> version;
    if (key != "format_version" || version != 1) {
        throw Error(errc::kFormat, path + ": unsupported format_version");
    }
    Booster b;
    in >> key >> b.kind;
    if (key != "kind" || (b.kind != "gb" && b.kind != "xgb")) {
        throw Error(errc::kFormat, path + ": unexpected booster kind");
    }
    if (!(in >> key >> b.learning_rate) || key != "learning_rate") {
        throw Error(errc::kFormat, path + ": missing learning_rate");
    }
    in >> key;
    if (key != "prior") throw Error(errc::kFormat, path + ": missing prior");
    for (auto& p : b.prior) {
        if (!(in >> p)) throw Error(errc::kFormat, path + ": malformed prior");
    }
    for (int c = 0; c < kNumClasses; ++c) {
        int cls;
        std::size_t n_stages;
        if (!(in >> key >> cls >> n_stages) || key != "class" || cls != c) {
            throw Error(errc::kFormat, path + ": malformed class block");
        }
        for (std::size_t s = 0; s < n_stages; ++s) b.stages[c].push_back(read_node(in, path));
    }
    return b;
}

}  // namespace grulstm
