#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "grulstm/dataio.hpp"

namespace grulstm {

struct LabeledRow {
    std::vector<double> features;
    int label = 0;
};

std::vector<LabeledRow> to_rows(const Dataset& d);

enum class Criterion { Gini, Entropy, Misclassification };

Criterion criterion_from_string(const std::string& s);
std::string to_string(Criterion c);

// Classification or regression tree node. Internal nodes route on
// feature < threshold; classification leaves carry class counts and the
// majority class, regression leaves carry a value.
struct TreeNode {
    bool is_leaf = true;
    int feature = -1;
    double threshold = 0.0;
    std::unique_ptr<TreeNode> left, right;
    std::vector<long> class_counts;  // classification leaves
    int predicted_class = 0;
    double value = 0.0;  // regression leaves / boosted leaf weight
};

// gini = 1 - sum p^2; entropy = -sum p log2 p; misclassification = 1 - max p.
double impurity(const std::vector<long>& counts, Criterion criterion);

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double child_impurity = 0.0;  // count-weighted mean of the two children
};

// Exhaustive search over all features and midpoints between consecutive
// distinct sorted values. Ties break to (lower feature, lower threshold);
// nullopt when no split reduces impurity.
std::optional<SplitChoice> best_split(const std::vector<LabeledRow>& rows, Criterion criterion,
                                      int min_samples_leaf = 1,
                                      const std::vector<int>* feature_subset = nullptr);

struct TreeConfig {
    Criterion criterion = Criterion::Gini;
    int max_depth = -1;  // <0: unbounded
    int min_samples_split = 2;
    int min_samples_leaf = 1;
};

// Recursive greedy growth. When a mixed node has no impurity-reducing
// candidate (XOR-style data) the first available midpoint is taken anyway,
// so unbounded trees always separate distinct feature rows.
std::unique_ptr<TreeNode> fit_tree(const std::vector<LabeledRow>& rows, const TreeConfig& cfg);
int predict_tree(const TreeNode& node, const std::vector<double>& features);

struct Forest {
    std::vector<std::unique_ptr<TreeNode>> trees;
    std::uint64_t seed = 0;
    int feature_subset_size = 3;  // floor(sqrt(7))
};

struct ForestConfig {
    int n_trees = 100;
    Criterion criterion = Criterion::Gini;
    int max_depth = -1;
    int min_samples_split = 2;
    int min_samples_leaf = 1;
    int feature_subset_size = 3;
    bool bootstrap = true;
};

// Seeded bootstrap per tree (seed derived from the tree index, so tree
// order never depends on scheduling); prediction by plurality vote with
// ties to the lowest class index.
Forest fit_forest(const std::vector<LabeledRow>& rows, const ForestConfig& cfg, std::uint64_t seed);
int predict_forest(const Forest& f, const std::vector<double>& features);

// One-vs-rest boosted ensemble: 8 parallel stage lists over a shared
// log-odds prior. Used by both the first-order and the second-order fit.
struct Booster {
    std::string kind;  // "gb" or "xgb"
    double learning_rate = 0.1;
    std::array<double, kNumClasses> prior{};  // per-class initial log-odds
    std::array<std::vector<std::unique_ptr<TreeNode>>, kNumClasses> stages;
};

struct GradientBoostConfig {
    int n_rounds = 3000;
    double learning_rate = 0.05;
    int max_depth = 4;
    int min_samples_split = 2;
    int min_samples_leaf = 1;
};

// First-order boosting: each round fits a squared-error regression tree
// to the negative gradient of the per-class sigmoid cross-entropy.
Booster fit_gradient_boost(const std::vector<LabeledRow>& rows, const GradientBoostConfig& cfg);

// Second-order split gain with complexity penalty gamma:
// 0.5 * [GL^2/(HL+l) + GR^2/(HR+l) - (GL+GR)^2/(HL+HR+l)] - gamma.
double xgb_split_gain(double g_left, double h_left, double g_right, double h_right, double lambda,
                      double gamma);

// Optimal leaf weight of the second-order objective: -G / (H + lambda).
double xgb_leaf_weight(double g_sum, double h_sum, double lambda);

struct XgbConfig {
    int n_rounds = 200;
    double learning_rate = 0.1;
    int max_depth = 5;
    double lambda = 1.0;
    double gamma = 0.0;
    double subsample = 0.9;
    double colsample = 0.9;
};

// Second-order one-vs-rest boosting with gain-maximizing greedy growth,
// negative-gain pruning and seeded row/column subsampling.
Booster fit_xgb(const std::vector<LabeledRow>& rows, const XgbConfig& cfg, std::uint64_t seed);

// Per-class raw ensemble scores (prior + shrunken stage outputs).
std::array<double, kNumClasses> booster_scores(const Booster& b, const std::vector<double>& features);
int predict_booster(const Booster& b, const std::vector<double>& features);

// Mean per-class sigmoid cross-entropy of the ensemble on `rows`,
// summed over the 8 one-vs-rest problems. Used by monotonicity checks.
double booster_training_loss(const Booster& b, const std::vector<LabeledRow>& rows);

struct SvmParams {
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> coefficients;  // opaque per-vector weights
    double bias = 0.0;
    double sigma = 1.0;
};

// K(x, y) = exp(-||x - y||^2 / (2 sigma^2)); sigma must be positive.
double rbf_kernel(const std::vector<double>& x, const std::vector<double>& y, double sigma);

// sign of the kernel expansion; sign(0) := +1.
int svm_decision(const SvmParams& p, const std::vector<double>& x);

// Text persistence in the same family as the neural model format.
void save_tree(const TreeNode& t, const std::string& path);
std::unique_ptr<TreeNode> load_tree(const std::string& path);
void save_forest(const Forest& f, const std::string& path);
Forest load_forest(const std::string& path);
void save_booster(const Booster& b, const std::string& path);
Booster load_booster(const std::string& path);

}  // namespace grulstm
