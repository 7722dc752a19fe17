#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>

#include "doctest.h"
#include "grulstm/baselines.hpp"
#include "grulstm/error.hpp"
#include "grulstm/rng.hpp"
#include "test_support.hpp"

using namespace grulstm;

namespace {

std::vector<LabeledRow> rows2d(std::initializer_list<std::pair<std::vector<double>, int>> items) {
    std::vector<LabeledRow> out;
    for (const auto& [f, l] : items) out.push_back({f, l});
    return out;
}

std::string temp_path(const char* stem) {
    return (std::filesystem::temp_directory_path() / stem).string();
}

}  // namespace

TEST_CASE("impurity worked values") {
    // 50/50 two-class node
    CHECK(impurity({5, 5}, Criterion::Gini) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(impurity({5, 5}, Criterion::Entropy) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(impurity({5, 5}, Criterion::Misclassification) == doctest::Approx(0.5).epsilon(1e-12));

    // 3:1 mix
    CHECK(impurity({3, 1}, Criterion::Gini) == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(impurity({3, 1}, Criterion::Entropy) ==
          doctest::Approx(-(0.75 * std::log2(0.75) + 0.25 * std::log2(0.25))).epsilon(1e-12));
    CHECK(impurity({3, 1}, Criterion::Misclassification) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("impurity is zero exactly for pure nodes") {
    for (Criterion c : {Criterion::Gini, Criterion::Entropy, Criterion::Misclassification}) {
        CHECK(impurity({7, 0, 0}, c) == 0.0);
        CHECK(impurity({0, 0, 12}, c) == 0.0);
        CHECK(impurity({1, 1}, c) > 0.0);
    }
}

TEST_CASE("best_split finds the midpoint between separated groups") {
    auto rows = rows2d({{{1.0}, 0}, {{2.0}, 0}, {{8.0}, 1}, {{9.0}, 1}});
    auto s = best_split(rows, Criterion::Gini);
    REQUIRE(s.has_value());
    CHECK(s->feature == 0);
    CHECK(s->threshold == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(s->child_impurity == 0.0);
}

TEST_CASE("best_split returns nullopt for unsplittable rows") {
    // identical features with conflicting labels
    auto rows = rows2d({{{3.0, 3.0}, 0}, {{3.0, 3.0}, 1}});
    CHECK_FALSE(best_split(rows, Criterion::Gini).has_value());
    // a pure node needs no split either
    auto pure = rows2d({{{1.0}, 2}, {{5.0}, 2}});
    CHECK_FALSE(best_split(pure, Criterion::Gini).has_value());
}

TEST_CASE("best_split matches a brute-force oracle on random rows") {
    SeededRng rng(61);
    std::vector<LabeledRow> rows;
    for (int i = 0; i < 40; ++i) {
        LabeledRow r;
        for (int j = 0; j < 3; ++j) r.features.push_back(rng.uniform(0, 10));
        r.label = static_cast<int>(rng.below(3));
        rows.push_back(r);
    }

    // exhaustive reimplementation with the same tie-break
    const auto counts_of = [](const std::vector<const LabeledRow*>& side) {
        std::vector<long> c(3, 0);
        for (const auto* r : side) c[static_cast<std::size_t>(r->label)] += 1;
        return c;
    };
    int best_f = -1;
    double best_thr = 0.0, best_imp = 1e100;
    for (int f = 0; f < 3; ++f) {
        std::vector<double> vals;
        for (const auto& r : rows) vals.push_back(r.features[static_cast<std::size_t>(f)]);
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
            const double thr = (vals[k] + vals[k + 1]) / 2.0;
            std::vector<const LabeledRow*> left, right;
            for (const auto& r : rows) {
                (r.features[static_cast<std::size_t>(f)] < thr ? left : right).push_back(&r);
            }
            const double imp =
                (impurity(counts_of(left), Criterion::Gini) * static_cast<double>(left.size()) +
                 impurity(counts_of(right), Criterion::Gini) * static_cast<double>(right.size())) /
                static_cast<double>(rows.size());
            if (imp < best_imp - 1e-15) {
                best_imp = imp;
                best_f = f;
                best_thr = thr;
            }
        }
    }

    auto s = best_split(rows, Criterion::Gini);
    REQUIRE(s.has_value());
    CHECK(s->feature == best_f);
    CHECK(s->threshold == doctest::Approx(best_thr).epsilon(1e-12));
    CHECK(s->child_impurity == doctest::Approx(best_imp).epsilon(1e-12));
}

TEST_CASE("fit_tree base cases") {
    TreeConfig cfg;
    auto pure = fit_tree(rows2d({{{1.0}, 4}, {{2.0}, 4}}), cfg);
    CHECK(pure->is_leaf);
    CHECK(pure->predicted_class == 4);

    TreeConfig stump;
    stump.max_depth = 0;
    auto capped = fit_tree(rows2d({{{1.0}, 0}, {{9.0}, 1}, {{9.5}, 1}}), stump);
    CHECK(capped->is_leaf);
    CHECK(capped->predicted_class == 1);  // majority

    CHECK_THROWS_AS(fit_tree({}, cfg), Error);
}

TEST_CASE("fit_tree solves xor with two feature levels") {
    auto rows = rows2d({{{0.0, 0.0}, 0}, {{0.0, 1.0}, 1}, {{1.0, 0.0}, 1}, {{1.0, 1.0}, 0}});
    TreeConfig cfg;
    auto t = fit_tree(rows, cfg);
    CHECK_FALSE(t->is_leaf);
    for (const auto& r : rows) CHECK(predict_tree(*t, r.features) == r.label);
}

TEST_CASE("an unbounded tree reaches 100% training accuracy on distinct rows") {
    for (Criterion c : {Criterion::Gini, Criterion::Entropy, Criterion::Misclassification}) {
        auto rows = to_rows(testsup::make_synthetic(120, 83, 3.0));
        TreeConfig cfg;
        cfg.criterion = c;
        auto t = fit_tree(rows, cfg);
        for (const auto& r : rows) CHECK(predict_tree(*t, r.features) == r.label);
    }
}

TEST_CASE("forest with one tree, no bootstrap, full features equals a single tree") {
    auto rows = to_rows(testsup::make_synthetic(64, 19, 1.0));
    ForestConfig fc;
    fc.n_trees = 1;
    fc.bootstrap = false;
    fc.feature_subset_size = kNumFeatures;
    Forest f = fit_forest(rows, fc, 5);
    TreeConfig tc;
    auto single = fit_tree(rows, tc);
    for (const auto& r : rows) {
        CHECK(predict_forest(f, r.features) == predict_tree(*single, r.features));
    }
}

TEST_CASE("forest vote tallies and tie-break") {
    // build a forest of hand-made stump leaves to control the votes
    Forest f;
    for (int cls : {1, 1, 2, 2}) {
        auto leaf = std::make_unique<TreeNode>();
        leaf->predicted_class = cls;
        f.trees.push_back(std::move(leaf));
    }
    CHECK(predict_forest(f, {0.0}) == 1);  // 2-2 tie goes to the lower class

    Forest g;
    for (int cls : {3, 5, 5}) {
        auto leaf = std::make_unique<TreeNode>();
        leaf->predicted_class = cls;
        g.trees.push_back(std::move(leaf));
    }
    CHECK(predict_forest(g, {0.0}) == 5);
}

TEST_CASE("forest training is deterministic and beats chance on separable data") {
    auto rows = to_rows(testsup::make_synthetic(160, 29, 1.0));
    ForestConfig fc;
    fc.n_trees = 15;
    fc.max_depth = 6;
    Forest a = fit_forest(rows, fc, 99);
    Forest b = fit_forest(rows, fc, 99);
    int agree = 0, correct = 0;
    for (const auto& r : rows) {
        const int pa = predict_forest(a, r.features);
        if (pa == predict_forest(b, r.features)) agree += 1;
        if (pa == r.label) correct += 1;
    }
    CHECK(agree == static_cast<int>(rows.size()));
    CHECK(correct > static_cast<int>(rows.size()) * 3 / 4);
}

TEST_CASE("gradient boosting with zero rounds predicts the majority class") {
    auto rows = rows2d({{{1.0}, 2}, {{2.0}, 2}, {{3.0}, 2}, {{4.0}, 6}});
    GradientBoostConfig cfg;
    cfg.n_rounds = 0;
    Booster b = fit_gradient_boost(rows, cfg);
    CHECK(predict_booster(b, {100.0}) == 2);
    // the prior is the log-odds of the class frequency
    CHECK(b.prior[2] == doctest::Approx(std::log(0.75 / 0.25)).epsilon(1e-12));
}

TEST_CASE("gradient boosting training loss is monotone in the round count") {
    auto rows = to_rows(testsup::make_synthetic(80, 47, 2.0));
    GradientBoostConfig cfg;
    cfg.n_rounds = 12;
    cfg.max_depth = 2;
    cfg.learning_rate = 0.2;
    Booster full = fit_gradient_boost(rows, cfg);

    double prev = 1e100;
    for (int rounds = 0; rounds <= 12; rounds += 3) {
        // replay a prefix of the staged ensemble
        Booster prefix;
        prefix.kind = full.kind;
        prefix.learning_rate = full.learning_rate;
        prefix.prior = full.prior;
        for (int k = 0; k < kNumClasses; ++k) {
            for (int r = 0; r < rounds; ++r) {
                const TreeNode& src = *full.stages[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)];
                // regression trees are immutable after the fit; share via deep copy
                std::function<std::unique_ptr<TreeNode>(const TreeNode&)> clone =
                    [&](const TreeNode& n) {
                        auto out = std::make_unique<TreeNode>();
                        out->is_leaf = n.is_leaf;
                        out->feature = n.feature;
                        out->threshold = n.threshold;
                        out->class_counts = n.class_counts;
                        out->predicted_class = n.predicted_class;
                        out->value = n.value;
                        if (n.left) out->left = clone(*n.left);
                        if (n.right) out->right = clone(*n.right);
                        return out;
                    };
                prefix.stages[static_cast<std::size_t>(k)].push_back(clone(src));
            }
        }
        const double loss = booster_training_loss(prefix, rows);
        CHECK(loss <= prev + 1e-9);
        prev = loss;
    }
}

TEST_CASE("one-row gradient boosting converges towards certainty") {
    auto rows = rows2d({{{1.0}, 3}});
    GradientBoostConfig cfg;
    cfg.n_rounds = 50;
    cfg.learning_rate = 0.5;
    Booster b = fit_gradient_boost(rows, cfg);
    auto scores = booster_scores(b, {1.0});
    CHECK(predict_booster(b, {1.0}) == 3);
    CHECK(1.0 / (1.0 + std::exp(-scores[3])) > 0.9);
}

TEST_CASE("xgb_split_gain worked example") {
    // GL=2,HL=2 | GR=3,HR=3, lambda=0, gamma=0:
    // 0.5 * [4/2 + 9/3 - 25/5] = 0
    CHECK(xgb_split_gain(2, 2, 3, 3, 0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
    // GL=2,HL=2 | GR=-3,HR=3: 0.5 * [4/2 + 9/3 - 1/4] with lambda=1 on the parent only
    // full formula with lambda=1: 0.5 * [4/3 + 9/4 - 1/6]
    CHECK(xgb_split_gain(2, 2, -3, 3, 1.0, 0.0) ==
          doctest::Approx(0.5 * (4.0 / 3.0 + 9.0 / 4.0 - 1.0 / 6.0)).epsilon(1e-12));
    // the clean 2.375 value: 0.5 * [4/2 + 9/3 - 1/4]
    CHECK(xgb_split_gain(2, 1, -3, 2, 1.0, 0.0) == doctest::Approx(2.375).epsilon(1e-12));
    CHECK(xgb_split_gain(2, 2, -3, 3, 0.0, 0.0) ==
          doctest::Approx(0.5 * (4.0 / 2.0 + 9.0 / 3.0 - 1.0 / 5.0) - 0.0).epsilon(1e-12));
    // zero gradients never split when gamma > 0
    CHECK(xgb_split_gain(0, 1, 0, 2, 0.0, 0.7) == doctest::Approx(-0.7).epsilon(1e-12));
    // gamma shifts the gain down linearly
    CHECK(xgb_split_gain(2, 2, -3, 3, 0.0, 1.5) ==
          doctest::Approx(xgb_split_gain(2, 2, -3, 3, 0.0, 0.0) - 1.5).epsilon(1e-12));
}

TEST_CASE("xgb_split_gain is symmetric in its children") {
    SeededRng rng(7);
    for (int i = 0; i < 100; ++i) {
        const double gl = rng.uniform(-5, 5), gr = rng.uniform(-5, 5);
        const double hl = rng.uniform(0.1, 5), hr = rng.uniform(0.1, 5);
        const double lambda = rng.uniform(0, 3), gamma = rng.uniform(0, 2);
        CHECK(xgb_split_gain(gl, hl, gr, hr, lambda, gamma) ==
              doctest::Approx(xgb_split_gain(gr, hr, gl, hl, lambda, gamma)).epsilon(1e-12));
    }
}

TEST_CASE("xgb_leaf_weight") {
    CHECK(xgb_leaf_weight(2.0, 3.0, 1.0) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(xgb_leaf_weight(-4.0, 1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(xgb_leaf_weight(0.0, 5.0, 0.5) == 0.0);
}

TEST_CASE("xgb stump gain agrees with a variance-reduction oracle when h == 1") {
    // with all hessians 1 and lambda = gamma = 0, the gain of a split of
    // residuals r_i equals 0.5 * (SSE_parent - SSE_children)
    SeededRng rng(911);
    std::vector<double> r(20);
    for (auto& v : r) v = rng.uniform(-2, 2);
    for (std::size_t cut = 1; cut < r.size(); ++cut) {
        double gl = 0, gr = 0;
        for (std::size_t i = 0; i < cut; ++i) gl += r[i];
        for (std::size_t i = cut; i < r.size(); ++i) gr += r[i];
        const auto sse = [&](std::size_t lo, std::size_t hi) {
            double mean = 0;
            for (std::size_t i = lo; i < hi; ++i) mean += r[i];
            mean /= static_cast<double>(hi - lo);
            double s = 0;
            for (std::size_t i = lo; i < hi; ++i) s += (r[i] - mean) * (r[i] - mean);
            return s;
        };
        const double gain = xgb_split_gain(-gl, static_cast<double>(cut), -gr,
                                           static_cast<double>(r.size() - cut), 0.0, 0.0);
        const double reduction = 0.5 * (sse(0, r.size()) - sse(0, cut) - sse(cut, r.size()));
        CHECK(gain == doctest::Approx(reduction).epsilon(1e-9));
    }
}

TEST_CASE("fit_xgb determinism and the large-lambda prior limit") {
    auto rows = to_rows(testsup::make_synthetic(96, 73, 1.5));
    XgbConfig cfg;
    cfg.n_rounds = 8;
    cfg.max_depth = 3;
    Booster a = fit_xgb(rows, cfg, 77);
    Booster b = fit_xgb(rows, cfg, 77);
    int agree = 0;
    for (const auto& r : rows) {
        if (predict_booster(a, r.features) == predict_booster(b, r.features)) agree += 1;
    }
    CHECK(agree == static_cast<int>(rows.size()));

    // lambda -> infinity shrinks every leaf to ~0, leaving the prior
    XgbConfig heavy = cfg;
    heavy.lambda = 1e12;
    Booster h = fit_xgb(rows, heavy, 77);
    auto scores = booster_scores(h, rows[0].features);
    for (int k = 0; k < kNumClasses; ++k) {
        CHECK(scores[static_cast<std::size_t>(k)] ==
              doctest::Approx(h.prior[static_cast<std::size_t>(k)]).epsilon(1e-6));
    }
}

TEST_CASE("fit_xgb learns separable data") {
    auto rows = to_rows(testsup::make_synthetic(128, 37, 1.0));
    XgbConfig cfg;
    cfg.n_rounds = 12;
    cfg.max_depth = 3;
    cfg.subsample = 1.0;
    cfg.colsample = 1.0;
    Booster b = fit_xgb(rows, cfg, 3);
    int correct = 0;
    for (const auto& r : rows) {
        if (predict_booster(b, r.features) == r.label) correct += 1;
    }
    CHECK(correct > static_cast<int>(rows.size()) * 9 / 10);
}

TEST_CASE("rbf kernel values") {
    std::vector<double> x{1, 2, 3}, y{1, 2, 3};
    CHECK(rbf_kernel(x, y, 2.0) == 1.0);
    // ||x-y||^2 = 2 at sigma=1 -> exp(-1)
    CHECK(rbf_kernel({0, 0}, {1, 1}, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(rbf_kernel({0}, {3}, 1.0) == doctest::Approx(std::exp(-4.5)).epsilon(1e-12));
    CHECK(rbf_kernel(x, y, 0.5) <= 1.0);
    CHECK_THROWS_AS(rbf_kernel(x, y, 0.0), Error);
    CHECK_THROWS_AS(rbf_kernel({1.0}, {1.0, 2.0}, 1.0), Error);
}

TEST_CASE("svm decision function") {
    SvmParams p;
    p.support_vectors = {{0.0}, {4.0}};
    p.coefficients = {1.0, -1.0};
    p.bias = 0.0;
    p.sigma = 1.0;
    CHECK(svm_decision(p, {0.0}) == 1);   // closer to the positive vector
    CHECK(svm_decision(p, {4.0}) == -1);  // closer to the negative one
    CHECK(svm_decision(p, {2.0}) == 1);   // exact balance: sign(0) := +1

    SvmParams biased = p;
    biased.bias = -10.0;
    CHECK(svm_decision(biased, {0.0}) == -1);
}

TEST_CASE("tree, forest and booster serialization round trips") {
    auto rows = to_rows(testsup::make_synthetic(64, 11, 1.5));

    TreeConfig tc;
    auto tree = fit_tree(rows, tc);
    const std::string tp = temp_path("grulstm_tree.txt");
    save_tree(*tree, tp);
    auto tree2 = load_tree(tp);
    std::remove(tp.c_str());
    for (const auto& r : rows) CHECK(predict_tree(*tree, r.features) == predict_tree(*tree2, r.features));

    ForestConfig fc;
    fc.n_trees = 5;
    fc.max_depth = 4;
    Forest forest = fit_forest(rows, fc, 21);
    const std::string fp = temp_path("grulstm_forest.txt");
    save_forest(forest, fp);
    Forest forest2 = load_forest(fp);
    std::remove(fp.c_str());
    for (const auto& r : rows) {
        CHECK(predict_forest(forest, r.features) == predict_forest(forest2, r.features));
    }

    XgbConfig xc;
    xc.n_rounds = 4;
    xc.max_depth = 3;
    Booster booster = fit_xgb(rows, xc, 8);
    const std::string bp = temp_path("grulstm_booster.txt");
    save_booster(booster, bp);
    Booster booster2 = load_booster(bp);
    std::remove(bp.c_str());
    for (const auto& r : rows) {
        auto s1 = booster_scores(booster, r.features);
        auto s2 = booster_scores(booster2, r.features);
        for (int k = 0; k < kNumClasses; ++k) {
            CHECK(s1[static_cast<std::size_t>(k)] ==
                  doctest::Approx(s2[static_cast<std::size_t>(k)]).epsilon(1e-12));
        }
    }
}
