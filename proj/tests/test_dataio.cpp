#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "doctest.h"
#include "grulstm/dataio.hpp"
#include "grulstm/error.hpp"
#include "test_support.hpp"

using namespace grulstm;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& content) {
        path = (std::filesystem::temp_directory_path() /
                ("grulstm_test_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + ".csv"))
                   .string();
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

const char* kHeader = "x,y,z,intensity,r,g,b,class\n";

}  // namespace

TEST_CASE("load_csv happy path preserves rows in order") {
    TempFile f(std::string(kHeader) +
               "1,2,3,4,5,6,7,0\n"
               "1.5,2.5,3.5,4.5,5.5,6.5,7.5,3\n"
               "-1,-2,-3,0,10,20,30,7\n");
    Dataset d = load_csv(f.path);
    REQUIRE(d.size() == 3);
    CHECK(d.labels == std::vector<int>{0, 3, 7});
    CHECK(d.features(0, 0) == 1.0);
    CHECK(d.features(1, 3) == 4.5);
    CHECK(d.features(2, 6) == 30.0);
}

TEST_CASE("load_csv rejects label out of range with line number") {
    TempFile f(std::string(kHeader) +
               "1,2,3,4,5,6,7,0\n"
               "1,2,3,4,5,6,7,1\n"
               "1,2,3,4,5,6,7,2\n"
               "1,2,3,4,5,6,7,9\n");
    try {
        load_csv(f.path);
        FAIL("expected E_VALIDATION");
    } catch (const Error& e) {
        CHECK(e.code() == errc::kValidation);
        CHECK(std::string(e.what()).find("line 5") != std::string::npos);
    }
}

TEST_CASE("load_csv empty data section gives N=0") {
    TempFile f(kHeader);
    CHECK(load_csv(f.path).size() == 0);
}

TEST_CASE("load_csv schema errors") {
    TempFile missing("x,y,z,intensity,r,g,class\n");
    try {
        load_csv(missing.path);
        FAIL("expected E_SCHEMA");
    } catch (const Error& e) {
        CHECK(e.code() == errc::kSchema);
        CHECK(std::string(e.what()).find("'b'") != std::string::npos);
    }

    TempFile extra("x,y,z,intensity,r,g,b,class,extra\n");
    CHECK_THROWS_AS(load_csv(extra.path), Error);

    TempFile bad_cell(std::string(kHeader) + "1,2,oops,4,5,6,7,0\n");
    try {
        load_csv(bad_cell.path);
        FAIL("expected E_PARSE");
    } catch (const Error& e) {
        CHECK(e.code() == errc::kParse);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("save_csv then load_csv reproduces numeric content exactly") {
    Dataset d = testsup::make_synthetic(50, 17, 1.0);
    TempFile f("");
    save_csv(d, f.path);
    Dataset back = load_csv(f.path);
    REQUIRE(back.size() == d.size());
    CHECK(back.labels == d.labels);
    CHECK(back.features.data == d.features.data);
}

TEST_CASE("fit_minmax exact columnwise extremes") {
    Dataset d;
    for (double v : {2.0, 4.0, 6.0}) {
        PointRecord r;
        for (int j = 0; j < kNumFeatures; ++j) r.features[j] = v;
        d.append(r);
    }
    NormalizationStats s = fit_minmax(d);
    CHECK(s.min[0] == 2.0);
    CHECK(s.max[0] == 6.0);

    Dataset constant;
    for (int i = 0; i < 2; ++i) {
        PointRecord r;
        r.features.fill(5.0);
        constant.append(r);
    }
    NormalizationStats cs = fit_minmax(constant);
    CHECK(cs.min[2] == 5.0);
    CHECK(cs.max[2] == 5.0);

    CHECK_THROWS_AS(fit_minmax(Dataset{}), Error);
}

TEST_CASE("fit_minmax matches a brute-force scan oracle on random rows") {
    Dataset d = testsup::make_synthetic(1000, 5, 2.0);
    NormalizationStats s = fit_minmax(d);
    for (int j = 0; j < kNumFeatures; ++j) {
        double lo = d.features(0, j), hi = d.features(0, j);
        for (std::size_t i = 0; i < d.size(); ++i) {
            lo = std::min(lo, d.features(i, j));
            hi = std::max(hi, d.features(i, j));
        }
        CHECK(s.min[j] == lo);
        CHECK(s.max[j] == hi);
    }
}

TEST_CASE("apply_minmax maps to [0,1] with clamping and degenerate columns") {
    Dataset d;
    for (double v : {2.0, 4.0, 6.0}) {
        PointRecord r;
        for (int j = 0; j < kNumFeatures; ++j) r.features[j] = j == 1 ? 5.0 : v;  // column 1 constant
        d.append(r);
    }
    NormalizationStats s = fit_minmax(d);
    Dataset n = apply_minmax(d, s);
    CHECK(n.features(0, 0) == 0.0);
    CHECK(n.features(1, 0) == 0.5);
    CHECK(n.features(2, 0) == 1.0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(n.features(i, 1) == 0.0);

    // test value below the training min clamps to 0
    Dataset probe;
    PointRecord r;
    r.features.fill(-100.0);
    probe.append(r);
    Dataset pn = apply_minmax(probe, s);
    for (int j = 0; j < kNumFeatures; ++j) CHECK(pn.features(0, j) == 0.0);
}

TEST_CASE("normalize twice equals normalize once for non-constant columns") {
    Dataset d = testsup::make_synthetic(200, 9, 1.5);
    NormalizationStats s1 = fit_minmax(d);
    Dataset once = apply_minmax(d, s1);
    NormalizationStats s2 = fit_minmax(once);
    Dataset twice = apply_minmax(once, s2);
    for (std::size_t i = 0; i < once.features.data.size(); ++i) {
        CHECK(std::abs(once.features.data[i] - twice.features.data[i]) <= 1e-12);
    }
}

TEST_CASE("make_sequences point and window modes") {
    Dataset d = testsup::make_synthetic(12, 21, 1.0);

    auto window = make_sequences(d, SequenceMode::Window, 10);
    REQUIRE(window.size() == 2);
    CHECK(window[0].steps.size() == 10);
    CHECK(window[0].steps[0].size() == kNumFeatures);
    CHECK(window[0].target == d.labels[10]);
    CHECK(window[1].target == d.labels[11]);
    CHECK(window[1].steps[0] ==
          Vector{d.features(1, 0), d.features(1, 1), d.features(1, 2), d.features(1, 3),
                 d.features(1, 4), d.features(1, 5), d.features(1, 6)});

    Dataset one = testsup::make_synthetic(1, 3, 1.0);
    auto point = make_sequences(one, SequenceMode::Point);
    REQUIRE(point.size() == 1);
    CHECK(point[0].steps.size() == kNumFeatures);
    CHECK(point[0].steps[2].size() == 1);
    CHECK(point[0].steps[2][0] == one.features(0, 2));

    CHECK_THROWS_AS(make_sequences(d, SequenceMode::Window, 12), Error);

    for (int w : {1, 3, 7, 11}) {
        CHECK(make_sequences(d, SequenceMode::Window, w).size() == d.size() - w);
    }
}

TEST_CASE("split_train_test sizes, determinism and partition") {
    Dataset d = testsup::make_synthetic(10, 31, 1.0);
    SplitResult s = split_train_test(d, 0.2, 7, false);
    CHECK(s.train.size() == 8);
    CHECK(s.test.size() == 2);

    SplitResult s2 = split_train_test(d, 0.2, 7, false);
    CHECK(s2.train.features.data == s.train.features.data);
    CHECK(s2.test.labels == s.test.labels);

    // multiset partition: union of rows equals the original rows
    std::multiset<std::vector<double>> original, reassembled;
    for (std::size_t i = 0; i < d.size(); ++i) {
        auto r = d.row(i);
        original.insert(std::vector<double>(r.features.begin(), r.features.end()));
    }
    for (const auto* part : {&s.train, &s.test}) {
        for (std::size_t i = 0; i < part->size(); ++i) {
            auto r = part->row(i);
            reassembled.insert(std::vector<double>(r.features.begin(), r.features.end()));
        }
    }
    CHECK(original == reassembled);
}

TEST_CASE("stratified split preserves an 80/20 class mix") {
    Dataset d;
    for (int i = 0; i < 100; ++i) {
        PointRecord r;
        r.features.fill(static_cast<double>(i));
        r.label = i < 80 ? 0 : 1;
        d.append(r);
    }
    SplitResult s = split_train_test(d, 0.2, 11, true);
    std::map<int, int> test_counts;
    for (int l : s.test.labels) test_counts[l] += 1;
    CHECK(test_counts[0] == 16);
    CHECK(test_counts[1] == 4);
}

TEST_CASE("one_hot definition and bounds") {
    CHECK(one_hot(0) == Vector{1, 0, 0, 0, 0, 0, 0, 0});
    Vector last = one_hot(7);
    CHECK(last[7] == 1.0);
    double sum = 0.0;
    for (double v : last) sum += v;
    CHECK(sum == 1.0);
    CHECK_THROWS_AS(one_hot(8), Error);
    CHECK_THROWS_AS(one_hot(-1), Error);
}
