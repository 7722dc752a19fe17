#include "grulstm/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "grulstm/error.hpp"
#include "grulstm/textio.hpp"

namespace grulstm {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

bool parse_double(const std::string& token, double& out) {
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_long(const std::string& token, long long& out) {
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

std::array<std::string, kNumClasses> default_class_names() {
    return {"unlabeled",      "man-made terrain", "natural terrain", "high vegetation",
            "low vegetation", "buildings",        "hard scape",      "scanning artefacts"};
}

Dataset::Dataset() : features(0, kNumFeatures), class_names(default_class_names()) {}

PointRecord Dataset::row(std::size_t i) const {
    PointRecord r;
    for (int j = 0; j < kNumFeatures; ++j) r.features[j] = features(i, j);
    r.label = labels[i];
    return r;
}

void Dataset::append(const PointRecord& r) {
    features.rows += 1;
    features.data.insert(features.data.end(), r.features.begin(), r.features.end());
    labels.push_back(r.label);
}

namespace {

const std::array<std::string, 8> kHeader = {"x", "y", "z", "intensity", "r", "g", "b", "class"};

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(errc::kIo, "cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw Error(errc::kSchema, "empty file, header row required: " + path);

    auto cols = split_commas(line);
    for (auto& c : cols) c = trim(c);
    for (const auto& want : kHeader) {
        if (std::find(cols.begin(), cols.end(), want) == cols.end()) {
            throw Error(errc::kSchema, "missing column '" + want + "' in header of " + path);
        }
    }
    if (cols.size() != kHeader.size()) {
        throw Error(errc::kSchema, "unexpected extra columns in header of " + path);
    }
    for (std::size_t i = 0; i < kHeader.size(); ++i) {
        if (cols[i] != kHeader[i]) {
            throw Error(errc::kSchema, "column order must be x,y,z,intensity,r,g,b,class; got '" +
                                           cols[i] + "' at position " + std::to_string(i + 1));
        }
    }

    Dataset d;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        auto cells = split_commas(stripped);
        if (cells.size() != 8) {
            throw Error(errc::kParse, "line " + std::to_string(line_no) + ": expected 8 fields, got " +
                                          std::to_string(cells.size()));
        }
        PointRecord r;
        for (int j = 0; j < kNumFeatures; ++j) {
            double v;
            if (!parse_double(trim(cells[j]), v) || !std::isfinite(v)) {
                throw Error(errc::kParse, "line " + std::to_string(line_no) + ": non-numeric value '" +
                                              trim(cells[j]) + "' in column " + kHeader[j]);
            }
            r.features[j] = v;
        }
        long long lbl;
        if (!parse_long(trim(cells[7]), lbl)) {
            throw Error(errc::kParse, "line " + std::to_string(line_no) + ": non-integer class '" +
                                          trim(cells[7]) + "'");
        }
        if (lbl < 0 || lbl >= kNumClasses) {
            throw Error(errc::kValidation, "line " + std::to_string(line_no) + ": class " +
                                               std::to_string(lbl) + " outside 0-" +
                                               std::to_string(kNumClasses - 1));
        }
        r.label = static_cast<int>(lbl);
        d.append(r);
    }
    return d;
}

void save_csv(const Dataset& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(errc::kIo, "cannot write " + path);
    out << "x,y,z,intensity,r,g,b,class\n";
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (int j = 0; j < kNumFeatures; ++j) {
            out << format_double(d.features(i, j)) << ',';
        }
        out << d.labels[i] << '\n';
    }
    if (!out) throw Error(errc::kIo, "write failure on " + path);
}

NormalizationStats fit_minmax(const Dataset& d) {
    if (d.size() == 0) throw Error(errc::kContract, "fit_minmax: empty dataset");
    NormalizationStats s;
    for (int j = 0; j < kNumFeatures; ++j) {
        s.min[j] = s.max[j] = d.features(0, j);
    }
    for (std::size_t i = 1; i < d.size(); ++i) {
        for (int j = 0; j < kNumFeatures; ++j) {
            const double v = d.features(i, j);
            s.min[j] = std::min(s.min[j], v);
            s.max[j] = std::max(s.max[j], v);
        }
    }
    return s;
}

Dataset apply_minmax(const Dataset& d, const NormalizationStats& s) {
    Dataset out = d;
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (int j = 0; j < kNumFeatures; ++j) {
            const double span = s.max[j] - s.min[j];
            double v = 0.0;
            if (span > 0.0) {
                v = (d.features(i, j) - s.min[j]) / span;
                v = std::clamp(v, 0.0, 1.0);
            }
            out.features(i, j) = v;
        }
    }
    return out;
}

std::vector<SequenceSample> make_sequences(const Dataset& d, SequenceMode mode, int window) {
    std::vector<SequenceSample> out;
    const std::size_t n = d.size();
    if (mode == SequenceMode::Point) {
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            SequenceSample s;
            s.steps.reserve(kNumFeatures);
            for (int j = 0; j < kNumFeatures; ++j) {
                s.steps.push_back(Vector{d.features(i, j)});
            }
            s.target = d.labels[i];
            out.push_back(std::move(s));
        }
        return out;
    }
    if (window < 1 || static_cast<std::size_t>(window) >= n) {
        throw Error(errc::kContract, "make_sequences: window " + std::to_string(window) +
                                         " requires 1 <= w < N (N=" + std::to_string(n) + ")");
    }
    const std::size_t w = static_cast<std::size_t>(window);
    out.reserve(n - w);
    for (std::size_t i = 0; i + w < n; ++i) {
        SequenceSample s;
        s.steps.reserve(w);
        for (std::size_t t = i; t < i + w; ++t) {
            Vector step(kNumFeatures);
            for (int j = 0; j < kNumFeatures; ++j) step[j] = d.features(t, j);
            s.steps.push_back(std::move(step));
        }
        s.target = d.labels[i + w];
        out.push_back(std::move(s));
    }
    return out;
}

SplitResult split_train_test(const Dataset& d, double test_fraction, std::uint64_t seed,
                             bool stratified) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw Error(errc::kValidation, "split_train_test: test_fraction must lie in (0,1)");
    }
    const std::size_t n = d.size();
    std::vector<bool> in_test(n, false);
    SeededRng rng(derive_seed(seed, "split_train_test"));

    if (stratified) {
        std::vector<std::vector<std::size_t>> per_class(kNumClasses);
        for (std::size_t i = 0; i < n; ++i) per_class[d.labels[i]].push_back(i);
        for (int c = 0; c < kNumClasses; ++c) {
            auto& idx = per_class[c];
            if (idx.empty()) continue;
            rng.shuffle(idx);
            const auto quota = static_cast<std::size_t>(
                std::llround(test_fraction * static_cast<double>(idx.size())));
            if (quota == 0 || quota == idx.size()) {
                std::cerr << "warning: class " << c << " has too few rows ("
                          << idx.size() << ") for stratification; using plain shuffle\n";
                for (std::size_t i : idx) in_test[i] = rng.next_double() < test_fraction;
                continue;
            }
            for (std::size_t k = 0; k < quota; ++k) in_test[idx[k]] = true;
        }
    } else {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        rng.shuffle(idx);
        const auto quota =
            static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
        for (std::size_t k = 0; k < quota && k < n; ++k) in_test[idx[k]] = true;
    }

    SplitResult out;
    out.train.class_names = d.class_names;
    out.test.class_names = d.class_names;
    for (std::size_t i = 0; i < n; ++i) {
        (in_test[i] ? out.test : out.train).append(d.row(i));
    }
    return out;
}

Vector one_hot(int label, int k) {
    if (label < 0 || label >= k) {
        throw Error(errc::kValidation, "one_hot: label " + std::to_string(label) + " outside 0-" +
                                           std::to_string(k - 1));
    }
    Vector v(static_cast<std::size_t>(k), 0.0);
    v[static_cast<std::size_t>(label)] = 1.0;
    return v;
}

}  // namespace grulstm
