#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "grulstm/numerics.hpp"

namespace grulstm {

inline constexpr int kNumFeatures = 7;
inline constexpr int kNumClasses = 8;

// One labeled point: x, y, z, intensity, r, g, b plus a class index 0-7.
struct PointRecord {
    std::array<double, kNumFeatures> features{};
    int label = 0;
};

struct Dataset {
    Matrix features;          // N x 7
    std::vector<int> labels;  // N entries in 0-7
    std::array<std::string, kNumClasses> class_names;

    Dataset();
    std::size_t size() const { return labels.size(); }
    PointRecord row(std::size_t i) const;
    void append(const PointRecord& r);
};

// Default label names. The source data enumerates nine category names for
// eight label slots; the last two share slot 7 and the mapping stays
// configurable through Dataset::class_names.
std::array<std::string, kNumClasses> default_class_names();

// Per-column min/max of the training features (Max-Min linear scaling).
struct NormalizationStats {
    std::array<double, kNumFeatures> min{};
    std::array<double, kNumFeatures> max{};
};

// One input sequence for a recurrent model: ordered steps of uniform
// dimension plus the class target.
struct SequenceSample {
    std::vector<Vector> steps;
    int target = 0;
};

enum class SequenceMode { Point, Window };

// Reads a labeled point CSV. Header must be exactly
// "x,y,z,intensity,r,g,b,class"; extra or missing columns are rejected.
Dataset load_csv(const std::string& path);

// Writes a dataset back out in the same schema (full round-trip precision).
void save_csv(const Dataset& d, const std::string& path);

NormalizationStats fit_minmax(const Dataset& d);

// Maps each feature to (x - min) / (max - min), clamped to [0, 1].
// Columns with max == min map to 0.0.
Dataset apply_minmax(const Dataset& d, const NormalizationStats& s);

// Point mode: one sample per row, 7 steps of dimension 1 (feature j at
// step j). Window mode: N - w samples; sample i covers rows i..i+w-1 as
// 7-vectors and targets the label of row i+w.
std::vector<SequenceSample> make_sequences(const Dataset& d, SequenceMode mode, int window = 10);

struct SplitResult {
    Dataset train;
    Dataset test;
};

// Deterministic seeded split; stratified mode keeps per-class proportions
// within one row. Classes too small to stratify fall back to a plain
// shuffle with a warning on stderr.
SplitResult split_train_test(const Dataset& d, double test_fraction, std::uint64_t seed,
                             bool stratified);

Vector one_hot(int label, int k = kNumClasses);

}  // namespace grulstm
