#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace grulstm {

// Deterministic xoshiro256++ generator seeded through splitmix64.
// The whole artifact draws randomness from this one generator family so
// that a (seed, config, data) triple reproduces every run bit-for-bit on
// any platform: only 64-bit integer ops and one fixed int-to-double
// conversion are involved.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform in [0, 1), 53 random mantissa bits.
    double next_double();

    double uniform(double lo, double hi);

    // Uniform integer in [0, n); n must be positive.
    std::size_t below(std::size_t n);

    std::uint64_t seed() const { return seed_; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    std::uint64_t seed_;
    std::uint64_t state_[4];
};

// Derives a component seed from a root seed and a component name
// (FNV-1a over the name, mixed with the root through splitmix64).
// All module-level generators are seeded this way; there is no ambient
// entropy anywhere in the artifact.
std::uint64_t derive_seed(std::uint64_t root, std::string_view component);

}  // namespace grulstm
