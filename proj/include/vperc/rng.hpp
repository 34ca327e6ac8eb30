#pragma once

// Counter-based random streams (Philox4x32-10) keyed by a hierarchical seed path.
// Any (master seed, labels..., indices...) chain names one stream; streams are
// statistically independent and replicates never share one, which is what makes
// results independent of worker count and execution order.

#include <cstdint>
#include <cstring>
#include <string_view>

#include "vperc/errors.hpp"

namespace vperc {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace detail

/// Opaque reproducibility token: a 128-bit key derived from a master seed and a
/// chain of child labels/indices.
struct SeedPath {
    std::uint64_t hi = 0;
    std::uint64_t lo = 0;

    static SeedPath root(std::uint64_t master_seed) {
        SeedPath p;
        p.hi = detail::mix64(master_seed);
        p.lo = detail::mix64(master_seed ^ 0xA0761D6478BD642FULL);
        return p;
    }

    [[nodiscard]] SeedPath child(std::uint64_t component) const {
        SeedPath p;
        p.hi = detail::mix64(hi ^ detail::mix64(component ^ 0xE7037ED1A0B428DBULL));
        p.lo = detail::mix64(lo + 0x8EBC6AF09C88C6E3ULL + p.hi);
        return p;
    }

    [[nodiscard]] SeedPath child(std::string_view label) const {
        return child(detail::fnv1a64(label));
    }

    friend bool operator==(const SeedPath& a, const SeedPath& b) {
        return a.hi == b.hi && a.lo == b.lo;
    }
};

/// Philox4x32-10 stream for one SeedPath. Draws are deterministic in the path.
class Rng {
public:
    explicit Rng(const SeedPath& path)
        : key0_(static_cast<std::uint32_t>(path.hi >> 32)),
          key1_(static_cast<std::uint32_t>(path.hi)),
          ctr2_(static_cast<std::uint32_t>(path.lo >> 32)),
          ctr3_(static_cast<std::uint32_t>(path.lo)) {}

    std::uint64_t next_u64() {
        if (avail_ == 0) refill();
        return buf_[--avail_];
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Exact Poisson: inversion for small means, PTRS transformed rejection otherwise.
    std::uint64_t poisson(double mean);

private:
    void refill();

    std::uint32_t key0_, key1_;
    std::uint32_t ctr2_, ctr3_;
    std::uint64_t counter_ = 0;
    std::uint64_t buf_[2] = {0, 0};
    int avail_ = 0;
};

}  // namespace vperc
