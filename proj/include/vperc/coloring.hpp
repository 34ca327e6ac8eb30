#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vperc/rng.hpp"
#include "vperc/voronoi.hpp"

namespace vperc {

inline constexpr int kDefaultRecoloringCap = 20;  // caps exact enumeration at ~10^6 states

/// One sign in {-1,+1} per cell; value-like, cheap to clone and resample.
struct Coloring {
    std::vector<std::int8_t> signs;
    double p = 0.5;
    SeedPath stream;
};

/// Each cell black (+1) independently with probability p; deterministic in the stream.
Coloring color(const VoronoiComplex& complex, double p, const SeedPath& stream);

/// Copy of `coloring` with exactly one sign negated.
Coloring flip(const Coloring& coloring, std::uint32_t cell);

/// Iterates all 2^k assignments of `free_cells`, other cells fixed to the base.
class ColoringEnumeration {
public:
    ColoringEnumeration(Coloring base, std::vector<std::uint32_t> free_cells);

    std::uint64_t size() const { return std::uint64_t{1} << free_cells_.size(); }
    std::uint64_t cursor() const { return cursor_; }
    bool done() const { return cursor_ >= size(); }
    void advance() { ++cursor_; }
    void reset() { cursor_ = 0; }

    /// The assignment at the current cursor: bit i set = free_cells[i] black.
    Coloring current() const;

    std::span<const std::uint32_t> free_cells() const { return free_cells_; }
    const Coloring& base() const { return base_; }

private:
    Coloring base_;
    std::vector<std::uint32_t> free_cells_;
    std::uint64_t cursor_ = 0;
};

/// All 2^|cells| colorings agreeing with `coloring` outside `cells`.
/// Throws CapacityError when |cells| exceeds the cap.
ColoringEnumeration enumerate_recolorings(const Coloring& coloring,
                                          std::vector<std::uint32_t> cells,
                                          int cap = kDefaultRecoloringCap);

}  // namespace vperc
