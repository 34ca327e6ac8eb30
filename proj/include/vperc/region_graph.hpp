#pragma once

#include <cstdint>
#include <vector>

#include "vperc/geometry.hpp"
#include "vperc/voronoi.hpp"

namespace vperc {

inline constexpr std::uint32_t kNoCell = 0xFFFFFFFFu;

// Touch bits for annulus-kind regions.
inline constexpr std::uint8_t kTouchInner = 1;
inline constexpr std::uint8_t kTouchOuter = 2;
// Touch bits for rectangle regions.
inline constexpr std::uint8_t kTouchLeft = 1;
inline constexpr std::uint8_t kTouchRight = 2;
inline constexpr std::uint8_t kTouchTop = 4;
inline constexpr std::uint8_t kTouchBottom = 8;

/// Region-clipped view of a complex: the cells meeting the region, adjacency
/// restricted to shared Voronoi edges that cross the region interior, per-cell
/// boundary-touch bits, and the ordered attachment arcs along the inner
/// boundary walk. Everything detectors need that does not depend on a
/// coloring, so it is built once per (complex, region) and reused.
struct RegionGraph {
    const VoronoiComplex* complex = nullptr;
    RegionSpec region;

    std::vector<std::uint32_t> cells;     // global ids of member cells
    std::vector<std::uint32_t> local_of;  // global -> local index or kNoCell

    std::vector<std::uint32_t> nbr_offsets;  // CSR over local cells
    std::vector<std::uint32_t> nbrs;

    std::vector<std::uint8_t> touch;  // per local cell

    struct Arc {
        double t0, t1;        // arclength along the inner boundary walk
        std::uint32_t local;  // attached cell
    };
    std::vector<Arc> inner_arcs;  // sorted by t0
    bool cyclic = false;          // plane annulus: the walk is a closed loop
    bool degenerate_empty = false;  // r == R: measure-zero region

    std::size_t size() const { return cells.size(); }
};

struct RegionGraphOptions {
    /// Throw ReplicateDiscard when a member cell carries a window-boundary flag
    /// (the padding was breached). Estimators turn this on; direct queries on
    /// hand-built complexes leave it off.
    bool discard_boundary_flagged = false;
};

/// Throws SafeZoneError when the region does not fit the window's safe zone.
void build_region_graph(const VoronoiComplex& complex, const RegionSpec& region,
                        RegionGraph& out, const RegionGraphOptions& opts = {});

RegionGraph build_region_graph(const VoronoiComplex& complex, const RegionSpec& region,
                               const RegionGraphOptions& opts = {});

/// Spec-level query: cells whose polygon meets the region with positive area,
/// with the boundary components each clipped cell touches.
struct CellsMeeting {
    std::vector<std::uint32_t> ids;
    std::vector<std::uint8_t> touch;
};
CellsMeeting cells_meeting(const VoronoiComplex& complex, const RegionSpec& region);

namespace detail {
/// Parameter interval of segment ab inside the convex polygon of `cell`.
bool segment_in_polygon(const VoronoiComplex& cx, std::uint32_t cell, Vec2 a, Vec2 b, double& t0,
                        double& t1);
}  // namespace detail

}  // namespace vperc
