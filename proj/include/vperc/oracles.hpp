#pragma once

// Reference implementations used by the verification gates. These stay
// independent of the production detectors: arm events are decided by direct
// vertex-disjoint path search (max-flow feasibility over enumerated boundary
// attachments), pivotality by exhaustive recoloring with a BFS event check,
// and interfaces by geometric tracing along shared Voronoi edges.

#include "vperc/events.hpp"

namespace vperc::oracle {

/// Left-right black crossing decided by BFS over the clipped cell graph.
bool cross_bfs(const RegionGraph& rg, std::span<const std::int8_t> signs);

/// j-arm event by brute-force search for vertex-disjoint alternating cell
/// paths from the inner to the outer boundary (odd j: j-1 alternating plus one
/// extra black path, cell-disjoint from all of them).
bool arms_disjoint_paths(const RegionGraph& rg, std::span<const std::int8_t> signs, int j);

/// Quenched pivotality by enumerating every total coloring that agrees with
/// `coloring` off `cells` and checking the inner event with the oracles above.
bool pivotal_exhaustive(const VoronoiComplex& complex, const Coloring& coloring,
                        const std::vector<std::uint32_t>& cells, const EventSpec& inner);

/// Boundary-to-boundary interfaces traced geometrically along Voronoi edges.
int trace_interfaces(const VoronoiComplex& complex, const Coloring& coloring,
                     const RegionSpec& region);

}  // namespace vperc::oracle
