#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "vperc/delaunay.hpp"
#include "vperc/geometry.hpp"
#include "vperc/point_set.hpp"

namespace vperc {

/// Voronoi cells of a PointSet: Delaunay adjacency plus convex cell polygons
/// clipped to the window. Immutable after construction; safe to share across
/// concurrent readers.
struct VoronoiComplex {
    Window window;
    std::vector<Vec2> nuclei;

    // CSR neighbor lists (Delaunay edges), sorted per cell.
    std::vector<std::uint32_t> adj_offsets;
    std::vector<std::uint32_t> adj;

    // CSR polygons; label[k] gives the provenance of the edge vert[k] -> vert[k+1]
    // (neighbor id, or negative window side).
    std::vector<std::uint32_t> poly_offsets;
    std::vector<Vec2> poly_verts;
    std::vector<std::int32_t> poly_labels;

    std::vector<std::uint8_t> boundary_flags;  // cell polygon touches the window edge
    std::vector<Box> cell_bboxes;

    std::size_t cell_count() const { return nuclei.size(); }

    std::span<const std::uint32_t> neighbors(std::uint32_t i) const {
        return {adj.data() + adj_offsets[i], adj.data() + adj_offsets[i + 1]};
    }

    int polygon_size(std::uint32_t i) const {
        return static_cast<int>(poly_offsets[i + 1] - poly_offsets[i]);
    }

    ConvexPoly polygon(std::uint32_t i) const {
        ConvexPoly p;
        p.n = polygon_size(i);
        const std::uint32_t base = poly_offsets[i];
        for (int k = 0; k < p.n; ++k) {
            p.v[k] = poly_verts[base + k];
            p.label[k] = poly_labels[base + k];
        }
        return p;
    }

    /// Voronoi edge shared by adjacent cells i and j, if any survives the window
    /// clip. Read from the lower-indexed cell's polygon so both orders agree.
    std::optional<std::pair<Vec2, Vec2>> shared_edge(std::uint32_t i, std::uint32_t j) const;

    /// Cell containing a location = nearest nucleus (ties are measure zero).
    std::uint32_t cell_of(Vec2 p) const;
};

class ComplexBuilder {
public:
    /// Throws DegenerateGeometryError for < 3 or collinear points.
    void build(const PointSet& points, VoronoiComplex& out);

private:
    DelaunayBuilder delaunay_;
    Triangulation tri_;
    std::vector<Vec2> cc_;
    std::vector<std::uint8_t> cc_ok_;
};

VoronoiComplex build_complex(const PointSet& points);

}  // namespace vperc
