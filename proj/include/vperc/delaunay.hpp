#pragma once

#include <cstdint>
#include <vector>

#include "vperc/geometry.hpp"

namespace vperc {

inline constexpr std::uint32_t kNoTri = 0xFFFFFFFFu;

/// Delaunay triangulation of a point set, augmented with four far-away corner
/// vertices (indices n_real .. n_real+3) so every real point sits inside the
/// initial hull. Triangles are counterclockwise and satisfy the empty open
/// circumdisk property w.r.t. all vertices.
struct Triangulation {
    struct Tri {
        std::uint32_t v[3];
        std::uint32_t nbr[3];  // across the edge opposite v[k]; kNoTri outside
    };

    std::vector<Vec2> pts;  // real points then 4 far corners
    std::uint32_t n_real = 0;
    std::vector<Tri> tris;  // all alive triangles, super-vertex ones included
    std::vector<std::uint32_t> incident;  // one triangle per real vertex

    bool is_super(std::uint32_t vert) const { return vert >= n_real; }
    bool is_real(const Tri& t) const {
        return !is_super(t.v[0]) && !is_super(t.v[1]) && !is_super(t.v[2]);
    }
    int slot_of(const Tri& t, std::uint32_t vert) const {
        if (t.v[0] == vert) return 0;
        if (t.v[1] == vert) return 1;
        return 2;
    }
    /// The next triangle counterclockwise around `vert`.
    std::uint32_t rotate_ccw(std::uint32_t tri, std::uint32_t vert) const {
        const Tri& t = tris[tri];
        return t.nbr[(slot_of(t, vert) + 1) % 3];
    }
};

/// Incremental Bowyer-Watson with exact predicates. Reusable across builds to
/// amortize allocations; replicates each own a builder (no shared state).
class DelaunayBuilder {
public:
    /// Throws DegenerateGeometryError for fewer than 3 points, collinear input,
    /// or coordinate duplicates.
    void build(const std::vector<Vec2>& points, const Box& bounds, Triangulation& out);

private:
    struct Node {
        std::uint32_t v[3];
        std::uint32_t nbr[3];  // nbr[k] shares the edge opposite v[k]
    };
    struct BoundaryEdge {
        std::uint32_t a, b;
        std::uint32_t outside;    // kNone for the far hull
        std::uint32_t outside_k;  // edge slot in `outside` facing the cavity
    };

    std::uint32_t locate(Vec2 p) const;
    void insert(std::uint32_t p_idx);
    std::uint32_t alloc_node();

    std::vector<Vec2> pts_;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> free_;
    std::vector<std::uint32_t> stamp_;
    std::vector<std::uint32_t> cavity_;
    std::vector<BoundaryEdge> boundary_;
    std::vector<std::uint32_t> order_;
    std::vector<std::uint32_t> bucket_counts_;
    std::uint32_t epoch_ = 0;
    std::uint32_t last_tri_ = 0;
};

/// One-shot convenience wrapper.
Triangulation triangulate(const std::vector<Vec2>& points, const Box& bounds);

}  // namespace vperc
