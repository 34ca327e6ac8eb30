#include "vperc/delaunay.hpp"

#include <cmath>

#include "vperc/predicates.hpp"

namespace vperc {

namespace {
constexpr std::uint32_t kNone = 0xFFFFFFFFu;
}

Triangulation triangulate(const std::vector<Vec2>& points, const Box& bounds) {
    DelaunayBuilder builder;
    Triangulation out;
    builder.build(points, bounds, out);
    return out;
}

std::uint32_t DelaunayBuilder::alloc_node() {
    if (!free_.empty()) {
        const std::uint32_t idx = free_.back();
        free_.pop_back();
        return idx;
    }
    nodes_.push_back({});
    stamp_.push_back(0);
    return static_cast<std::uint32_t>(nodes_.size() - 1);
}

std::uint32_t DelaunayBuilder::locate(Vec2 p) const {
    static constexpr int kNext[3] = {1, 2, 0};
    static constexpr int kPrev[3] = {2, 0, 1};
    const Node* nodes = nodes_.data();
    const Vec2* pts = pts_.data();
    std::uint32_t t = last_tri_;
    std::uint32_t prev = kNone;
    // Visibility walk; terminates because the triangulation is Delaunay after
    // every insertion. The step cap only guards against logic errors.
    const std::size_t cap = 4 * nodes_.size() + 64;
    for (std::size_t step = 0; step < cap; ++step) {
        const Node& nd = nodes[t];
        std::uint32_t next = kNone;
        for (int k = 0; k < 3; ++k) {
            const std::uint32_t cand = nd.nbr[k];
            if (cand == prev || cand == kNone) continue;
            const Vec2 a = pts[nd.v[kNext[k]]];
            const Vec2 b = pts[nd.v[kPrev[k]]];
            if (orient2d(a.x, a.y, b.x, b.y, p.x, p.y) < 0) {
                next = cand;
                break;
            }
        }
        if (next == kNone) return t;
        prev = t;
        t = next;
    }
    throw DegenerateGeometryError("delaunay: point location failed to converge");
}

void DelaunayBuilder::insert(std::uint32_t p_idx) {
    const Vec2 p = pts_[p_idx];
    const std::uint32_t start = locate(p);

    ++epoch_;
    cavity_.clear();
    boundary_.clear();

    // Grow the cavity: every triangle whose open circumdisk contains p.
    {
        const Node& nd = nodes_[start];
        const Vec2 a = pts_[nd.v[0]], b = pts_[nd.v[1]], c = pts_[nd.v[2]];
        if (in_circle(a.x, a.y, b.x, b.y, c.x, c.y, p.x, p.y) <= 0)
            throw DegenerateGeometryError("delaunay: duplicate point");
    }
    stamp_[start] = epoch_;
    cavity_.push_back(start);
    {
        const Node* nodes = nodes_.data();
        const Vec2* pts = pts_.data();
        std::uint32_t* stamp = stamp_.data();
        static constexpr int kNext[3] = {1, 2, 0};
        static constexpr int kPrev[3] = {2, 0, 1};
        for (std::size_t head = 0; head < cavity_.size(); ++head) {
            const std::uint32_t t = cavity_[head];
            const Node nd = nodes[t];
            for (int k = 0; k < 3; ++k) {
                const std::uint32_t nb = nd.nbr[k];
                bool inside = false;
                if (nb != kNone && stamp[nb] != epoch_) {
                    const Node& nn = nodes[nb];
                    const Vec2 a = pts[nn.v[0]], b = pts[nn.v[1]], c = pts[nn.v[2]];
                    if (in_circle(a.x, a.y, b.x, b.y, c.x, c.y, p.x, p.y) > 0) {
                        stamp[nb] = epoch_;
                        cavity_.push_back(nb);
                        inside = true;
                    }
                } else if (nb != kNone) {
                    inside = true;
                }
                if (!inside) {
                    std::uint32_t outside_k = 0;
                    if (nb != kNone) {
                        const Node& on = nodes[nb];
                        for (int j = 0; j < 3; ++j)
                            if (on.nbr[j] == t) outside_k = static_cast<std::uint32_t>(j);
                    }
                    boundary_.push_back({nd.v[kNext[k]], nd.v[kPrev[k]], nb, outside_k});
                }
            }
        }
    }

    for (const std::uint32_t t : cavity_) free_.push_back(t);

    // Star the cavity from p. Boundary edges form a cycle; link consecutive
    // new triangles by matching endpoints through a tiny open-addressed map
    // from first endpoint to edge index.
    const std::size_t ne = boundary_.size();
    std::uint32_t created_first = kNone;
    static thread_local std::vector<std::uint32_t> fresh;
    fresh.clear();
    for (std::size_t i = 0; i < ne; ++i) fresh.push_back(alloc_node());
    Node* nodes = nodes_.data();  // stable: all allocations done above

    constexpr std::size_t kMapCap = 128;
    std::uint32_t map_key[kMapCap];
    std::uint32_t map_val[kMapCap];
    const bool small = ne < kMapCap / 2;
    if (small) {
        for (std::size_t s = 0; s < kMapCap; ++s) map_key[s] = kNone;
        for (std::size_t i = 0; i < ne; ++i) {
            std::size_t at = (boundary_[i].a * 2654435761u) & (kMapCap - 1);
            while (map_key[at] != kNone) at = (at + 1) & (kMapCap - 1);
            map_key[at] = boundary_[i].a;
            map_val[at] = static_cast<std::uint32_t>(i);
        }
    }
    auto edge_starting_at = [&](std::uint32_t vert) -> std::uint32_t {
        if (small) {
            std::size_t at = (vert * 2654435761u) & (kMapCap - 1);
            while (map_key[at] != vert) at = (at + 1) & (kMapCap - 1);
            return map_val[at];
        }
        for (std::size_t j = 0; j < ne; ++j)
            if (boundary_[j].a == vert) return static_cast<std::uint32_t>(j);
        return kNone;
    };

    for (std::size_t i = 0; i < ne; ++i) {
        const BoundaryEdge& e = boundary_[i];
        Node& nd = nodes[fresh[i]];
        nd.v[0] = p_idx;
        nd.v[1] = e.a;
        nd.v[2] = e.b;
        nd.nbr[0] = e.outside;
        if (e.outside != kNone) nodes[e.outside].nbr[e.outside_k] = fresh[i];
        // nbr[1] faces edge (b, p): the new triangle starting at e.b.
        nd.nbr[1] = fresh[edge_starting_at(e.b)];
        stamp_[fresh[i]] = 0;
        created_first = fresh[i];
    }
    // prev pointers: the edge ending at e.a is the one whose .b equals e.a,
    // i.e. the predecessor in the cycle; derive it from the successor map.
    for (std::size_t i = 0; i < ne; ++i) {
        const std::uint32_t succ = edge_starting_at(boundary_[i].b);
        nodes[fresh[succ]].nbr[2] = fresh[i];
    }
    last_tri_ = created_first;
}

void DelaunayBuilder::build(const std::vector<Vec2>& points, const Box& bounds,
                            Triangulation& out) {
    const std::size_t n = points.size();
    if (n < 3) throw DegenerateGeometryError("delaunay: need at least 3 points");

    pts_.clear();
    pts_.reserve(n + 4);
    pts_.insert(pts_.end(), points.begin(), points.end());
    const Vec2 c = bounds.center();
    const double L = 1000.0 * (bounds.diameter() + 1.0);
    pts_.push_back({c.x - L, c.y - L});
    pts_.push_back({c.x + L, c.y - L});
    pts_.push_back({c.x + L, c.y + L});
    pts_.push_back({c.x - L, c.y + L});
    const auto sw = static_cast<std::uint32_t>(n);
    const std::uint32_t se = sw + 1, ne_ = sw + 2, nw = sw + 3;

    nodes_.clear();
    free_.clear();
    stamp_.clear();
    nodes_.reserve(2 * n + 16);
    stamp_.reserve(2 * n + 16);
    nodes_.push_back({{sw, se, ne_}, {kNone, 1, kNone}});
    nodes_.push_back({{sw, ne_, nw}, {kNone, kNone, 0}});
    stamp_.assign(2, 0);
    epoch_ = 0;
    last_tri_ = 0;

    // Insert in grid-snake order so point location walks stay short.
    order_.resize(n);
    const std::uint32_t grid = std::max<std::uint32_t>(
        1, static_cast<std::uint32_t>(std::sqrt(static_cast<double>(n) / 8.0)) + 1);
    const double gx = grid / std::max(bounds.width(), 1e-300);
    const double gy = grid / std::max(bounds.height(), 1e-300);
    bucket_counts_.assign(static_cast<std::size_t>(grid) * grid + 1, 0);
    auto key_of = [&](const Vec2& p) {
        auto col = static_cast<std::uint32_t>(std::clamp((p.x - bounds.xmin) * gx,
                                                         0.0, grid - 1.0));
        auto row = static_cast<std::uint32_t>(std::clamp((p.y - bounds.ymin) * gy,
                                                         0.0, grid - 1.0));
        return row * grid + ((row & 1u) ? (grid - 1 - col) : col);
    };
    for (std::size_t i = 0; i < n; ++i) ++bucket_counts_[key_of(points[i]) + 1];
    for (std::size_t k = 1; k < bucket_counts_.size(); ++k)
        bucket_counts_[k] += bucket_counts_[k - 1];
    for (std::size_t i = 0; i < n; ++i)
        order_[bucket_counts_[key_of(points[i])]++] = static_cast<std::uint32_t>(i);

    for (const std::uint32_t idx : order_) insert(idx);

    // Compact alive triangles, remapping neighbor pointers; record one incident
    // triangle per real vertex for dual-cell walks.
    static thread_local std::vector<std::uint32_t> remap;
    remap.assign(nodes_.size(), kNone);
    for (const std::uint32_t f : free_) remap[f] = kNone - 1;  // dead marker
    std::uint32_t alive = 0;
    for (std::size_t t = 0; t < nodes_.size(); ++t)
        if (remap[t] == kNone) remap[t] = alive++;
        else remap[t] = kNone;

    out.pts = pts_;
    out.n_real = static_cast<std::uint32_t>(n);
    out.tris.clear();
    out.tris.reserve(alive);
    out.incident.assign(n, kNoTri);
    std::size_t real_count = 0;
    for (std::size_t t = 0; t < nodes_.size(); ++t) {
        if (remap[t] == kNone) continue;
        const Node& nd = nodes_[t];
        Triangulation::Tri tri{{nd.v[0], nd.v[1], nd.v[2]}, {kNoTri, kNoTri, kNoTri}};
        for (int k = 0; k < 3; ++k) {
            if (nd.nbr[k] != kNone) tri.nbr[k] = remap[nd.nbr[k]];
            if (nd.v[k] < n) out.incident[nd.v[k]] = static_cast<std::uint32_t>(out.tris.size());
        }
        out.tris.push_back(tri);
        if (out.is_real(tri)) ++real_count;
    }
    if (real_count == 0)
        throw DegenerateGeometryError("delaunay: all points collinear");
}

}  // namespace vperc
