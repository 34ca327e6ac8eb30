#include "vperc/voronoi.hpp"

#include <algorithm>

namespace vperc {

std::optional<std::pair<Vec2, Vec2>> VoronoiComplex::shared_edge(std::uint32_t i,
                                                                 std::uint32_t j) const {
    const std::uint32_t a = std::min(i, j);
    const std::uint32_t b = std::max(i, j);
    const std::uint32_t base = poly_offsets[a];
    const int n = polygon_size(a);
    for (int k = 0; k < n; ++k) {
        if (poly_labels[base + k] == static_cast<std::int32_t>(b)) {
            const Vec2 p = poly_verts[base + k];
            const Vec2 q = poly_verts[base + (k + 1) % n];
            return std::make_pair(p, q);
        }
    }
    return std::nullopt;
}

std::uint32_t VoronoiComplex::cell_of(Vec2 p) const {
    std::uint32_t best = 0;
    double best_d = norm2(p - nuclei[0]);
    for (std::uint32_t i = 1; i < nuclei.size(); ++i) {
        const double d = norm2(p - nuclei[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

void ComplexBuilder::build(const PointSet& points, VoronoiComplex& out) {
    delaunay_.build(points.points, points.window, tri_);
    const std::uint32_t n = tri_.n_real;

    // Real-real Delaunay edges: scatter directed copies per cell, then sort and
    // deduplicate each short neighbor list (interior edges arrive twice).
    out.window = points.window;
    out.nuclei = points.points;
    out.adj_offsets.assign(n + 1, 0);
    for (const auto& t : tri_.tris) {
        for (int k = 0; k < 3; ++k) {
            const std::uint32_t u = t.v[k];
            const std::uint32_t v = t.v[(k + 1) % 3];
            if (u >= n || v >= n) continue;
            ++out.adj_offsets[u + 1];
            ++out.adj_offsets[v + 1];
        }
    }
    for (std::uint32_t i = 0; i < n; ++i) out.adj_offsets[i + 1] += out.adj_offsets[i];
    out.adj.assign(out.adj_offsets[n], 0);
    {
        static thread_local std::vector<std::uint32_t> cursor;
        cursor.assign(out.adj_offsets.begin(), out.adj_offsets.end() - 1);
        for (const auto& t : tri_.tris) {
            for (int k = 0; k < 3; ++k) {
                const std::uint32_t u = t.v[k];
                const std::uint32_t v = t.v[(k + 1) % 3];
                if (u >= n || v >= n) continue;
                out.adj[cursor[u]++] = v;
                out.adj[cursor[v]++] = u;
            }
        }
    }
    {
        std::uint32_t write = 0;
        std::uint32_t read_begin = 0;
        for (std::uint32_t i = 0; i < n; ++i) {
            const std::uint32_t read_end = out.adj_offsets[i + 1];
            auto* first = out.adj.data() + read_begin;
            auto* last = out.adj.data() + read_end;
            std::sort(first, last);
            const std::uint32_t begin = write;
            for (auto* p = first; p != last; ++p)
                if (p == first || *p != *(p - 1)) out.adj[write++] = *p;
            read_begin = read_end;
            out.adj_offsets[i] = begin;
        }
        out.adj_offsets[n] = write;
        out.adj.resize(write);
    }

    // Cell polygons: window rect cut by the bisector to each Delaunay neighbor.
    out.poly_offsets.assign(n + 1, 0);
    out.poly_verts.clear();
    out.poly_labels.clear();
    out.poly_verts.reserve(7 * n);
    out.poly_labels.reserve(7 * n);
    out.boundary_flags.assign(n, 0);
    out.cell_bboxes.resize(n);

    // Interior cells come straight from the dual: the circumcenters of the
    // triangle fan around the nucleus, in counterclockwise order, with exact
    // vertex sharing between neighboring cells. Cells whose fan touches a super
    // vertex or leaves the window fall back to halfplane clipping.
    const Window& window = points.window;
    const auto ntris = static_cast<std::uint32_t>(tri_.tris.size());
    cc_.resize(ntris);
    cc_ok_.assign(ntris, 0);
    for (std::uint32_t t = 0; t < ntris; ++t) {
        const auto& tr = tri_.tris[t];
        if (!tri_.is_real(tr)) continue;
        const Vec2 a = tri_.pts[tr.v[0]];
        const Vec2 b = tri_.pts[tr.v[1]];
        const Vec2 c = tri_.pts[tr.v[2]];
        const double bx = b.x - a.x, by = b.y - a.y;
        const double cx = c.x - a.x, cy = c.y - a.y;
        const double d = 2.0 * (bx * cy - by * cx);
        if (d == 0.0) continue;
        const double b2 = bx * bx + by * by;
        const double c2 = cx * cx + cy * cy;
        const Vec2 center{a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d};
        cc_[t] = center;
        cc_ok_[t] = center.x > window.xmin && center.x < window.xmax &&
                    center.y > window.ymin && center.y < window.ymax;
    }

    ConvexPoly ping, pong;
    for (std::uint32_t i = 0; i < n; ++i) {
        const Vec2 pi = out.nuclei[i];
        ConvexPoly* cur = &ping;

        bool dual_ok = true;
        {
            int m = 0;
            const std::uint32_t first = tri_.incident[i];
            std::uint32_t t = first;
            while (true) {
                if (t == kNoTri || !cc_ok_[t]) {
                    dual_ok = false;
                    break;
                }
                const auto& tr = tri_.tris[t];
                if (m >= ConvexPoly::kCap) {
                    dual_ok = false;
                    break;
                }
                const int s = tri_.slot_of(tr, i);
                cur->v[m] = cc_[t];
                cur->label[m] = static_cast<std::int32_t>(tr.v[(s + 2) % 3]);
                ++m;
                t = tr.nbr[(s + 1) % 3];
                if (t == first) break;
            }
            cur->n = m;
            if (m < 3) dual_ok = false;
        }

        if (!dual_ok) {
            ConvexPoly* next = &pong;
            *cur = ConvexPoly::from_box(window);
            for (const std::uint32_t j : out.neighbors(i)) {
                const Vec2 pj = out.nuclei[j];
                const Vec2 normal = pj - pi;
                const Vec2 mid = 0.5 * (pi + pj);
                clip_halfplane_into(*cur, *next, normal, dot(normal, mid),
                                    static_cast<std::int32_t>(j));
                std::swap(cur, next);
                if (cur->n == 0) break;
            }
        }

        const ConvexPoly& poly = *cur;
        std::uint8_t flag = 0;
        for (int k = 0; k < poly.n; ++k) {
            out.poly_verts.push_back(poly.v[k]);
            out.poly_labels.push_back(poly.label[k]);
            if (poly.label[k] < 0) flag = 1;
        }
        out.poly_offsets[i + 1] = static_cast<std::uint32_t>(out.poly_verts.size());
        out.boundary_flags[i] = flag;
        out.cell_bboxes[i] = poly.n > 0 ? poly.bbox() : Box{pi.x, pi.y, pi.x, pi.y};
    }
}

VoronoiComplex build_complex(const PointSet& points) {
    ComplexBuilder builder;
    VoronoiComplex out;
    builder.build(points, out);
    return out;
}

}  // namespace vperc
