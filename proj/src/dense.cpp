#include <algorithm>
#include <cmath>

#include "vperc/events.hpp"

namespace vperc {

namespace {

bool region_contains_closed(const RegionSpec& rg, Vec2 p) {
    if (!rg.outer_box().contains(p)) return false;
    if (rg.kind == RegionKind::Rect) return true;
    if (rg.r > 0) {
        const Box in = rg.inner_box();
        if (p.x > in.xmin && p.x < in.xmax && p.y > in.ymin && p.y < in.ymax) return false;
    }
    return true;
}

double min_dist(const std::vector<Vec2>& pts, Vec2 u) {
    double best = norm2(u - pts[0]);
    for (std::size_t i = 1; i < pts.size(); ++i) best = std::min(best, norm2(u - pts[i]));
    return std::sqrt(best);
}

// Exact farthest-from-nuclei point for degenerate nuclei sets (one point, two
// points, or all collinear): candidates are the region corners plus bisector
// segments clipped to the region.
double farthest_degenerate(const std::vector<Vec2>& pts, const RegionSpec& rg) {
    std::vector<Vec2> cand;
    const Box ob = rg.outer_box();
    cand.push_back({ob.xmin, ob.ymin});
    cand.push_back({ob.xmax, ob.ymin});
    cand.push_back({ob.xmax, ob.ymax});
    cand.push_back({ob.xmin, ob.ymax});
    if (rg.kind != RegionKind::Rect && rg.r > 0) {
        const Box ib = rg.inner_box();
        cand.push_back({ib.xmin, ib.ymin});
        cand.push_back({ib.xmax, ib.ymin});
        cand.push_back({ib.xmax, ib.ymax});
        cand.push_back({ib.xmin, ib.ymax});
    }
    const double big = 4.0 * ob.diameter();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const Vec2 mid = 0.5 * (pts[i] + pts[j]);
            const Vec2 d = pts[j] - pts[i];
            const double len = norm(d);
            if (len == 0) continue;
            const Vec2 dir{-d.y / len, d.x / len};
            const Vec2 a = mid - big * dir;
            const Vec2 b = mid + big * dir;
            double t0, t1;
            if (!segment_box_interval(a, b, ob, t0, t1)) continue;
            for (double t : {t0, t1}) cand.push_back(a + t * (b - a));
            if (rg.kind != RegionKind::Rect && rg.r > 0) {
                double h0, h1;
                if (segment_box_interval(a, b, rg.inner_box(), h0, h1))
                    for (double t : {h0, h1}) cand.push_back(a + t * (b - a));
            }
        }
    }
    double best = 0;
    for (const Vec2 u : cand)
        if (region_contains_closed(rg, u)) best = std::max(best, min_dist(pts, u));
    return best;
}

}  // namespace

bool detect_dense(const PointSet& points, const RegionSpec& d, double delta) {
    if (!(delta > 0 && delta < 1)) throw ParameterError("dense delta must lie in (0, 1)");
    if (d.kind != RegionKind::Rect && d.kind != RegionKind::Annulus)
        throw ParameterError("dense region must be a rectangle or plane annulus");

    std::vector<Vec2> inside;
    for (const Vec2 p : points.points)
        if (region_contains_closed(d, p)) inside.push_back(p);
    if (inside.empty()) return false;

    const double threshold = delta * d.bbox().diameter();
    const Box ob = d.outer_box();
    const bool has_hole = d.kind == RegionKind::Annulus && d.r > 0;

    double farthest = 0;
    bool handled = false;
    if (inside.size() >= 3) {
        try {
            PointSet sub;
            sub.points = inside;
            sub.window = ob;
            sub.intensity = points.intensity;
            const VoronoiComplex cx = build_complex(sub);
            // The max of the nearest-nucleus distance over D is attained at a
            // Voronoi vertex in D, on a Voronoi edge crossing the hole boundary,
            // or at a region corner — all of which are vertices of the polygons
            // clipped to the outer box, plus hole-side cuts.
            for (std::uint32_t i = 0; i < cx.cell_count(); ++i) {
                const Vec2 nucleus = cx.nuclei[i];
                const std::uint32_t base = cx.poly_offsets[i];
                const int n = cx.polygon_size(i);
                for (int k = 0; k < n; ++k) {
                    const Vec2 v = cx.poly_verts[base + k];
                    if (!region_contains_closed(d, v)) continue;
                    farthest = std::max(farthest, norm(v - nucleus));
                }
                if (has_hole) {
                    const Box ib = d.inner_box();
                    if (!cx.cell_bboxes[i].overlaps(ib)) continue;
                    const Vec2 c0{ib.xmin, ib.ymin}, c1{ib.xmax, ib.ymin}, c2{ib.xmax, ib.ymax},
                        c3{ib.xmin, ib.ymax};
                    const std::pair<Vec2, Vec2> sides[4] = {{c0, c1}, {c1, c2}, {c2, c3}, {c3, c0}};
                    for (const auto& [a, b] : sides) {
                        double t0, t1;
                        if (!detail::segment_in_polygon(cx, i, a, b, t0, t1)) continue;
                        farthest = std::max(farthest, norm(a + t0 * (b - a) - nucleus));
                        farthest = std::max(farthest, norm(a + t1 * (b - a) - nucleus));
                    }
                }
            }
            handled = true;
        } catch (const DegenerateGeometryError&) {
            handled = false;
        }
    }
    if (!handled) farthest = farthest_degenerate(inside, d);

    return farthest < threshold;
}

}  // namespace vperc
