#include "vperc/region_graph.hpp"

#include <algorithm>
#include <cmath>

namespace vperc {

namespace {

constexpr double kAreaEps = 1e-12;
constexpr double kLenEps = 1e-12;

struct Curve {
    std::vector<std::pair<Vec2, Vec2>> segs;
    std::vector<double> offset;  // cumulative arclength at segment start
    double total = 0;

    void add(Vec2 a, Vec2 b) {
        offset.push_back(total);
        segs.push_back({a, b});
        total += norm(b - a);
    }
};

// Corners of the square of half-side h around c, counterclockwise from SE.
// 0:SE 1:NE 2:NW 3:SW.
Vec2 corner(Vec2 c, double h, int k) {
    switch (k & 3) {
        case 0: return {c.x + h, c.y - h};
        case 1: return {c.x + h, c.y + h};
        case 2: return {c.x - h, c.y + h};
        default: return {c.x - h, c.y - h};
    }
}

Vec2 side_mid(Vec2 c, double h, int k) {
    // 0:E 1:N 2:W 3:S midpoints.
    switch (k & 3) {
        case 0: return {c.x + h, c.y};
        case 1: return {c.x, c.y + h};
        case 2: return {c.x - h, c.y};
        default: return {c.x, c.y - h};
    }
}

// The boundary walk of the square of half-side h restricted to the region's
// angular sector, counterclockwise.
Curve square_walk(const RegionSpec& rg, double h) {
    Curve cv;
    const Vec2 c = rg.center;
    if (h <= 0) return cv;
    switch (rg.kind) {
        case RegionKind::Rect:
            break;
        case RegionKind::Annulus:
            for (int k = 0; k < 4; ++k) cv.add(corner(c, h, k), corner(c, h, k + 1));
            break;
        case RegionKind::HalfAnnulus: {
            // Kept side 0:+y 1:+x 2:-y 3:-x. CCW walk enters the half plane at a
            // side midpoint and leaves at the opposite one.
            const int s = (4 - rg.orientation) & 3;
            cv.add(side_mid(c, h, s), corner(c, h, s + 1));
            cv.add(corner(c, h, s + 1), corner(c, h, s + 2));
            cv.add(corner(c, h, s + 2), side_mid(c, h, (s + 2) & 3));
            break;
        }
        case RegionKind::QuarterAnnulus: {
            const int q = rg.orientation;  // quadrant 0:(+,+) 1:(-,+) 2:(-,-) 3:(+,-)
            cv.add(side_mid(c, h, q), corner(c, h, q + 1));
            cv.add(corner(c, h, q + 1), side_mid(c, h, (q + 1) & 3));
            break;
        }
        case RegionKind::QuarterComplementAnnulus: {
            // Everything except the open quadrant q, CCW.
            const int q = rg.orientation;
            cv.add(side_mid(c, h, (q + 1) & 3), corner(c, h, q + 2));
            cv.add(corner(c, h, q + 2), corner(c, h, q + 3));
            cv.add(corner(c, h, q + 3), corner(c, h, q + 4));
            cv.add(corner(c, h, q + 4), side_mid(c, h, q));
            break;
        }
    }
    return cv;
}

}  // namespace

bool detail::segment_in_polygon(const VoronoiComplex& cx, std::uint32_t cell, Vec2 a, Vec2 b,
                                double& t0, double& t1) {
    t0 = 0.0;
    t1 = 1.0;
    const std::uint32_t base = cx.poly_offsets[cell];
    const int n = cx.polygon_size(cell);
    if (n < 3) return false;
    const Vec2 d = b - a;
    for (int k = 0; k < n; ++k) {
        const Vec2 u = cx.poly_verts[base + k];
        const Vec2 w = cx.poly_verts[base + (k + 1) % n];
        const Vec2 e = w - u;
        const double c0 = e.x * (a.y - u.y) - e.y * (a.x - u.x);
        const double c1 = e.x * d.y - e.y * d.x;
        // inside: c0 + t*c1 >= 0
        if (c1 == 0.0) {
            if (c0 < 0.0) return false;
            continue;
        }
        const double tc = -c0 / c1;
        if (c1 > 0.0)
            t0 = std::max(t0, tc);
        else
            t1 = std::min(t1, tc);
        if (t0 >= t1) return false;
    }
    return t1 - t0 > 0.0;
}

namespace {
using detail::segment_in_polygon;
}  // namespace

void build_region_graph(const VoronoiComplex& complex, const RegionSpec& region,
                        RegionGraph& out, const RegionGraphOptions& opts) {
    if (!region_in_safe_zone(region, complex.window))
        throw SafeZoneError("region extends beyond the window's safe zone");

    out.complex = &complex;
    out.region = region;
    out.cells.clear();
    out.local_of.assign(complex.cell_count(), kNoCell);
    out.inner_arcs.clear();
    out.cyclic = region.kind == RegionKind::Annulus;
    out.degenerate_empty = region.is_annulus_kind() && region.r == region.R;

    const std::size_t n = complex.cell_count();
    const Box region_bbox = region.bbox();

    static thread_local std::vector<std::uint8_t> fully_inside;
    fully_inside.clear();
    if (!out.degenerate_empty) {
        for (std::uint32_t i = 0; i < n; ++i) {
            if (!complex.cell_bboxes[i].overlaps(region_bbox)) continue;
            const int cls = classify_box_in_region(complex.cell_bboxes[i], region);
            if (cls < 0) continue;
            if (cls == 0) {
                const ConvexPoly poly = complex.polygon(i);
                if (region_overlap_area(poly, region) <= kAreaEps) continue;
            }
            if (opts.discard_boundary_flagged && complex.boundary_flags[i])
                throw ReplicateDiscard();
            out.local_of[i] = static_cast<std::uint32_t>(out.cells.size());
            out.cells.push_back(i);
            fully_inside.push_back(cls > 0);
        }
    }
    const auto nloc = static_cast<std::uint32_t>(out.cells.size());

    // Region-clipped adjacency.
    static thread_local std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    edges.clear();
    for (std::uint32_t li = 0; li < nloc; ++li) {
        const std::uint32_t gi = out.cells[li];
        for (const std::uint32_t gj : complex.neighbors(gi)) {
            if (gj <= gi) continue;
            const std::uint32_t lj = out.local_of[gj];
            if (lj == kNoCell) continue;
            // a shared Voronoi edge is part of both cells, so a cell wholly
            // inside the region brings all its edges with it
            if (fully_inside[li] || fully_inside[lj]) {
                edges.push_back({li, lj});
                continue;
            }
            const auto seg = complex.shared_edge(gi, gj);
            if (!seg) continue;
            if (point_in_region_interior(seg->first, region) ||
                point_in_region_interior(seg->second, region) ||
                segment_meets_region_interior(seg->first, seg->second, region))
                edges.push_back({li, lj});
        }
    }
    out.nbr_offsets.assign(nloc + 1, 0);
    for (const auto& [u, v] : edges) {
        ++out.nbr_offsets[u + 1];
        ++out.nbr_offsets[v + 1];
    }
    for (std::uint32_t i = 0; i < nloc; ++i) out.nbr_offsets[i + 1] += out.nbr_offsets[i];
    out.nbrs.assign(out.nbr_offsets[nloc], 0);
    {
        static thread_local std::vector<std::uint32_t> cursor;
        cursor.assign(out.nbr_offsets.begin(), out.nbr_offsets.end() - 1);
        for (const auto& [u, v] : edges) {
            out.nbrs[cursor[u]++] = v;
            out.nbrs[cursor[v]++] = u;
        }
    }

    // Touch flags and inner-boundary attachment arcs.
    out.touch.assign(nloc, 0);
    if (region.kind == RegionKind::Rect) {
        const Box b = region.outer_box();
        const Vec2 bl{b.xmin, b.ymin}, br{b.xmax, b.ymin}, tr{b.xmax, b.ymax}, tl{b.xmin, b.ymax};
        const std::pair<Vec2, Vec2> sides[4] = {{bl, tl}, {br, tr}, {tl, tr}, {bl, br}};
        const std::uint8_t bits[4] = {kTouchLeft, kTouchRight, kTouchTop, kTouchBottom};
        for (std::uint32_t li = 0; li < nloc; ++li) {
            const std::uint32_t gi = out.cells[li];
            for (int s = 0; s < 4; ++s) {
                double t0, t1;
                if (segment_in_polygon(complex, gi, sides[s].first, sides[s].second, t0, t1) &&
                    (t1 - t0) * norm(sides[s].second - sides[s].first) > kLenEps)
                    out.touch[li] |= bits[s];
            }
        }
        return;
    }

    const Curve inner = square_walk(region, region.r);
    const Curve outer = square_walk(region, region.R);
    const double arc_eps = kLenEps * std::max(1.0, region.R);

    for (std::uint32_t li = 0; li < nloc; ++li) {
        const std::uint32_t gi = out.cells[li];
        const Box& cb = complex.cell_bboxes[gi];
        for (std::size_t s = 0; s < inner.segs.size(); ++s) {
            const auto& [a, b] = inner.segs[s];
            Box sb{std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x), std::max(a.y, b.y)};
            if (!cb.overlaps(sb)) continue;
            double t0, t1;
            if (!segment_in_polygon(complex, gi, a, b, t0, t1)) continue;
            const double len = (t1 - t0) * norm(b - a);
            if (len <= arc_eps) continue;
            out.touch[li] |= kTouchInner;
            out.inner_arcs.push_back({inner.offset[s] + t0 * norm(b - a),
                                      inner.offset[s] + t1 * norm(b - a), li});
        }
        for (std::size_t s = 0; s < outer.segs.size(); ++s) {
            const auto& [a, b] = outer.segs[s];
            Box sb{std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x), std::max(a.y, b.y)};
            if (!cb.overlaps(sb)) continue;
            double t0, t1;
            if (!segment_in_polygon(complex, gi, a, b, t0, t1)) continue;
            if ((t1 - t0) * norm(b - a) > arc_eps) {
                out.touch[li] |= kTouchOuter;
                break;
            }
        }
    }

    if (region.r == 0.0 && !out.degenerate_empty && nloc > 0) {
        // Degenerate inner boundary: the walk is the single center point.
        const std::uint32_t gc = complex.cell_of(region.center);
        const std::uint32_t lc = out.local_of[gc];
        if (lc != kNoCell) {
            out.touch[lc] |= kTouchInner;
            out.inner_arcs.push_back({0.0, 0.0, lc});
        }
    }

    std::sort(out.inner_arcs.begin(), out.inner_arcs.end(),
              [](const RegionGraph::Arc& x, const RegionGraph::Arc& y) {
                  return x.t0 < y.t0 || (x.t0 == y.t0 && x.t1 < y.t1);
              });
}

RegionGraph build_region_graph(const VoronoiComplex& complex, const RegionSpec& region,
                               const RegionGraphOptions& opts) {
    RegionGraph out;
    build_region_graph(complex, region, out, opts);
    return out;
}

CellsMeeting cells_meeting(const VoronoiComplex& complex, const RegionSpec& region) {
    RegionGraph rg;
    build_region_graph(complex, region, rg);
    CellsMeeting res;
    res.ids = rg.cells;
    res.touch = rg.touch;
    return res;
}

}  // namespace vperc
