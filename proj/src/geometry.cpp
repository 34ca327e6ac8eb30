#include "vperc/geometry.hpp"

namespace vperc {

namespace {
inline void copy_poly_into(const ConvexPoly& src, ConvexPoly& dst) {
    dst.n = src.n;
    for (int i = 0; i < src.n; ++i) {
        dst.v[i] = src.v[i];
        dst.label[i] = src.label[i];
    }
}
}  // namespace

void clip_halfplane_into(const ConvexPoly& src, ConvexPoly& dst, Vec2 normal, double offset,
                         std::int32_t new_label) {
    int m = 0;
    if (src.n > 0) {
        double d_prev = dot(normal, src.v[src.n - 1]) - offset;
        int prev = src.n - 1;
        for (int i = 0; i < src.n; ++i) {
            const double d_cur = dot(normal, src.v[i]) - offset;
            const bool in_prev = d_prev <= 0.0;
            const bool in_cur = d_cur <= 0.0;
            if (in_prev != in_cur) {
                // Edge prev->i crosses the boundary; interpolation keeps
                // coordinates exact along axis-aligned edges.
                const double t = d_prev / (d_prev - d_cur);
                const Vec2 a = src.v[prev];
                const Vec2 b = src.v[i];
                dst.v[m] = {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
                dst.label[m] = in_prev ? new_label : src.label[prev];
                ++m;
            }
            if (in_cur) {
                dst.v[m] = src.v[i];
                dst.label[m] = src.label[i];
                ++m;
            }
            d_prev = d_cur;
            prev = i;
        }
    }
    dst.n = m;
}

void clip_halfplane(ConvexPoly& poly, Vec2 normal, double offset, std::int32_t new_label) {
    ConvexPoly tmp;
    clip_halfplane_into(poly, tmp, normal, offset, new_label);
    copy_poly_into(tmp, poly);
}

void clip_box(ConvexPoly& poly, const Box& b) {
    clip_halfplane(poly, {0, -1}, -b.ymin, -1);
    clip_halfplane(poly, {1, 0}, b.xmax, -2);
    clip_halfplane(poly, {0, 1}, b.ymax, -3);
    clip_halfplane(poly, {-1, 0}, -b.xmin, -4);
}

namespace {

// Halfplane constraints (normal, offset with dot(n,x) <= off kept) for the
// half/quarter clip of a region. Returns count (0, 1 or 2).
int region_halfplanes(const RegionSpec& rg, Vec2 n[2], double off[2]) {
    const Vec2 c = rg.center;
    switch (rg.kind) {
        case RegionKind::HalfAnnulus:
            switch (rg.orientation) {
                case 0: n[0] = {0, -1}; off[0] = -c.y; break;
                case 1: n[0] = {-1, 0}; off[0] = -c.x; break;
                case 2: n[0] = {0, 1}; off[0] = c.y; break;
                default: n[0] = {1, 0}; off[0] = c.x; break;
            }
            return 1;
        case RegionKind::QuarterAnnulus: {
            const bool px = rg.orientation == 0 || rg.orientation == 3;
            const bool py = rg.orientation == 0 || rg.orientation == 1;
            n[0] = px ? Vec2{-1, 0} : Vec2{1, 0};
            off[0] = px ? -c.x : c.x;
            n[1] = py ? Vec2{0, -1} : Vec2{0, 1};
            off[1] = py ? -c.y : c.y;
            return 2;
        }
        default:
            return 0;
    }
}

double clipped_area(const ConvexPoly& src, const Box& b, const Vec2* n, const double* off,
                    int nh) {
    ConvexPoly poly;
    copy_poly_into(src, poly);
    clip_box(poly, b);
    for (int i = 0; i < nh; ++i) clip_halfplane(poly, n[i], off[i], -9);
    return poly.n >= 3 ? poly.area() : 0.0;
}

}  // namespace

double region_overlap_area(const ConvexPoly& poly, const RegionSpec& region) {
    if (poly.n < 3) return 0.0;
    Vec2 n[2];
    double off[2];
    const int nh = region_halfplanes(region, n, off);
    const Box outer = region.outer_box();

    switch (region.kind) {
        case RegionKind::Rect:
            return clipped_area(poly, outer, nullptr, nullptr, 0);
        case RegionKind::Annulus:
        case RegionKind::HalfAnnulus:
        case RegionKind::QuarterAnnulus: {
            const double a_out = clipped_area(poly, outer, n, off, nh);
            if (a_out <= 0.0 || region.r <= 0.0) return a_out;
            const double a_in = clipped_area(poly, region.inner_box(), n, off, nh);
            return a_out - a_in;
        }
        case RegionKind::QuarterComplementAnnulus: {
            // annulus minus the open quadrant `orientation`.
            Vec2 qn[2];
            double qoff[2];
            RegionSpec q = region;
            q.kind = RegionKind::QuarterAnnulus;
            region_halfplanes(q, qn, qoff);
            const double a_out = clipped_area(poly, outer, nullptr, nullptr, 0) -
                                 clipped_area(poly, outer, qn, qoff, 2);
            if (region.r <= 0.0) return a_out;
            const Box inner = region.inner_box();
            const double a_in = clipped_area(poly, inner, nullptr, nullptr, 0) -
                                clipped_area(poly, inner, qn, qoff, 2);
            return a_out - a_in;
        }
    }
    return 0.0;
}

namespace {

// side of the (closed) kept halfplanes a box lies on: +1 inside all, -1 fully
// outside one, 0 straddling
int box_vs_halfplanes(const Box& b, const Vec2* n, const double* off, int nh) {
    int result = 1;
    for (int i = 0; i < nh; ++i) {
        const Vec2 corners[4] = {{b.xmin, b.ymin}, {b.xmax, b.ymin}, {b.xmax, b.ymax},
                                 {b.xmin, b.ymax}};
        int inside = 0;
        for (const Vec2 c : corners) inside += dot(n[i], c) <= off[i];
        if (inside == 0) return -1;
        if (inside < 4) result = 0;
    }
    return result;
}

bool box_inside(const Box& b, const Box& outer) { return outer.contains(b); }

bool box_disjoint(const Box& b, const Box& other) { return !b.overlaps(other); }

}  // namespace

int classify_box_in_region(const Box& b, const RegionSpec& region) {
    const Box outer = region.outer_box();
    if (!b.overlaps(outer)) return -1;
    Vec2 n[2];
    double off[2];
    const int nh = region_halfplanes(region, n, off);

    switch (region.kind) {
        case RegionKind::Rect:
            return box_inside(b, outer) ? 1 : 0;
        case RegionKind::Annulus:
        case RegionKind::HalfAnnulus:
        case RegionKind::QuarterAnnulus: {
            const int hp = nh ? box_vs_halfplanes(b, n, off, nh) : 1;
            if (hp < 0) return -1;
            if (region.r > 0 && region.inner_box().contains(b)) return -1;
            if (hp > 0 && box_inside(b, outer) &&
                (region.r <= 0 || box_disjoint(b, region.inner_box())))
                return 1;
            return 0;
        }
        case RegionKind::QuarterComplementAnnulus: {
            RegionSpec q = region;
            q.kind = RegionKind::QuarterAnnulus;
            Vec2 qn[2];
            double qoff[2];
            region_halfplanes(q, qn, qoff);
            const int in_quadrant = box_vs_halfplanes(b, qn, qoff, 2);
            if (in_quadrant > 0) return -1;  // swallowed by the removed quadrant
            if (region.r > 0 && region.inner_box().contains(b)) return -1;
            if (in_quadrant < 0 && box_inside(b, outer) &&
                (region.r <= 0 || box_disjoint(b, region.inner_box())))
                return 1;
            return 0;
        }
    }
    return 0;
}

bool point_in_region_interior(Vec2 p, const RegionSpec& region) {
    const Box outer = region.outer_box();
    if (!(p.x > outer.xmin && p.x < outer.xmax && p.y > outer.ymin && p.y < outer.ymax))
        return false;
    if (region.kind == RegionKind::Rect) return true;
    if (region.r > 0) {
        const Box in = region.inner_box();
        if (p.x >= in.xmin && p.x <= in.xmax && p.y >= in.ymin && p.y <= in.ymax) return false;
    }
    Vec2 n[2];
    double off[2];
    const int nh = region_halfplanes(region, n, off);
    if (region.kind == RegionKind::QuarterComplementAnnulus) {
        RegionSpec q = region;
        q.kind = RegionKind::QuarterAnnulus;
        Vec2 qn[2];
        double qoff[2];
        region_halfplanes(q, qn, qoff);
        // interior of the kept set: strictly outside the closed quadrant
        return dot(qn[0], p) > qoff[0] || dot(qn[1], p) > qoff[1];
    }
    for (int i = 0; i < nh; ++i)
        if (!(dot(n[i], p) < off[i])) return false;
    return true;
}

bool segment_box_interval(Vec2 p, Vec2 q, const Box& b, double& t0, double& t1) {
    t0 = 0.0;
    t1 = 1.0;
    const double d[2] = {q.x - p.x, q.y - p.y};
    const double lo[2] = {b.xmin, b.ymin};
    const double hi[2] = {b.xmax, b.ymax};
    const double s[2] = {p.x, p.y};
    for (int axis = 0; axis < 2; ++axis) {
        if (d[axis] == 0.0) {
            if (s[axis] < lo[axis] || s[axis] > hi[axis]) return false;
            continue;
        }
        double ta = (lo[axis] - s[axis]) / d[axis];
        double tb = (hi[axis] - s[axis]) / d[axis];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return false;
    }
    return true;
}

namespace {

// Interval of t with dot(n, p + t(q-p)) <= off.
bool halfplane_interval(Vec2 p, Vec2 q, Vec2 n, double off, double& t0, double& t1) {
    const double dp = dot(n, p) - off;
    const double dq = dot(n, q) - off;
    const double slope = dq - dp;
    if (slope == 0.0) {
        if (dp > 0.0) return false;
        return true;  // keeps [t0, t1] untouched
    }
    const double tc = -dp / slope;
    if (slope > 0.0)
        t1 = std::min(t1, tc);
    else
        t0 = std::max(t0, tc);
    return t0 <= t1;
}

constexpr double kTEps = 1e-12;

bool interval_minus_box(Vec2 p, Vec2 q, double t0, double t1, const Box& hole) {
    // True if [t0,t1] keeps positive length outside the (closed) hole box.
    double h0, h1;
    if (!segment_box_interval(p, q, hole, h0, h1)) return t1 - t0 > kTEps;
    const bool covered = h0 <= t0 + kTEps && h1 >= t1 - kTEps;
    if (covered) return false;
    return t1 - t0 > kTEps;
}

}  // namespace

bool segment_meets_region_interior(Vec2 p, Vec2 q, const RegionSpec& region) {
    double t0, t1;
    if (!segment_box_interval(p, q, region.outer_box(), t0, t1)) return false;
    Vec2 n[2];
    double off[2];
    const int nh = region_halfplanes(region, n, off);
    for (int i = 0; i < nh; ++i)
        if (!halfplane_interval(p, q, n[i], off[i], t0, t1)) return false;
    if (t1 - t0 <= kTEps) return false;

    switch (region.kind) {
        case RegionKind::Rect:
            return true;
        case RegionKind::Annulus:
        case RegionKind::HalfAnnulus:
        case RegionKind::QuarterAnnulus:
            if (region.r <= 0.0) return true;
            return interval_minus_box(p, q, t0, t1, region.inner_box());
        case RegionKind::QuarterComplementAnnulus: {
            // Kept interior: {x < cx} ∪ {y < cy} for quadrant 0 (and rotations).
            RegionSpec qr = region;
            qr.kind = RegionKind::QuarterAnnulus;
            Vec2 qn[2];
            double qoff[2];
            region_halfplanes(qr, qn, qoff);
            for (int piece = 0; piece < 2; ++piece) {
                double u0 = t0, u1 = t1;
                // complement piece: dot(qn,x) >= qoff  <=>  dot(-qn,x) <= -qoff
                if (!halfplane_interval(p, q, {-qn[piece].x, -qn[piece].y}, -qoff[piece], u0, u1))
                    continue;
                if (u1 - u0 <= kTEps) continue;
                if (region.r <= 0.0) return true;
                if (interval_minus_box(p, q, u0, u1, region.inner_box())) return true;
            }
            return false;
        }
    }
    return false;
}

}  // namespace vperc
