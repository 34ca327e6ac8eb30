#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "vperc/errors.hpp"

namespace vperc {

struct Vec2 {
    double x = 0;
    double y = 0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::sqrt(norm2(a)); }

/// Axis-aligned box; doubles as the sampling window.
struct Box {
    double xmin = 0, ymin = 0, xmax = 0, ymax = 0;

    bool valid() const { return xmax > xmin && ymax > ymin && std::isfinite(area()); }
    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double area() const { return width() * height(); }
    double diameter() const { return std::hypot(width(), height()); }
    Vec2 center() const { return {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)}; }
    bool contains(Vec2 p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
    bool contains(const Box& b) const {
        return b.xmin >= xmin && b.xmax <= xmax && b.ymin >= ymin && b.ymax <= ymax;
    }
    bool overlaps(const Box& b) const {
        return b.xmin <= xmax && b.xmax >= xmin && b.ymin <= ymax && b.ymax >= ymin;
    }
    Box expanded(double m) const { return {xmin - m, ymin - m, xmax + m, ymax + m}; }
};

using Window = Box;

/// Margin beyond the largest region of interest; the safe zone is the window
/// shrunk by this amount. A Voronoi cell reaching that far past its nucleus has
/// probability exp(-Omega(m^2)), and violations are caught at runtime through
/// boundary flags.
inline double padding_margin(double region_diameter) {
    const double l = std::log(std::max(region_diameter, 1.0));
    return std::max(10.0, 4.0 * std::sqrt(std::max(0.0, l)));
}

enum class RegionKind : std::uint8_t {
    Rect,                      // [cx-l1, cx+l1] x [cy-l2, cy+l2]
    Annulus,                   // B_R \ B_r around center
    HalfAnnulus,               // annulus clipped to a half plane through center
    QuarterAnnulus,            // annulus clipped to a quadrant
    QuarterComplementAnnulus,  // annulus minus the open quadrant
};

/// Geometric support of an event: rectangle or one of the annulus variants.
struct RegionSpec {
    RegionKind kind = RegionKind::Rect;
    Vec2 center{0, 0};
    double r = 0;        // annulus kinds
    double R = 0;        // annulus kinds
    double lambda1 = 0;  // rect half-width
    double lambda2 = 0;  // rect half-height
    // For HalfAnnulus: kept side 0:+y 1:+x 2:-y 3:-x. For quarter kinds: quadrant
    // 0:(+x,+y) 1:(-x,+y) 2:(-x,-y) 3:(+x,-y).
    int orientation = 0;

    static RegionSpec rectangle(Vec2 center, double lambda1, double lambda2) {
        if (!(lambda1 > 0) || !(lambda2 > 0))
            throw ParameterError("rectangle region requires lambda1, lambda2 > 0");
        RegionSpec s;
        s.kind = RegionKind::Rect;
        s.center = center;
        s.lambda1 = lambda1;
        s.lambda2 = lambda2;
        return s;
    }

    static RegionSpec annulus(Vec2 center, double r, double R,
                              RegionKind kind = RegionKind::Annulus, int orientation = 0) {
        if (!(r >= 0) || !(R >= r)) throw ParameterError("annulus region requires 0 <= r <= R");
        if (kind == RegionKind::Rect) throw ParameterError("annulus() cannot build a rectangle");
        if (orientation < 0 || orientation > 3)
            throw ParameterError("orientation must be in 0..3");
        RegionSpec s;
        s.kind = kind;
        s.center = center;
        s.r = r;
        s.R = R;
        s.orientation = orientation;
        return s;
    }

    bool is_annulus_kind() const { return kind != RegionKind::Rect; }

    Box outer_box() const {
        if (kind == RegionKind::Rect)
            return {center.x - lambda1, center.y - lambda2, center.x + lambda1,
                    center.y + lambda2};
        return {center.x - R, center.y - R, center.x + R, center.y + R};
    }
    Box inner_box() const {
        return {center.x - r, center.y - r, center.x + r, center.y + r};
    }

    /// Tight bounding box of the region itself.
    Box bbox() const {
        Box b = outer_box();
        switch (kind) {
            case RegionKind::Rect:
            case RegionKind::Annulus:
            case RegionKind::QuarterComplementAnnulus:
                return b;
            case RegionKind::HalfAnnulus:
                switch (orientation) {
                    case 0: b.ymin = center.y; break;
                    case 1: b.xmin = center.x; break;
                    case 2: b.ymax = center.y; break;
                    default: b.xmax = center.x; break;
                }
                return b;
            case RegionKind::QuarterAnnulus: {
                const bool px = orientation == 0 || orientation == 3;
                const bool py = orientation == 0 || orientation == 1;
                if (px) b.xmin = center.x; else b.xmax = center.x;
                if (py) b.ymin = center.y; else b.ymax = center.y;
                return b;
            }
        }
        return b;
    }

    double diameter() const { return bbox().diameter(); }
};

/// Window sized so the region sits inside the safe zone with the standard
/// margin (plus a hair so the containment check below is rounding-proof).
inline Window window_for_region(const RegionSpec& region) {
    return region.bbox().expanded(padding_margin(region.diameter()) + 1e-6);
}

inline bool region_in_safe_zone(const RegionSpec& region, const Window& window) {
    const double m = padding_margin(region.diameter());
    return window.expanded(-m).contains(region.bbox());
}

/// Convex polygon with per-edge provenance labels (label[i] belongs to the edge
/// from v[i] to v[i+1]); labels >= 0 name the neighbor whose bisector cut the
/// edge, negative labels name window/box sides.
struct ConvexPoly {
    static constexpr int kCap = 64;
    Vec2 v[kCap];
    std::int32_t label[kCap];
    int n = 0;

    static ConvexPoly from_box(const Box& b) {
        ConvexPoly p;
        p.n = 4;
        p.v[0] = {b.xmin, b.ymin};
        p.v[1] = {b.xmax, b.ymin};
        p.v[2] = {b.xmax, b.ymax};
        p.v[3] = {b.xmin, b.ymax};
        p.label[0] = -1;  // bottom
        p.label[1] = -2;  // right
        p.label[2] = -3;  // top
        p.label[3] = -4;  // left
        return p;
    }

    double area() const {
        double s = 0;
        for (int i = 0; i < n; ++i) {
            const Vec2 a = v[i];
            const Vec2 b = v[(i + 1) % n];
            s += a.x * b.y - b.x * a.y;
        }
        return 0.5 * s;
    }

    Box bbox() const {
        Box b{v[0].x, v[0].y, v[0].x, v[0].y};
        for (int i = 1; i < n; ++i) {
            b.xmin = std::min(b.xmin, v[i].x);
            b.xmax = std::max(b.xmax, v[i].x);
            b.ymin = std::min(b.ymin, v[i].y);
            b.ymax = std::max(b.ymax, v[i].y);
        }
        return b;
    }
};

/// Keep the side {x : dot(normal, x) <= offset}. Sutherland-Hodgman step.
void clip_halfplane(ConvexPoly& poly, Vec2 normal, double offset, std::int32_t new_label);

/// Same clip, writing the result into dst (src and dst must differ).
void clip_halfplane_into(const ConvexPoly& src, ConvexPoly& dst, Vec2 normal, double offset,
                         std::int32_t new_label);

/// Clip to an axis-aligned box (labels -1..-4 for bottom/right/top/left).
void clip_box(ConvexPoly& poly, const Box& b);

/// Area of poly ∩ region (exactly zero if the polygon misses the region).
double region_overlap_area(const ConvexPoly& poly, const RegionSpec& region);

/// Bounding-box classification against a region: +1 the box lies inside the
/// region (positive overlap guaranteed for anything with area in it), -1 the
/// intersection has measure zero, 0 undecided.
int classify_box_in_region(const Box& b, const RegionSpec& region);

/// p lies in the topological interior of the region.
bool point_in_region_interior(Vec2 p, const RegionSpec& region);

/// Closed parameter interval [t0, t1] of {p + t (q - p), t in [0,1]} inside the box;
/// returns false if empty.
bool segment_box_interval(Vec2 p, Vec2 q, const Box& b, double& t0, double& t1);

/// True if the open part of segment pq meets the interior of the region.
bool segment_meets_region_interior(Vec2 p, Vec2 q, const RegionSpec& region);

}  // namespace vperc
