#pragma once

// Orientation and in-circumcircle predicates with certified sign.
// Fast path: plain double evaluation against a forward error bound, inlined
// into the callers; when the bound cannot certify the sign, the determinant is
// recomputed in exact rational arithmetic out of line. Topological decisions in
// the triangulation depend on these signs being exact; everything metric
// elsewhere is ordinary doubles.

#include <cmath>
#include <limits>

namespace vperc {

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon() / 2.0;  // 2^-53
inline constexpr double kCcwErrBound = (3.0 + 16.0 * kEps) * kEps;
inline constexpr double kIccErrBound = (10.0 + 96.0 * kEps) * kEps;

int orient2d_exact(double ax, double ay, double bx, double by, double cx, double cy);
int in_circle_exact(double ax, double ay, double bx, double by, double cx, double cy, double dx,
                    double dy);

}  // namespace detail

/// > 0 if (a,b,c) make a left turn (counterclockwise), < 0 clockwise, 0 collinear.
inline int orient2d(double ax, double ay, double bx, double by, double cx, double cy) {
    const double detleft = (ax - cx) * (by - cy);
    const double detright = (ay - cy) * (bx - cx);
    const double det = detleft - detright;

    double detsum;
    if (detleft > 0.0) {
        if (detright <= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
        detsum = detleft + detright;
    } else if (detleft < 0.0) {
        if (detright >= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
        detsum = -detleft - detright;
    } else {
        return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
    }
    const double errbound = detail::kCcwErrBound * detsum;
    if (det > errbound) return 1;
    if (-det > errbound) return -1;
    return detail::orient2d_exact(ax, ay, bx, by, cx, cy);
}

/// For a counterclockwise triangle (a,b,c): > 0 if d is strictly inside the
/// circumcircle, < 0 strictly outside, 0 on the circle.
inline int in_circle(double ax, double ay, double bx, double by, double cx, double cy, double dx,
                     double dy) {
    const double adx = ax - dx;
    const double ady = ay - dy;
    const double bdx = bx - dx;
    const double bdy = by - dy;
    const double cdx = cx - dx;
    const double cdy = cy - dy;

    const double bdxcdy = bdx * cdy;
    const double cdxbdy = cdx * bdy;
    const double alift = adx * adx + ady * ady;

    const double cdxady = cdx * ady;
    const double adxcdy = adx * cdy;
    const double blift = bdx * bdx + bdy * bdy;

    const double adxbdy = adx * bdy;
    const double bdxady = bdx * ady;
    const double clift = cdx * cdx + cdy * cdy;

    const double det =
        alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);

    const double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * alift +
                             (std::fabs(cdxady) + std::fabs(adxcdy)) * blift +
                             (std::fabs(adxbdy) + std::fabs(bdxady)) * clift;
    const double errbound = detail::kIccErrBound * permanent;
    if (det > errbound) return 1;
    if (-det > errbound) return -1;
    return detail::in_circle_exact(ax, ay, bx, by, cx, cy, dx, dy);
}

}  // namespace vperc
