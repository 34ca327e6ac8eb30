#include "vperc/predicates.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace vperc::detail {

namespace {

using Rational = boost::multiprecision::cpp_rational;

int sign_of(const Rational& v) {
    if (v > 0) return 1;
    if (v < 0) return -1;
    return 0;
}

}  // namespace

int orient2d_exact(double ax, double ay, double bx, double by, double cx, double cy) {
    const Rational rax(ax), ray(ay), rbx(bx), rby(by), rcx(cx), rcy(cy);
    const Rational det = (rbx - rax) * (rcy - ray) - (rby - ray) * (rcx - rax);
    return sign_of(det);
}

int in_circle_exact(double ax, double ay, double bx, double by, double cx, double cy, double dx,
                    double dy) {
    const Rational adx = Rational(ax) - Rational(dx);
    const Rational ady = Rational(ay) - Rational(dy);
    const Rational bdx = Rational(bx) - Rational(dx);
    const Rational bdy = Rational(by) - Rational(dy);
    const Rational cdx = Rational(cx) - Rational(dx);
    const Rational cdy = Rational(cy) - Rational(dy);
    const Rational alift = adx * adx + ady * ady;
    const Rational blift = bdx * bdx + bdy * bdy;
    const Rational clift = cdx * cdx + cdy * cdy;
    const Rational det = alift * (bdx * cdy - bdy * cdx) + blift * (cdx * ady - cdy * adx) +
                         clift * (adx * bdy - ady * bdx);
    return sign_of(det);
}

}  // namespace vperc::detail
