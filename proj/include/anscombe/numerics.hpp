#pragma once

#include "anscombe/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace anscombe::numerics {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
inline constexpr double kInvSqrt2 = 0.707106781186547524400844362105;

/// Standard normal density.
inline double std_normal_pdf(double x) noexcept {
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

/// Standard normal distribution function, evaluated through erfc so that
/// both tails keep full relative precision.
inline double std_normal_cdf(double x) noexcept {
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

/// Upper tail 1 - Phi(x) without cancellation.
inline double std_normal_sf(double x) noexcept {
    return 0.5 * std::erfc(x * kInvSqrt2);
}

/// Inverse of std_normal_cdf. Throws ErrorKind::Domain unless 0 < p < 1.
double std_normal_quantile(double p);

/// Kummer's confluent hypergeometric function M(a, b, z) by its power series.
/// Restricted to a, b > 0 and z >= 0; throws ErrorKind::Convergence if the
/// series has not settled after 10000 terms.
double kummer_m(double a, double b, double z);

struct RootBracket {
    double lo = 0.0;
    double hi = 1.0;
    double tol = 1e-12;   // absolute bracket width at termination
    int max_iter = 200;
};

/// Brent-style bracketed root finder: secant / inverse quadratic steps with a
/// bisection fallback whenever the interpolated step is not trustworthy.
/// Deterministic for a given f and bracket.
template <class F>
double find_root(F&& f, const RootBracket& bracket) {
    if (!(bracket.lo < bracket.hi) || !(bracket.tol > 0.0)) {
        throw Error(ErrorKind::Domain, "find_root: require lo < hi and tol > 0");
    }
    double a = bracket.lo;
    double b = bracket.hi;
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (std::isnan(fa) || std::isnan(fb) || (fa > 0.0) == (fb > 0.0)) {
        std::ostringstream os;
        os << "find_root: no sign change on [" << a << ", " << b << "] (f = " << fa
           << ", " << fb << ")";
        throw Error(ErrorKind::Bracket, os.str());
    }

    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    for (int iter = 0; iter < bracket.max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * eps * std::fabs(b) + 0.5 * bracket.tol;
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) {
            return b;
        }
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double p;
            double q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::fabs(d) > tol1) ? d : std::copysign(tol1, xm);
        fb = f(b);
        if (std::isnan(fb)) {
            throw Error(ErrorKind::Convergence, "find_root: function returned NaN");
        }
    }
    throw Error(ErrorKind::Convergence, "find_root: iteration cap exceeded");
}

/// Grows the right end of [lo, hi] geometrically until f changes sign.
/// Returns the bracket; throws ErrorKind::Bracket after max_doublings.
template <class F>
std::pair<double, double> expand_bracket_right(F&& f, double lo, double hi,
                                               int max_doublings = 30) {
    double flo = f(lo);
    for (int i = 0; i <= max_doublings; ++i) {
        const double fhi = f(hi);
        if ((flo > 0.0) != (fhi > 0.0) || fhi == 0.0) {
            return {lo, hi};
        }
        lo = hi;
        flo = fhi;
        hi *= 2.0;
    }
    throw Error(ErrorKind::Bracket, "expand_bracket_right: no sign change found");
}

}  // namespace anscombe::numerics
