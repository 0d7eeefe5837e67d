#include "anscombe/numerics.hpp"

#include <array>
#include <cmath>

namespace anscombe {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Input: return "input";
        case ErrorKind::Bracket: return "bracket";
        case ErrorKind::Convergence: return "convergence";
        case ErrorKind::Singular: return "singular";
        case ErrorKind::Range: return "range";
        case ErrorKind::Resource: return "resource";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

namespace numerics {

namespace {

template <std::size_t N>
double poly(const std::array<double, N>& c, double x) {
    double acc = c[N - 1];
    for (std::size_t i = N - 1; i-- > 0;) acc = acc * x + c[i];
    return acc;
}

// Wichura (1988), algorithm AS 241, PPND16.
double ppnd16(double p) {
    static constexpr std::array<double, 8> a{
        3.3871328727963666080e0, 1.3314166789178437745e+2, 1.9715909503065514427e+3,
        1.3731693765509461125e+4, 4.5921953931549871457e+4, 6.7265770927008700853e+4,
        3.3430575583588128105e+4, 2.5090809287301226727e+3};
    static constexpr std::array<double, 8> b{
        1.0, 4.2313330701600911252e+1, 6.8718700749205790830e+2, 5.3941960214247511077e+3,
        2.1213794301586595867e+4, 3.9307895800092710610e+4, 2.8729085735721942674e+4,
        5.2264952788528545610e+3};
    static constexpr std::array<double, 8> c{
        1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
        3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
        2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static constexpr std::array<double, 8> d{
        1.0, 2.05319162663775882187e0, 1.67638483018380384940e0, 6.89767334985100004550e-1,
        1.48103976427480074590e-1, 1.51986665636164571966e-2, 5.47593808499534494600e-4,
        1.05075007164441684324e-9};
    static constexpr std::array<double, 8> e{
        6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
        2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
        2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static constexpr std::array<double, 8> f{
        1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1, 1.48753612908506148525e-2,
        7.86869131145613259100e-4, 1.84631831751005468180e-5, 1.42151175831644588870e-7,
        2.04426310338993978564e-15};

    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * poly(a, r) / poly(b, r);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double x;
    if (r <= 5.0) {
        r -= 1.6;
        x = poly(c, r) / poly(d, r);
    } else {
        r -= 5.0;
        x = poly(e, r) / poly(f, r);
    }
    return q < 0.0 ? -x : x;
}

}  // namespace

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw Error(ErrorKind::Domain, "std_normal_quantile: p must lie in (0, 1)");
    }
    double x = ppnd16(p);
    // One Halley step against the erfc-based cdf, measured in whichever tail
    // is small so that the correction does not cancel.
    const double dens = std_normal_pdf(x);
    if (dens > 0.0) {
        const double err = (p < 0.5) ? (std_normal_cdf(x) - p) : ((1.0 - p) - std_normal_sf(x)) ;
        const double u = err / dens;
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

double kummer_m(double a, double b, double z) {
    if (!(a > 0.0) || !(b > 0.0) || !(z >= 0.0) || !std::isfinite(z)) {
        throw Error(ErrorKind::Domain, "kummer_m: require a > 0, b > 0, finite z >= 0");
    }
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < 10000; ++k) {
        term *= (a + k) / (b + k) * z / (k + 1);
        sum += term;
        if (std::fabs(term) < 1e-16 * std::fabs(sum)) {
            return sum;
        }
        if (!std::isfinite(sum)) break;
    }
    throw Error(ErrorKind::Convergence, "kummer_m: series did not converge");
}

}  // namespace numerics
}  // namespace anscombe
