#include "penlevel/normal.hpp"

#include <cmath>

#include "penlevel/errors.hpp"

namespace penlevel {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
}  // namespace

double phi_cdf(double x) {
    if (std::isnan(x)) throw DomainError("phi_cdf: x is NaN");
    // erfc keeps full relative accuracy in the left tail; the right tail
    // saturates to 1 in double precision around x = 8.3 anyway.
    double v = 0.5 * std::erfc(-x * kInvSqrt2);
    if (v < 0.0) return 0.0;
    if (v > 1.0) return 1.0;
    return v;
}

double phi_bar(double x) { return phi_cdf(-x); }

double phi_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

namespace detail {

double phi_inv_as241(double q) {
    // Wichura, Algorithm AS 241 (PPND16), accurate to ~1 part in 1e16.
    const double split1 = 0.425;
    const double split2 = 5.0;
    const double const1 = 0.180625;
    const double const2 = 1.6;

    const double a0 = 3.3871328727963666080e0;
    const double a1 = 1.3314166789178437745e+2;
    const double a2 = 1.9715909503065514427e+3;
    const double a3 = 1.3731693765509461125e+4;
    const double a4 = 4.5921953931549871457e+4;
    const double a5 = 6.7265770927008700853e+4;
    const double a6 = 3.3430575583588128105e+4;
    const double a7 = 2.5090809287301226727e+3;
    const double b1 = 4.2313330701600911252e+1;
    const double b2 = 6.8718700749205790830e+2;
    const double b3 = 5.3941960214247511077e+3;
    const double b4 = 2.1213794301586595867e+4;
    const double b5 = 3.9307895800092710610e+4;
    const double b6 = 2.8729085735721942674e+4;
    const double b7 = 5.2264952788528545610e+3;

    const double c0 = 1.42343711074968357734e0;
    const double c1 = 4.63033784615654529590e0;
    const double c2 = 5.76949722146069140550e0;
    const double c3 = 3.64784832476320460504e0;
    const double c4 = 1.27045825245236838258e0;
    const double c5 = 2.41780725177450611770e-1;
    const double c6 = 2.27238449892691845833e-2;
    const double c7 = 7.74545014278341407640e-4;
    const double d1 = 2.05319162663775882187e0;
    const double d2 = 1.67638483018380384940e0;
    const double d3 = 6.89767334985100004550e-1;
    const double d4 = 1.48103976427480074590e-1;
    const double d5 = 1.51986665636164571966e-2;
    const double d6 = 5.47593808499534494600e-4;
    const double d7 = 1.05075007164441684324e-9;

    const double e0 = 6.65790464350110377720e0;
    const double e1 = 5.46378491116411436990e0;
    const double e2 = 1.78482653991729133580e0;
    const double e3 = 2.96560571828504891230e-1;
    const double e4 = 2.65321895265761230930e-2;
    const double e5 = 1.24266094738807843860e-3;
    const double e6 = 2.71155556874348757815e-5;
    const double e7 = 2.01033439929228813265e-7;
    const double f1 = 5.99832206555887937690e-1;
    const double f2 = 1.36929880922735805310e-1;
    const double f3 = 1.48753612908506148525e-2;
    const double f4 = 7.86869131145613259100e-4;
    const double f5 = 1.84631831751005468180e-5;
    const double f6 = 1.42151175831644588870e-7;
    const double f7 = 2.04426310338993978564e-15;

    const double p = q - 0.5;
    if (std::fabs(p) <= split1) {
        const double r = const1 - p * p;
        return p *
               (((((((a7 * r + a6) * r + a5) * r + a4) * r + a3) * r + a2) * r + a1) * r + a0) /
               (((((((b7 * r + b6) * r + b5) * r + b4) * r + b3) * r + b2) * r + b1) * r + 1.0);
    }
    double r = p < 0.0 ? q : 1.0 - q;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= split2) {
        r -= const2;
        val = (((((((c7 * r + c6) * r + c5) * r + c4) * r + c3) * r + c2) * r + c1) * r + c0) /
              (((((((d7 * r + d6) * r + d5) * r + d4) * r + d3) * r + d2) * r + d1) * r + 1.0);
    } else {
        r -= split2;
        val = (((((((e7 * r + e6) * r + e5) * r + e4) * r + e3) * r + e2) * r + e1) * r + e0) /
              (((((((f7 * r + f6) * r + f5) * r + f4) * r + f3) * r + f2) * r + f1) * r + 1.0);
    }
    return p < 0.0 ? -val : val;
}

}  // namespace detail

double phi_inv(double q) {
    if (!(q > 0.0 && q < 1.0)) throw DomainError("phi_inv: q must lie in (0,1)");
    double x = detail::phi_inv_as241(q);
    // Newton against our own Phi; usually converges on the first step.
    for (int it = 0; it < 2; ++it) {
        const double pdf = phi_pdf(x);
        if (pdf <= 0.0) break;  // |x| beyond ~38, Phi saturated in doubles
        const double err = (x > 0.0) ? ((1.0 - q) - phi_bar(x)) : (phi_cdf(x) - q);
        const double step = err / pdf;
        x -= step;
        if (std::fabs(step) <= 1e-14 * (1.0 + std::fabs(x))) break;
    }
    return x;
}

}  // namespace penlevel
