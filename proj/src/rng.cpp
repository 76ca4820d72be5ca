#include "penlevel/rng.hpp"

#include <cmath>

#include "penlevel/errors.hpp"
#include "penlevel/normal.hpp"

namespace penlevel {

double CounterRng::next_normal() {
    return detail::phi_inv_as241(next_uniform());
}

namespace {

long poisson_mult(CounterRng& rng, double mean) {
    // Knuth's multiplication method; expected mean+1 uniforms.
    const double threshold = std::exp(-mean);
    long k = 0;
    double prod = rng.next_uniform();
    while (prod > threshold) {
        ++k;
        prod *= rng.next_uniform();
    }
    return k;
}

long poisson_ptrs(CounterRng& rng, double mean) {
    // Hormann (1993), transformed rejection with squeeze; valid for mean >= 10.
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);

    for (;;) {
        const double u = rng.next_uniform() - 0.5;
        const double v = rng.next_uniform();
        const double us = 0.5 - std::fabs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<long>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        const long k = static_cast<long>(kf);
        if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
            -mean + kf * loglam - std::lgamma(kf + 1.0)) {
            return k;
        }
    }
}

}  // namespace

long CounterRng::next_poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw DomainError("poisson mean must be finite and nonnegative");
    }
    if (mean == 0.0) return 0;
    if (mean < 10.0) return poisson_mult(*this, mean);
    return poisson_ptrs(*this, mean);
}

}  // namespace penlevel
