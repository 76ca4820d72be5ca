#pragma once

namespace penlevel {

// Standard normal CDF Phi(x). Absolute error below 1e-15 for |x| <= 8;
// clamps to [0,1] at the extremes, monotone in x.
double phi_cdf(double x);

// Upper tail 1 - Phi(x), computed without cancellation.
double phi_bar(double x);

// Standard normal density.
double phi_pdf(double x);

// Quantile function Phi^{-1}(q) for q in (0,1). Rational initial guess
// (AS241) polished by Newton steps against phi_cdf, so the round trip
// |phi_cdf(phi_inv(q)) - q| stays below 1e-12 deep into the tails.
// Throws DomainError outside (0,1).
double phi_inv(double q);

namespace detail {
// AS241 PPND16 rational approximation alone, no Newton polish. Used as the
// inverse-CDF transform in the samplers where throughput matters.
double phi_inv_as241(double q);
}  // namespace detail

}  // namespace penlevel
