#pragma once

#include "tradeability/levy_core.hpp"

namespace tradeability {

enum class EuroMethod { Series, Fourier };

/// Scaled European switching-option quote: price C_E*(tau, x) and its spatial
/// derivative. The strike is fixed at 1 (the per-unit cost of switching).
struct EuroQuote {
    double price;
    double delta;
    EuroMethod method;
};

/// Price by conditioning on the Poisson jump count: a lognormal mixture whose
/// n-th term is a forward-style call value weighted by the Poisson mass.
/// The series is truncated once the remaining weight cannot move the sum by
/// one part in 1e14 (at most 200 terms). tau = 0 returns the payoff (x-1)^+.
EuroQuote euro_price(double tau, double x, const EffectiveModel& em);

/// Same value via Fourier inversion of the damped (modified) call transform,
/// evaluated by adaptive Gauss-Legendre panels on the decaying contour.
/// Requires tau > 0 and x > 0. Used to cross-validate the series.
EuroQuote euro_price_fourier(double tau, double x, const EffectiveModel& em);

/// Unscaled option value: linear in the asset leg, s * C_E*(tau, x).
double full_euro_price(double tau, double s, double x, const EffectiveModel& em);

namespace detail {
/// Standard normal CDF.
inline double norm_cdf(double z) { return 0.5 * std::erfc(-z * 0.7071067811865475244); }
/// Standard normal PDF.
inline double norm_pdf(double z) { return 0.3989422804014326779 * std::exp(-0.5 * z * z); }

/// Second spatial derivative of the series price (used by residual checks).
double euro_gamma(double tau, double x, const EffectiveModel& em);
}  // namespace detail

}  // namespace tradeability
