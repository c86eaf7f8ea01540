#include "tradeability/european.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "detail/gauss_legendre.hpp"

namespace tradeability {

using detail::norm_cdf;
using detail::norm_pdf;

namespace {

constexpr int kMaxTerms = 200;
constexpr double kSeriesTol = 1e-14;

struct SeriesEval {
    double price = 0.0;
    double delta = 0.0;
    double gamma = 0.0;
};

// Lognormal mixture obtained by conditioning on the jump count. Conditionally
// on n jumps the log value is Gaussian with mean log(x) + mu*tau + n*phi and
// variance sigma^2*tau, so each term is a forward-style call formula.
SeriesEval euro_series(double tau, double x, const EffectiveModel& em) {
    SeriesEval out;
    const double s = em.sigma, lam = em.lambda, phi = em.phi;
    const double mu = em.log_drift();
    const double st = s * std::sqrt(tau);
    const double lx = std::log(x);
    double w = std::exp(-lam * tau);  // Poisson weight, updated multiplicatively
    for (int n = 0; n < kMaxTerms; ++n) {
        const double d2 = (lx + mu * tau + n * phi) / st;
        const double d1 = d2 + st;
        const double fwd = std::exp(mu * tau + n * phi + 0.5 * s * s * tau);
        out.price += w * (x * fwd * norm_cdf(d1) - norm_cdf(d2));
        out.delta += w * fwd * norm_cdf(d1);
        out.gamma += w * fwd * norm_pdf(d1) / (x * st);
        // fwd bounds the n-th payoff term; phi <= 0 makes the bound decreasing in n
        if (w * x * fwd < kSeriesTol * std::max(1.0, out.price) && n >= lam * tau) break;
        w *= lam * tau / (n + 1);
    }
    const double disc = std::exp(-em.r_tilde * tau);
    out.price *= disc;
    out.delta *= disc;
    out.gamma *= disc;
    return out;
}

}  // namespace

EuroQuote euro_price(double tau, double x, const EffectiveModel& em) {
    if (tau < 0.0) throw AdmissibilityError("euro_price: tau must be non-negative");
    if (x < 0.0) throw AdmissibilityError("euro_price: x must be non-negative");
    if (tau == 0.0) return {std::max(x - 1.0, 0.0), x > 1.0 ? 1.0 : 0.0, EuroMethod::Series};
    if (x == 0.0) return {0.0, 0.0, EuroMethod::Series};
    const SeriesEval ev = euro_series(tau, x, em);
    return {ev.price, ev.delta, EuroMethod::Series};
}

double detail::euro_gamma(double tau, double x, const EffectiveModel& em) {
    if (tau <= 0.0 || x <= 0.0) return 0.0;
    return euro_series(tau, x, em).gamma;
}

EuroQuote euro_price_fourier(double tau, double x, const EffectiveModel& em) {
    if (!(tau > 0.0)) throw AdmissibilityError("euro_price_fourier: tau must be positive");
    if (!(x > 0.0)) throw AdmissibilityError("euro_price_fourier: x must be positive");

    const double s = em.sigma, lam = em.lambda, phi = em.phi;
    const double mu = em.log_drift();
    const double k = -std::log(x);  // log-strike relative to x, strike 1

    // Transform of the damped call: exp(tau*Phi(2+iv)) / ((iv+1)(iv+2)).
    // The integrand decays like exp(-tau*sigma^2*v^2/2), so truncate where the
    // Gaussian envelope is below 1e-20 of its peak.
    const auto transform = [&](double v) {
        const std::complex<double> z(2.0, v);
        const std::complex<double> lap =
            mu * z + 0.5 * s * s * z * z + lam * (std::exp(phi * z) - 1.0);
        const std::complex<double> denom =
            std::complex<double>(0.0, v) + 1.0;
        const std::complex<double> denom2 =
            std::complex<double>(0.0, v) + 2.0;
        return std::exp(std::complex<double>(0.0, -v * k) + tau * lap) / (denom * denom2);
    };
    const auto integrand = [&](double v) { return transform(v).real(); };

    const double v_max = std::sqrt(2.0 * 46.0 / (tau * s * s)) + 20.0;
    bool converged = false;
    const double integral = detail::gl64_adaptive(integrand, 0.0, v_max, 1e-12, 12, &converged);
    if (!converged) {
        std::ostringstream os;
        os << "euro_price_fourier: quadrature did not converge on [0, " << v_max
           << "] for tau=" << tau << ", x=" << x;
        throw NumericsError(os.str());
    }
    const double disc = std::exp(-em.r_tilde * tau);
    const double c = disc * integral / M_PI;  // modified call at log-strike k
    // Price recovers as x^2 * c(k); the delta follows by differentiating in x.
    const auto d_integrand = [&](double v) {
        return (std::complex<double>(0.0, -v) * transform(v)).real();
    };
    const double d_integral = detail::gl64_adaptive(d_integrand, 0.0, v_max, 1e-12, 12);
    const double dc_dk = disc * d_integral / M_PI;
    const double price = x * x * c;
    const double delta = 2.0 * x * c - x * dc_dk;
    return {price, delta, EuroMethod::Fourier};
}

double full_euro_price(double tau, double s, double x, const EffectiveModel& em) {
    if (s < 0.0) throw AdmissibilityError("full_euro_price: s must be non-negative");
    if (s == 0.0) return 0.0;
    return s * euro_price(tau, x, em).price;
}

}  // namespace tradeability
