#include "tradeability/levy_core.hpp"

#include <cmath>
#include <sstream>

namespace tradeability {

namespace {

double laplace_jd(double theta, double b, double sigma, double phi, double lambda) {
    const double drift = b - lambda * std::expm1(phi) - 0.5 * sigma * sigma;
    return drift * theta + 0.5 * sigma * sigma * theta * theta + lambda * std::expm1(phi * theta);
}

double laplace_jd_deriv(double theta, double b, double sigma, double phi, double lambda) {
    const double drift = b - lambda * std::expm1(phi) - 0.5 * sigma * sigma;
    return drift + sigma * sigma * theta + lambda * phi * std::exp(phi * theta);
}

// One-sided root of Phi(theta) = y on (0, inf) or (-inf, 0).
double bracketed_root(double y, const EffectiveModel& em, bool positive_side) {
    const auto f = [&](double t) { return laplace_y1(t, em) - y; };

    double a = 0.0;          // f(0) = -y < 0
    double s = positive_side ? 1.0 : -1.0;
    double b = s;
    int doublings = 0;
    while (f(b) < 0.0) {
        a = b;
        b *= 2.0;
        if (++doublings > 80) {
            std::ostringstream os;
            os << "inverse_laplace_roots: no sign change on "
               << (positive_side ? "(0, " : "(") << b << (positive_side ? ")" : ", 0)")
               << " for level y=" << y;
            throw NumericsError(os.str());
        }
    }
    // order the bracket
    double lo = std::min(a, b), hi = std::max(a, b);
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const bool mid_above = laplace_y1(mid, em) - y >= 0.0;
        // On the positive side f increases through the root; on the negative
        // side it decreases toward 0, so "above y" means beyond the root.
        if (mid_above == positive_side)
            hi = mid;
        else
            lo = mid;
    }
    double root = 0.5 * (lo + hi);
    // Newton polish
    for (int it = 0; it < 8; ++it) {
        const double fr = laplace_y1(root, em) - y;
        const double dfr = laplace_jd_deriv(root, em.b_tilde, em.sigma, em.phi, em.lambda);
        if (dfr == 0.0) break;
        const double step = fr / dfr;
        const double next = root - step;
        if (next <= lo || next >= hi) break;
        root = next;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(root))) break;
    }
    return root;
}

}  // namespace

double laplace_y(double theta, const ProjectModel& m) {
    return laplace_jd(theta, m.b, m.sigma, m.phi, m.lambda);
}

double laplace_y1(double theta, const EffectiveModel& em) {
    return laplace_jd(theta, em.b_tilde, em.sigma, em.phi, em.lambda);
}

EffectiveModel esscher_shift(const ProjectModel& m, const AssetAggregates& a) {
    EffectiveModel em;
    em.b_tilde = m.b + a.rho * a.sigma_x * m.sigma;
    em.sigma = m.sigma;
    em.phi = m.phi;
    em.lambda = m.lambda;
    em.r_tilde = a.r - a.phi_x1;
    return em;
}

LaplaceRoots inverse_laplace_roots(double y, const EffectiveModel& em) {
    if (!(y > 0.0)) throw AdmissibilityError("inverse_laplace_roots: level y must be positive");
    LaplaceRoots roots;
    roots.gamma_plus = bracketed_root(y, em, true);
    roots.gamma_minus = bracketed_root(y, em, false);
    return roots;
}

double project_value_from_cashflow(double c0, double r, double b) {
    if (!(r > b)) {
        std::ostringstream os;
        os << "project value diverges: requires r > b, got r=" << r << ", b=" << b;
        throw AdmissibilityError(os.str());
    }
    return c0 / (r - b);
}

ValidationReport validate(const ProjectModel& m, const AssetAggregates& a, const HorizonSpec& h) {
    ValidationReport rep;
    auto fail = [&rep](const std::string& s) { rep.violations.push_back(s); };

    if (!(m.sigma > 0.0)) fail("sigma must be positive (smooth fit needs a diffusion part)");
    if (!(m.phi <= 0.0)) fail("phi must be non-positive (downward jumps only)");
    if (!(m.lambda >= 0.0)) fail("lambda must be non-negative");
    if (!(m.e0 > 0.0)) fail("e0 must be positive");
    if (!(std::abs(a.rho) <= 1.0)) fail("|rho| must not exceed 1");
    if (!(a.sigma_x >= 0.0)) fail("sigma_x must be non-negative");
    if (!(a.phi_x1 <= a.r)) fail("dividend admissibility requires Phi_X(1) <= r");
    if (!(m.b < a.r)) fail("perpetuity convergence requires b < r");
    if (!(h.value > 0.0))
        fail(h.kind == HorizonSpec::Kind::Deterministic ? "horizon T must be positive"
                                                        : "arrival rate vartheta must be positive");

    const EffectiveModel em = esscher_shift(m, a);
    if (h.kind == HorizonSpec::Kind::Exponential && h.value > 0.0) {
        if (!(h.value + em.r_tilde - em.b_tilde > 0.0))
            fail("exponential-horizon value may be infinite: requires vartheta + r_tilde - Phi^(1)(1) > 0");
    }
    if (em.r_tilde <= em.b_tilde) {
        rep.zero_premium = true;
        rep.notes.push_back("zero-premium regime: r_tilde <= Phi^(1)(1), American equals European");
    }
    return rep;
}

}  // namespace tradeability
