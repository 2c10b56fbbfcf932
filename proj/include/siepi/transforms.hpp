#pragma once

// Closed-form analytics of the integrated intensity H_t.
//
// expected_H covers both drivers and every intervention. The Laplace
// transform and MGF are CIR-only and assume phi == 1; they are exponential
// affine in p0 with coefficients solving the Riccati system
//
//   laplace:  B' = lambda - kappa B - sigma^2 B^2 / 2,   E[e^{-lambda H}] = exp(-A - B p0)
//   mgf:      B' = lambda - kappa B + sigma^2 B^2 / 2,   E[e^{+lambda H}] = exp(+A + B p0)
//
// with A' = kappa eta B and A(0) = B(0) = 0 in both cases, so A, B >= 0.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <variant>

#include "siepi/error.hpp"
#include "siepi/intervention.hpp"
#include "siepi/processes.hpp"

namespace siepi {

enum class TransformMode { laplace, mgf };

/// Relative exclusion zone below the critical MGF exponent.
inline constexpr double kCriticalGuard = 1e-9;

struct RiccatiCoefficients {
    double A = 0.0;
    double B = 0.0;
    double gamma = 0.0;
    double lambda = 0.0;
    double t = 0.0;
    TransformMode mode = TransformMode::laplace;
};

/// lambda_c = kappa^2 / (2 sigma^2); +inf when sigma == 0.
inline double critical_lambda(const CIRParams& p) {
    if (p.sigma == 0.0) return std::numeric_limits<double>::infinity();
    return p.kappa * p.kappa / (2.0 * p.sigma * p.sigma);
}

namespace detail {

// Adaptive Simpson on [a, b] with a relative/absolute tolerance.
template <class F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double rel_tol) {
    if (b <= a) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double scale = std::max(std::abs(whole), 1e-300);
    return simpson_step(f, a, b, fa, fm, fb, whole, rel_tol * scale, 50);
}

}  // namespace detail

/// E[H_t] = int_0^t (m + (p0 - m) e^{-r s}) phi(s) ds. Closed form for the
/// constant and exponential interventions (t = +inf allowed for the
/// latter); adaptive Simpson at relative tolerance 1e-10 for tables.
inline double expected_H(const ProcessParams& params, double p0, const InterventionSpec& spec, double t) {
    check_initial_state(params, p0);
    detail::require(t >= 0.0, "expected_H: t must be >= 0");
    const double m = long_term_mean(params);
    const double r = reversion_rate(params);
    const double d = p0 - m;
    if (t == 0.0) return 0.0;

    if (std::holds_alternative<NoIntervention>(spec)) {
        detail::require(std::isfinite(t), "expected_H: E[H_inf] diverges without intervention");
        return m * t - d * std::expm1(-r * t) / r;
    }
    if (const auto* e = std::get_if<ExponentialDecay>(&spec)) {
        const double a = e->alpha;
        if (std::isinf(t)) return m / a + d / (r + a);
        return -m * std::expm1(-a * t) / a - d * std::expm1(-(r + a) * t) / (r + a);
    }

    const auto& knots = std::get<TabulatedIntervention>(spec).knots;
    double upper = t;
    if (std::isinf(t)) {
        detail::require(knots.back().second == 0.0,
                        "expected_H: E[H_inf] diverges unless the tabulated phi ends at 0");
        upper = knots.back().first;
    }
    auto integrand = [&](double s) { return (m + d * std::exp(-r * s)) * intervention_eval(spec, s); };
    // integrate piecewise between knots so each panel is smooth
    double total = 0.0;
    double lo = 0.0;
    for (const auto& [kt, kv] : knots) {
        if (kt <= lo) continue;
        if (kt >= upper) break;
        total += detail::adaptive_simpson(integrand, lo, kt, 1e-10);
        lo = kt;
    }
    total += detail::adaptive_simpson(integrand, lo, upper, 1e-10);
    return total;
}

/// Riccati coefficients (A, B) at (t, lambda).
///
/// With gamma = sqrt(kappa^2 + 2 sigma^2 lambda) (laplace) or
/// sqrt(kappa^2 - 2 sigma^2 lambda) (mgf), and D = (gamma + kappa) r + 2,
/// r = (e^{gamma t} - 1) / gamma:
///
///   B = 2 lambda r / D
///   A = -/+ (2 kappa eta / sigma^2) ln(2 e^{(gamma + kappa) t / 2} / D)
///
/// (minus for laplace, plus for mgf). r and ln D are evaluated without
/// forming e^{gamma t}, and r uses its Taylor series when |gamma t| < 1e-6.
inline RiccatiCoefficients riccati_AB(const CIRParams& p, double lambda, double t, TransformMode mode) {
    detail::require(std::isfinite(lambda) && lambda >= 0.0, "riccati_AB: lambda must be finite and >= 0");
    detail::require(std::isfinite(t) && t >= 0.0, "riccati_AB: t must be finite and >= 0");
    if (mode == TransformMode::mgf) {
        const double lc = critical_lambda(p);
        if (!(lambda < lc * (1.0 - kCriticalGuard))) {
            throw DomainError("mgf: lambda = " + std::to_string(lambda) +
                              " is at or above the critical exponent " + std::to_string(lc));
        }
    }

    RiccatiCoefficients out;
    out.lambda = lambda;
    out.t = t;
    out.mode = mode;
    const double k = p.kappa;

    if (p.sigma == 0.0) {
        // B' = lambda - kappa B in both modes
        out.gamma = k;
        const double decay = -std::expm1(-k * t) / k;
        out.B = lambda * decay;
        out.A = p.eta * lambda * (t - decay);
        return out;
    }

    const double s2 = p.sigma * p.sigma;
    const double sign = mode == TransformMode::laplace ? 1.0 : -1.0;
    const double g = std::sqrt(k * k + sign * 2.0 * s2 * lambda);
    out.gamma = g;
    const double gt = g * t;

    double B = 0.0;
    double logD = 0.0;
    if (gt <= 1.0) {
        const double r = std::abs(gt) < 1e-6 ? t * (1.0 + gt / 2.0 + gt * gt / 6.0) : std::expm1(gt) / g;
        const double D = (g + k) * r + 2.0;
        B = 2.0 * lambda * r / D;
        logD = std::log(D);
    } else {
        // scaled by e^{-gamma t}
        const double q = -std::expm1(-gt) / g;
        const double Dq = (g + k) * q + 2.0 * std::exp(-gt);
        B = 2.0 * lambda * q / Dq;
        logD = gt + std::log(Dq);
    }
    const double log_term = std::numbers::ln2 + 0.5 * (g + k) * t - logD;
    const double c = 2.0 * k * p.eta / s2;
    out.B = B;
    out.A = mode == TransformMode::laplace ? -c * log_term : c * log_term;
    return out;
}

/// Lambda_t(lambda) = ln E[e^{lambda H_t}] = A + B p0 (mgf mode, phi == 1).
inline double log_mgf(const CIRParams& p, double p0, double lambda, double t) {
    check_initial_state(p, p0);
    const auto rc = riccati_AB(p, lambda, t, TransformMode::mgf);
    return rc.A + rc.B * p0;
}

/// E[e^{-lambda H_t} | P_0 = p0] for phi == 1.
inline double laplace_H(const CIRParams& p, double p0, double lambda, double t) {
    check_initial_state(p, p0);
    const auto rc = riccati_AB(p, lambda, t, TransformMode::laplace);
    return std::exp(-rc.A - rc.B * p0);
}

/// E[e^{lambda H_t} | P_0 = p0] for phi == 1 and lambda below the critical
/// exponent.
inline double mgf_H(const CIRParams& p, double p0, double lambda, double t) {
    const double v = std::exp(log_mgf(p, p0, lambda, t));
    if (!std::isfinite(v)) throw RangeError("mgf_H: value overflows double precision");
    return v;
}

}  // namespace siepi
