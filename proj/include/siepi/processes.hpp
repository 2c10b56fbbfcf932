#pragma once

#include <cmath>
#include <string>
#include <variant>

#include "siepi/error.hpp"

namespace siepi {

// Jacobi driver on [0, a]:  dP = theta (mu - P) dt + sigma sqrt(P (a - P)) dW
struct JacobiParams {
    double theta = 0.0;
    double mu = 0.0;
    double sigma = 0.0;
    double a = 0.0;
    // 2 theta mu >= sigma^2 a  and  2 theta (a - mu) >= sigma^2 a
    bool boundary_nonattainable = false;
};

// CIR driver on [0, inf):  dP = kappa (eta - P) dt + sigma sqrt(P) dW
struct CIRParams {
    double kappa = 0.0;
    double eta = 0.0;
    double sigma = 0.0;
    // 2 kappa eta > sigma^2
    bool feller = false;
};

using ProcessParams = std::variant<JacobiParams, CIRParams>;

struct StationaryMoments {
    double mean = 0.0;
    double variance = 0.0;
};

inline JacobiParams validate_jacobi(double theta, double mu, double sigma, double a) {
    using detail::require;
    require(std::isfinite(theta) && std::isfinite(mu) && std::isfinite(sigma) && std::isfinite(a),
            "jacobi: parameters must be finite");
    require(theta > 0.0, "jacobi: theta must be > 0");
    require(sigma >= 0.0, "jacobi: sigma must be >= 0");
    require(a > 0.0, "jacobi: a must be > 0");
    require(mu > 0.0 && mu < a, "jacobi: mu must lie in (0, a)");
    const double s2a = sigma * sigma * a;
    return JacobiParams{theta, mu, sigma, a,
                        2.0 * theta * mu >= s2a && 2.0 * theta * (a - mu) >= s2a};
}

inline CIRParams validate_cir(double kappa, double eta, double sigma) {
    using detail::require;
    require(std::isfinite(kappa) && std::isfinite(eta) && std::isfinite(sigma),
            "cir: parameters must be finite");
    require(kappa > 0.0, "cir: kappa must be > 0");
    require(eta > 0.0, "cir: eta must be > 0");
    require(sigma >= 0.0, "cir: sigma must be >= 0");
    return CIRParams{kappa, eta, sigma, 2.0 * kappa * eta > sigma * sigma};
}

inline double reversion_rate(const JacobiParams& p) { return p.theta; }
inline double reversion_rate(const CIRParams& p) { return p.kappa; }
inline double reversion_rate(const ProcessParams& p) {
    return std::visit([](const auto& q) { return reversion_rate(q); }, p);
}

inline double long_term_mean(const JacobiParams& p) { return p.mu; }
inline double long_term_mean(const CIRParams& p) { return p.eta; }
inline double long_term_mean(const ProcessParams& p) {
    return std::visit([](const auto& q) { return long_term_mean(q); }, p);
}

inline std::string kind_name(const ProcessParams& p) {
    return std::holds_alternative<JacobiParams>(p) ? "jacobi" : "cir";
}

/// Initial values must sit in the open state space: (0, a) for Jacobi,
/// (0, inf) for CIR.
inline void check_initial_state(const JacobiParams& p, double p0) {
    detail::require(std::isfinite(p0) && p0 > 0.0 && p0 < p.a, "jacobi: p0 must lie in (0, a)");
}
inline void check_initial_state(const CIRParams&, double p0) {
    detail::require(std::isfinite(p0) && p0 > 0.0, "cir: p0 must be > 0");
}
inline void check_initial_state(const ProcessParams& p, double p0) {
    std::visit([p0](const auto& q) { check_initial_state(q, p0); }, p);
}

/// E[P_t | P_0 = p0] = m + (p0 - m) exp(-rate t); t may be +inf.
template <class Params>
double mean_at(const Params& params, double p0, double t) {
    check_initial_state(params, p0);
    detail::require(t >= 0.0, "mean_at: t must be >= 0");
    const double m = long_term_mean(params);
    if (std::isinf(t)) return m;
    return m + (p0 - m) * std::exp(-reversion_rate(params) * t);
}

inline StationaryMoments stationary_moments(const JacobiParams& p) {
    const double s2 = p.sigma * p.sigma;
    return {p.mu, s2 * p.mu * (p.a - p.mu) / (2.0 * p.theta + p.a * s2)};
}

inline StationaryMoments stationary_moments(const CIRParams& p) {
    return {p.eta, p.sigma * p.sigma * p.eta / (2.0 * p.kappa)};
}

inline StationaryMoments stationary_moments(const ProcessParams& p) {
    return std::visit([](const auto& q) { return stationary_moments(q); }, p);
}

}  // namespace siepi
