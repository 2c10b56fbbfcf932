#pragma once

#include <cmath>

#include "siepi/processes.hpp"

namespace siepi {

struct CalibrationResult {
    JacobiParams jacobi;
    CIRParams cir;
    double matched_mean = 0.0;
    double matched_variance = 0.0;
};

/// CIR driver sharing the Jacobi driver's reversion speed and first two
/// stationary moments: kappa = theta, eta = mu and
/// sigma_cir = sqrt(2 kappa Var_J / eta).
inline CalibrationResult match_cir_to_jacobi(const JacobiParams& jacobi) {
    const auto m = stationary_moments(jacobi);
    const double sigma_cir = std::sqrt(2.0 * jacobi.theta * m.variance / jacobi.mu);
    return {jacobi, validate_cir(jacobi.theta, jacobi.mu, sigma_cir), m.mean, m.variance};
}

}  // namespace siepi
