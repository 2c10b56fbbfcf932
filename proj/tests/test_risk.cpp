#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "siepi/risk.hpp"

using namespace siepi;

namespace {

const CIRParams kBase = validate_cir(2.0, 0.4, 0.3);

// Brute-force infimum of exp(-lambda M + A + B p0) over a dense lambda grid,
// with (A, B) from RK4 on the Riccati ODEs.
double brute_force_bound(const CIRParams& p, double p0, double t, double M) {
    const double lc = p.kappa * p.kappa / (2.0 * p.sigma * p.sigma);
    double best = 1.0;
    const int n = 2000;
    for (int i = 1; i <= n; ++i) {
        const double lam = lc * (1.0 - 1e-9) * i / n;
        const auto ab = oracle::riccati_rk4(p.kappa, p.eta, p.sigma, lam, t, +1.0, 400);
        best = std::min(best, std::exp(-lam * M + ab.A + ab.B * p0));
    }
    return best;
}

}  // namespace

TEST(Threshold, Values) {
    EXPECT_EQ(threshold_M(0.7, 0.7), 0.0);
    EXPECT_NEAR(threshold_M(0.99, 0.5), 4.59511985013459, 1e-13);
    EXPECT_NEAR(threshold_M(0.5, 0.25), 1.0986122886681098, 1e-14);
    EXPECT_THROW(threshold_M(0.5, 0.6), DomainError);
    EXPECT_THROW(threshold_M(1.0, 0.5), DomainError);
    EXPECT_THROW(threshold_M(0.5, 0.0), DomainError);
}

TEST(Chernoff, TrivialBelowMean) {
    const auto r = chernoff_bound(kBase, 0.5, 1.0, 0.3);
    EXPECT_TRUE(r.trivial);
    EXPECT_EQ(r.bound, 1.0);
    EXPECT_EQ(r.lambda_star, 0.0);
    EXPECT_TRUE(chernoff_bound(kBase, 0.5, 1.0, expected_H(kBase, 0.5, NoIntervention{}, 1.0)).trivial);
}

TEST(Chernoff, MatchesBruteForce) {
    for (double M : {0.5, 0.55, 0.6, 0.7, 1.0}) {
        const auto r = chernoff_bound(kBase, 0.5, 1.0, M);
        EXPECT_FALSE(r.trivial);
        EXPECT_GT(r.lambda_star, 0.0);
        EXPECT_LT(r.lambda_star, critical_lambda(kBase));
        const double ref = brute_force_bound(kBase, 0.5, 1.0, M);
        EXPECT_LE(r.bound, ref * (1.0 + 1e-6)) << M;
        EXPECT_NEAR(r.bound, ref, 1e-3 * ref) << M;
    }
}

// Frozen from an independent scipy evaluation of the same closed forms.
TEST(Chernoff, FrozenValuesSigma03) {
    EXPECT_NEAR(chernoff_bound(kBase, 0.5, 1.0, 0.5).bound, 0.68941343, 1e-6);
    EXPECT_NEAR(chernoff_bound(kBase, 0.5, 1.0, 0.55).bound, 0.29622013, 1e-6);
    EXPECT_NEAR(chernoff_bound(kBase, 0.5, 1.0, 0.7).bound, 0.01062189, 1e-6);
}

TEST(Chernoff, UpperLimitFlag) {
    // for t = 1 the slope Lambda' stays finite at lambda_c, so large M pins lambda*
    EXPECT_FALSE(chernoff_bound(kBase, 0.5, 1.0, 0.5).at_upper_limit);
    EXPECT_TRUE(chernoff_bound(kBase, 0.5, 1.0, 0.7).at_upper_limit);
}

TEST(Chernoff, Errors) {
    EXPECT_THROW(chernoff_bound(kBase, 0.5, 1.0, -0.1), DomainError);
    EXPECT_THROW(chernoff_bound(kBase, 0.5, 0.0, 0.5), DomainError);
    const ProcessParams jac = validate_jacobi(2.0, 0.4, 0.3, 1.0);
    EXPECT_THROW(chernoff_bound(jac, 0.5, 1.0, 0.5), UnsupportedModel);
    EXPECT_EQ(chernoff_bound(ProcessParams{kBase}, 0.5, 1.0, 0.3).bound, 1.0);
}

TEST(Chernoff, BoundNeverExceedsOneAndDecreasesInM) {
    double prev = 1.0;
    for (double M = 0.3; M < 3.0; M += 0.05) {
        const auto r = chernoff_bound(kBase, 0.5, 1.0, M);
        EXPECT_LE(r.bound, 1.0);
        EXPECT_GT(r.bound, 0.0);
        EXPECT_LE(r.bound, prev);
        prev = r.bound;
    }
}

TEST(Chernoff, ObjectiveUnimodalOnLogGrid) {
    for (double M : {0.5, 0.55, 0.6, 0.65, 0.7}) {
        const auto curve = chernoff_curve(kBase, 0.5, 1.0, M, 200);
        int local_minima = 0;
        for (std::size_t i = 0; i < curve.size(); ++i) {
            const bool left = i == 0 || curve[i].f < curve[i - 1].f - 1e-12;
            const bool right = i + 1 == curve.size() || curve[i].f < curve[i + 1].f - 1e-12;
            if (left && right) ++local_minima;
        }
        EXPECT_EQ(local_minima, 1) << M;
    }
}

// Where Lambda' reaches M inside (0, lambda_c), lambda* grows strictly with M
// and approaches lambda_c.
TEST(LambdaStar, IncreasingInInteriorRegime) {
    // at t = 20 the slope at lambda_c is large, so a wide range of M is interior
    const std::vector<double> Ms = {9.0, 10.0, 11.0, 12.0, 14.0};
    const auto curve = lambda_star_curve(kBase, 0.5, 20.0, Ms);
    for (std::size_t i = 1; i < curve.size(); ++i) {
        EXPECT_GT(curve[i].lambda_star, curve[i - 1].lambda_star);
        EXPECT_LE(curve[i].bound, curve[i - 1].bound);
    }
    EXPECT_GT(chernoff_bound(kBase, 0.5, 1.0, 50.0).lambda_star, 0.99 * critical_lambda(kBase));
}

TEST(LambdaStar, GridPreconditions) {
    EXPECT_THROW(lambda_star_curve(kBase, 0.5, 1.0, {0.5, 0.5}), DomainError);
    EXPECT_THROW(lambda_star_curve(kBase, 0.5, 1.0, {0.6, 0.5}), DomainError);
    EXPECT_THROW(lambda_star_curve(kBase, 0.5, 1.0, {0.3, 0.5}), DomainError);
}

TEST(HittingCdf, Extremes) {
    const ProcessParams p = kBase;
    const auto g = make_grid(1.0);
    const auto quick = empirical_hitting_cdf(p, 0.5, NoIntervention{}, 0.99, 0.99 - 1e-6, g, 1, 200);
    EXPECT_EQ(quick.front(), 0.0);
    EXPECT_EQ(quick[5], 1.0);
    const auto never = empirical_hitting_cdf(p, 0.5, NoIntervention{}, 0.99, 1e-6, g, 1, 200);
    EXPECT_EQ(never.back(), 0.0);
    EXPECT_THROW(empirical_hitting_cdf(p, 0.5, NoIntervention{}, 0.99, 0.995, g, 1, 10), DomainError);
}

TEST(HittingCdf, NondecreasingAndBelowBound) {
    const ProcessParams p = kBase;
    const auto g = make_grid(1.0);
    const double s0 = 0.99;
    // x such that M(s0, x) = 0.5
    const double M = 0.5;
    const double x = 1.0 / (1.0 + (1.0 / s0 - 1.0) * std::exp(M));
    EXPECT_NEAR(threshold_M(s0, x), M, 1e-12);
    const auto cdf = empirical_hitting_cdf(p, 0.5, NoIntervention{}, s0, x, g, 3, 20000);
    for (std::size_t k = 1; k < cdf.size(); ++k) EXPECT_GE(cdf[k], cdf[k - 1]);
    const double se = std::sqrt(cdf.back() * (1 - cdf.back()) / 20000.0);
    EXPECT_LE(cdf.back(), chernoff_bound(kBase, 0.5, 1.0, M).bound + 3.0 * se);
}
