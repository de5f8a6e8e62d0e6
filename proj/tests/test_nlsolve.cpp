#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "ctinv/nlsolve.hpp"

using ctinv::cplx;
namespace ns = ctinv::nlsolve;

namespace {

std::vector<cplx> one(cplx z) { return {z}; }

// Bisection on a real bracket, independent of the Newton machinery.
double bisect(double (*g)(double), double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((g(lo) < 0) == (g(mid) < 0)) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST(NlSolve, LinearInOneStep) {
    const std::vector<cplx> z0{0.0};
    auto out = ns::solve([](std::span<const cplx> z) { return one(z[0] - 3.0); }, z0);
    EXPECT_NEAR(std::abs(out.solution[0] - 3.0), 0.0, 1e-10);
    EXPECT_EQ(out.strategy_used, ns::Strategy::newton);
    // the first step is exact up to finite-difference error
    auto a = ns::detail::newton([](std::span<const cplx> z) { return one(z[0] - 3.0); }, z0,
                                ns::SolveOptions{});
    ASSERT_GE(a.history.size(), 2u);
    EXPECT_LE(a.history[1], 1e-7);
    EXPECT_LE(a.iterations, 2);
}

TEST(NlSolve, Quadratic) {
    const std::vector<cplx> z0{1.0};
    auto out = ns::solve([](std::span<const cplx> z) { return one(z[0] * z[0] - 4.0); }, z0);
    EXPECT_NEAR(std::abs(out.solution[0] - 2.0), 0.0, 1e-12);
    EXPECT_LE(out.residual_norm, 1e-12);
}

TEST(NlSolve, TangentAgainstBisection) {
    const double pi = std::numbers::pi;
    const double root = bisect([](double x) { return std::tan(x * std::numbers::pi / 2) - 1.0; },
                               0.1, 0.9);
    const std::vector<cplx> z0{0.4};
    auto out = ns::solve(
        [pi](std::span<const cplx> z) { return one(std::tan(z[0] * pi / 2.0) - 1.0); }, z0);
    EXPECT_NEAR(out.solution[0].real(), root, 1e-12);
    EXPECT_NEAR(out.solution[0].imag(), 0.0, 1e-12);
    EXPECT_NEAR(root, 0.5, 1e-14);
}

TEST(NlSolve, ComplexRootOfNonHolomorphicSystem) {
    // z + conj(z)/2 = 3 + i has root 2 + 2i
    const std::vector<cplx> z0{0.0};
    auto out = ns::solve(
        [](std::span<const cplx> z) { return one(z[0] + std::conj(z[0]) / 2.0 - cplx(3.0, 1.0)); },
        z0);
    EXPECT_NEAR(std::abs(out.solution[0] - cplx(2.0, 2.0)), 0.0, 1e-10);
}

TEST(NlSolve, TwoByTwoSystem) {
    const std::vector<cplx> z0{1.0, 1.0};
    auto out = ns::solve(
        [](std::span<const cplx> z) {
            return std::vector<cplx>{z[0] * z[0] + z[1] * z[1] - 5.0, z[0] * z[1] - 2.0};
        },
        z0);
    EXPECT_LE(out.residual_norm, 1e-12);
    EXPECT_NEAR(std::abs(out.solution[0] * out.solution[1] - 2.0), 0.0, 1e-11);
}

TEST(NlSolve, Deterministic) {
    // Newton from 0 stalls on a stationary point; recovery needs the random restarts.
    auto f = [](std::span<const cplx> z) { return one(z[0] * z[0] * z[0] - 2.0 * z[0] + 2.0); };
    const std::vector<cplx> z0{0.0};
    ns::SolveOptions opts;
    opts.seed = 7;
    auto a = ns::solve(f, z0, opts);
    auto b = ns::solve(f, z0, opts);
    EXPECT_EQ(a.solution[0], b.solution[0]);
    EXPECT_EQ(a.iterations, b.iterations);
    EXPECT_LE(a.residual_norm, 1e-12);
}

TEST(NlSolve, ResidualMonotone) {
    auto f = [](std::span<const cplx> z) { return one(std::exp(z[0]) - 5.0); };
    const std::vector<cplx> z0{-3.0};
    auto a = ns::detail::newton(f, z0, ns::SolveOptions{});
    EXPECT_TRUE(a.converged);
    EXPECT_NEAR(a.z[0].real(), std::log(5.0), 1e-12);
    ASSERT_GE(a.history.size(), 3u);
    for (std::size_t i = 1; i < a.history.size(); ++i) EXPECT_LE(a.history[i], a.history[i - 1]);
}

TEST(NlSolve, AcceptCallbackRejectsRoot) {
    // Only the negative root is acceptable.
    auto f = [](std::span<const cplx> z) { return one(z[0] * z[0] - 4.0); };
    const std::vector<cplx> z0{1.0};
    ns::SolveOptions opts;
    opts.multistart = {0.0, 3.0};
    opts.attempts_per_radius = 16;
    auto out = ns::solve(f, z0, opts, [](std::span<const cplx> z) { return z[0].real() < 0; });
    EXPECT_NEAR(out.solution[0].real(), -2.0, 1e-10);
    EXPECT_NE(out.strategy_used, ns::Strategy::newton);
}

TEST(NlSolve, NonConvergenceReportsBestResidual) {
    auto f = [](std::span<const cplx> z) { return one(1.0 + 0.0 * z[0]); };
    const std::vector<cplx> z0{0.5};
    ns::SolveOptions opts;
    opts.annealing_iterations = 100;
    try {
        ns::solve(f, z0, opts);
        FAIL() << "expected NonConvergence";
    } catch (const ctinv::NonConvergence& e) {
        EXPECT_NEAR(e.best_residual(), 1.0, 1e-12);
    }
}

TEST(NlSolve, NonFiniteResidualTreatedAsInfinite) {
    const cplx nan(std::nan(""), 0.0);
    EXPECT_TRUE(std::isinf(ns::residual_norm(std::vector<cplx>{1.0, nan})));
}

TEST(NlSolve, OptionValidation) {
    ns::SolveOptions o;
    o.damping = 1.5;
    EXPECT_THROW(o.validate(), ctinv::DomainError);
    o = {};
    o.multistart = {0.3, 0.1};
    EXPECT_THROW(o.validate(), ctinv::DomainError);
}
