#pragma once

// Damped Newton for small dense systems F(z) = 0 over complex unknowns.
//
// The system is solved in its real 2n-dimensional form, so F need not be
// holomorphic. Jacobians come from central differences. A failed Newton run
// is retried from random perturbations of the initial point (multistart) and
// finally from the best point of an annealing-style random search.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <sstream>
#include <vector>

#include "ctinv/error.hpp"
#include "ctinv/log.hpp"

namespace ctinv {
using cplx = std::complex<double>;
}

namespace ctinv::nlsolve {

enum class Strategy { newton, multistart, annealing };

inline const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::newton: return "newton";
        case Strategy::multistart: return "multistart";
        case Strategy::annealing: return "annealing";
    }
    return "newton";
}

struct SolveOptions {
    double tol_residual = 1e-12;
    int max_iter = 200;
    double damping = 0.5;  // step shrink factor per backtracking halving
    int max_halvings = 40;
    std::vector<double> multistart = {0.0, 0.05, 0.1, 0.3};
    int attempts_per_radius = 4;
    std::uint64_t seed = 1;
    int annealing_iterations = 20000;
    double regularization = 1e-12;

    void validate() const {
        if (!(tol_residual > 0.0)) throw DomainError("solve options: tol_residual must be positive");
        if (max_iter <= 0) throw DomainError("solve options: max_iter must be positive");
        if (!(damping > 0.0 && damping < 1.0)) throw DomainError("solve options: damping in (0,1)");
        for (std::size_t i = 0; i < multistart.size(); ++i) {
            if (multistart[i] < 0.0) throw DomainError("solve options: negative multistart radius");
            if (i > 0 && multistart[i] < multistart[i - 1])
                throw DomainError("solve options: multistart radii must ascend");
        }
    }
};

struct SolveOutcome {
    std::vector<cplx> solution;
    double residual_norm = 0.0;
    int iterations = 0;
    Strategy strategy_used = Strategy::newton;
};

using ResidualFn = std::function<std::vector<cplx>(std::span<const cplx>)>;
/// Extra acceptance test for a converged point (e.g. domain constraints).
using AcceptFn = std::function<bool(std::span<const cplx>)>;

/// Infinity norm; +inf when any component is not finite.
inline double residual_norm(std::span<const cplx> r) {
    double m = 0.0;
    for (cplx c : r) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            return std::numeric_limits<double>::infinity();
        m = std::max(m, std::abs(c));
    }
    return m;
}

namespace detail {

struct Attempt {
    std::vector<cplx> z;
    double norm = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
    bool singular = false;
    std::vector<double> history;  // residual norm of each accepted iterate
};

inline double evaluate(const ResidualFn& f, std::span<const cplx> z) {
    return residual_norm(f(z));
}

// Jacobian of the real form [Re F; Im F] with respect to [Re z; Im z].
inline bool jacobian(const ResidualFn& f, std::span<const cplx> z, std::size_t m,
                     Eigen::MatrixXd& jac) {
    const std::size_t n = z.size();
    jac.resize(2 * m, 2 * n);
    std::vector<cplx> zp(z.begin(), z.end());
    for (std::size_t j = 0; j < n; ++j) {
        const double h = 1e-7 * (1.0 + std::abs(z[j]));
        for (int part = 0; part < 2; ++part) {
            const cplx dz = part == 0 ? cplx(h, 0.0) : cplx(0.0, h);
            zp[j] = z[j] + dz;
            const auto rp = f(zp);
            zp[j] = z[j] - dz;
            const auto rm = f(zp);
            zp[j] = z[j];
            if (rp.size() != m || rm.size() != m) return false;
            for (std::size_t i = 0; i < m; ++i) {
                const cplx d = (rp[i] - rm[i]) / (2.0 * h);
                if (!std::isfinite(d.real()) || !std::isfinite(d.imag())) return false;
                jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(2 * j + part)) = d.real();
                jac(static_cast<Eigen::Index>(m + i), static_cast<Eigen::Index>(2 * j + part)) =
                    d.imag();
            }
        }
    }
    return true;
}

inline Attempt newton(const ResidualFn& f, std::span<const cplx> start, const SolveOptions& opts) {
    Attempt a;
    a.z.assign(start.begin(), start.end());
    auto r = f(a.z);
    a.norm = residual_norm(r);
    const std::size_t n = a.z.size();
    const std::size_t m = r.size();
    if (!std::isfinite(a.norm)) return a;
    a.history.push_back(a.norm);

    Eigen::MatrixXd jac;
    for (; a.iterations < opts.max_iter; ++a.iterations) {
        if (a.norm <= opts.tol_residual) {
            a.converged = true;
            return a;
        }
        if (!jacobian(f, a.z, m, jac)) return a;

        Eigen::VectorXd rhs(2 * m);
        for (std::size_t i = 0; i < m; ++i) {
            rhs(static_cast<Eigen::Index>(i)) = -r[i].real();
            rhs(static_cast<Eigen::Index>(m + i)) = -r[i].imag();
        }
        Eigen::VectorXd step;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu;
        bool solved = false;
        if (m == n) {
            lu.compute(jac);
            if (lu.rcond() > 1e-14) {
                step = lu.solve(rhs);
                solved = step.allFinite();
            }
        }
        if (!solved) {
            // Tikhonov-regularized normal equations
            Eigen::MatrixXd normal = jac.transpose() * jac;
            const double scale = std::max(1.0, normal.diagonal().maxCoeff());
            normal.diagonal().array() += opts.regularization * scale;
            step = normal.ldlt().solve(jac.transpose() * rhs);
            if (!step.allFinite()) {
                a.singular = true;
                return a;
            }
        }

        double alpha = 1.0;
        bool accepted = false;
        std::vector<cplx> trial(n);
        for (int halving = 0; halving <= opts.max_halvings; ++halving) {
            for (std::size_t j = 0; j < n; ++j)
                trial[j] = a.z[j] + alpha * cplx(step(static_cast<Eigen::Index>(2 * j)),
                                                 step(static_cast<Eigen::Index>(2 * j + 1)));
            auto rt = f(trial);
            const double nt = residual_norm(rt);
            if (nt < a.norm) {
                a.z = trial;
                r = std::move(rt);
                a.norm = nt;
                a.history.push_back(nt);
                accepted = true;
                break;
            }
            alpha *= opts.damping;
        }
        if (!accepted) break;
    }
    a.converged = a.norm <= opts.tol_residual;
    return a;
}

inline std::vector<cplx> perturb(std::span<const cplx> z, double radius, bool complex_moves,
                                 std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<cplx> out(z.begin(), z.end());
    for (auto& c : out) {
        const double re = unit(rng);
        const double im = complex_moves ? unit(rng) : 0.0;
        c += radius * cplx(re, im);
    }
    return out;
}

// Metropolis random walk on |F|^2 with geometric cooling of step and temperature.
inline std::vector<cplx> anneal(const ResidualFn& f, std::span<const cplx> start, double scale,
                                bool complex_moves, int iterations, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<cplx> current(start.begin(), start.end());
    double cost = std::pow(evaluate(f, current), 2);
    std::vector<cplx> best = current;
    double best_cost = cost;
    double temperature = std::isfinite(cost) && cost > 0.0 ? cost : 1.0;
    const double final_scale = 1e-4;
    const double cool = iterations > 1 ? std::pow(final_scale / scale, 1.0 / iterations) : 1.0;
    const double temp_cool = iterations > 1 ? std::pow(1e-12, 1.0 / iterations) : 1.0;
    double step = scale;
    for (int it = 0; it < iterations; ++it) {
        auto trial = perturb(current, step, complex_moves, rng);
        const double c = std::pow(evaluate(f, trial), 2);
        if (std::isfinite(c) &&
            (c < cost || uniform(rng) < std::exp(-(c - cost) / std::max(temperature, 1e-300)))) {
            current = std::move(trial);
            cost = c;
            if (c < best_cost) {
                best_cost = c;
                best = current;
            }
        }
        step *= cool;
        temperature *= temp_cool;
    }
    return best;
}

}  // namespace detail

/// Solve F(z) = 0 from `initial`. Deterministic for fixed inputs and seed.
inline SolveOutcome solve(const ResidualFn& f, std::span<const cplx> initial,
                          const SolveOptions& opts = {}, const AcceptFn& accept = {}) {
    opts.validate();
    std::mt19937_64 rng(opts.seed);
    int total_iterations = 0;
    detail::Attempt best;
    bool any_regular = false;

    const auto finish = [&](const detail::Attempt& a, Strategy s) {
        return SolveOutcome{a.z, a.norm, total_iterations, s};
    };
    const auto consider = [&](const detail::Attempt& a) {
        total_iterations += a.iterations;
        if (!a.singular) any_regular = true;
        if (a.norm < best.norm || best.z.empty()) best = a;
        return a.converged && (!accept || accept(a.z));
    };

    const auto report = [&](const char* stage) {
        std::ostringstream msg;
        msg << "nlsolve: best residual " << best.norm << " after " << stage;
        log::debug(msg.str());
    };

    auto first = detail::newton(f, initial, opts);
    if (consider(first)) return finish(first, Strategy::newton);
    report("Newton from the initial guess");

    const bool complex_moves = std::any_of(initial.begin(), initial.end(),
                                           [](cplx c) { return c.imag() != 0.0; });
    for (double radius : opts.multistart) {
        if (radius == 0.0) continue;
        for (int k = 0; k < opts.attempts_per_radius; ++k) {
            const auto start = detail::perturb(initial, radius, complex_moves, rng);
            auto a = detail::newton(f, start, opts);
            if (consider(a)) return finish(a, Strategy::multistart);
        }
    }
    report("multistart");

    if (opts.annealing_iterations > 0) {
        const double scale = opts.multistart.empty() ? 0.3 : std::max(0.05, opts.multistart.back());
        const auto seed_point = best.z.empty() ? std::vector<cplx>(initial.begin(), initial.end())
                                               : best.z;
        const auto annealed = detail::anneal(f, seed_point, scale, complex_moves,
                                             opts.annealing_iterations, rng);
        auto a = detail::newton(f, annealed, opts);
        if (consider(a)) return finish(a, Strategy::annealing);
        report("annealing");
    }

    if (!any_regular) throw SingularSystem("nonlinear solve: Jacobian singular after regularization", 0.0);
    std::ostringstream msg;
    msg << "nonlinear solve did not converge; best residual " << best.norm;
    throw NonConvergence(msg.str(), best.norm);
}

}  // namespace ctinv::nlsolve
