#pragma once

// The general equations for the shifted angular momenta T.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <span>
#include <sstream>
#include <vector>

#include "ctinv/domain.hpp"
#include "ctinv/log.hpp"
#include "ctinv/nlsolve.hpp"
#include "ctinv/one_term.hpp"

namespace ctinv {

/// Above this condition number of M_cos a warning is logged.
inline constexpr double m_cos_warn_condition = 1e10;

struct MMatrices {
    Eigen::MatrixXcd m_sin;  // rows l in S, columns L in T
    Eigen::MatrixXcd m_cos;
};

struct Reactance {
    std::vector<cplx> k_plus;
    std::vector<cplx> k_minus;
    double condition = 1.0;  // 1-norm estimate for M_cos
};

/// A solved T-set together with how it was obtained.
struct TSetSolution {
    TSet tset;
    double residual_norm = 0.0;
    int iterations = 0;
    nlsolve::Strategy strategy = nlsolve::Strategy::newton;
};

namespace detail {

/// i^n for integer n, exactly.
inline cplx ipow(int n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

inline MMatrices m_matrices_unchecked(std::span<const int> s, std::span<const cplx> t) {
    const auto n = static_cast<Eigen::Index>(s.size());
    MMatrices m{Eigen::MatrixXcd(n, n), Eigen::MatrixXcd(n, n)};
    const double half_pi = 0.5 * std::numbers::pi;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double l = s[static_cast<std::size_t>(i)];
        const double lam_l = l * (l + 1.0);
        for (Eigen::Index j = 0; j < n; ++j) {
            const cplx L = t[static_cast<std::size_t>(j)];
            const cplx denom = angular_eigenvalue(L) - lam_l;
            const cplx arg = (l - L) * half_pi;
            m.m_sin(i, j) = std::sin(arg) / denom;
            m.m_cos(i, j) = std::cos(arg) / denom;
        }
    }
    return m;
}

// K^{+-}_l = sum_{l'} [M_sin M_cos^-1]_{ll'} i^{+-(l-l')}. Returns the
// condition estimate of M_cos, or +inf when the LU factorization breaks down.
inline double reactance_unchecked(std::span<const int> s, std::span<const cplx> t,
                                  std::vector<cplx>& kp, std::vector<cplx>& km) {
    const auto m = m_matrices_unchecked(s, t);
    const auto n = static_cast<Eigen::Index>(s.size());
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m.m_cos.transpose());
    const double rcond = lu.rcond();
    // X M_cos = M_sin  <=>  M_cos^T X^T = M_sin^T
    const Eigen::MatrixXcd x = lu.solve(m.m_sin.transpose()).transpose();
    kp.assign(s.size(), 0.0);
    km.assign(s.size(), 0.0);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const int d = s[static_cast<std::size_t>(i)] - s[static_cast<std::size_t>(j)];
            kp[static_cast<std::size_t>(i)] += x(i, j) * ipow(d);
            km[static_cast<std::size_t>(i)] += x(i, j) * ipow(-d);
        }
    if (!(rcond > 0.0) || !x.allFinite()) return std::numeric_limits<double>::infinity();
    return 1.0 / rcond;
}

inline std::vector<cplx> targets(const PhaseShiftSet& problem) {
    std::vector<cplx> out;
    for (const auto& e : problem.entries()) out.push_back(e.s_matrix());
    return out;
}

// S-matrix form without T validation; used inside the Newton loop.
inline std::vector<cplx> general_residual_raw(std::span<const cplx> t, std::span<const int> s,
                                              std::span<const cplx> s_target) {
    std::vector<cplx> kp, km;
    const double cond = reactance_unchecked(s, t, kp, km);
    std::vector<cplx> r(s.size());
    if (!std::isfinite(cond)) {
        r.assign(s.size(), cplx(std::numeric_limits<double>::infinity()));
        return r;
    }
    for (std::size_t i = 0; i < s.size(); ++i)
        r[i] = s_target[i] - (1.0 + cplx(0, 1) * kp[i]) / (1.0 - cplx(0, 1) * km[i]);
    return r;
}

}  // namespace detail

/// [M_sin/cos]_{lL} = sin/cos((l-L) pi/2) / (L(L+1) - l(l+1)).
inline MMatrices build_m_matrices(std::span<const int> s, std::span<const cplx> t) {
    validate_tset(t, s);
    return detail::m_matrices_unchecked(s, t);
}

inline Reactance reactance(std::span<const int> s, std::span<const cplx> t) {
    validate_tset(t, s);
    Reactance r;
    r.condition = detail::reactance_unchecked(s, t, r.k_plus, r.k_minus);
    if (!std::isfinite(r.condition) || r.condition > 1e14) {
        std::ostringstream msg;
        msg << "reactance: M_cos singular (condition " << r.condition << ")";
        throw SingularSystem(msg.str(), r.condition);
    }
    if (r.condition > m_cos_warn_condition) {
        std::ostringstream msg;
        msg << "reactance: M_cos condition number " << r.condition;
        log::warn(msg.str());
    }
    return r;
}

/// Component l: S_l - (1 + i K+_l) / (1 - i K-_l), with S_l = eta e^{2i delta}.
inline std::vector<cplx> general_residual(std::span<const cplx> t, const PhaseShiftSet& problem) {
    const auto s = problem.angular_momenta();
    const auto rk = reactance(s, t);
    const auto target = detail::targets(problem);
    std::vector<cplx> r(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const cplx denom = 1.0 - cplx(0, 1) * rk.k_minus[i];
        if (std::abs(denom) < 1e-12) {
            std::ostringstream msg;
            msg << "general residual: pole of the S-matrix form at l=" << s[i];
            log::debug(msg.str());
        }
        r[i] = target[i] - (1.0 + cplx(0, 1) * rk.k_plus[i]) / denom;
    }
    return r;
}

/// Equivalent tangent form: tan(delta~_l) - (K+ + K-) / (2 + i (K+ - K-)).
inline std::vector<cplx> general_residual_tan(std::span<const cplx> t, const PhaseShiftSet& problem) {
    const auto s = problem.angular_momenta();
    const auto rk = reactance(s, t);
    std::vector<cplx> r(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const cplx kp = rk.k_plus[i], km = rk.k_minus[i];
        r[i] = std::tan(problem.entries()[i].complex_shift()) -
               (kp + km) / (2.0 + cplx(0, 1) * (kp - km));
    }
    return r;
}

inline bool tset_is_valid(std::span<const cplx> t, std::span<const int> s) {
    try {
        validate_tset(t, s);
        return true;
    } catch (const InvalidTSet&) {
        return false;
    }
}

/// Drops imaginary parts up to 1e-8 (elastic input must give a real T).
inline void truncate_imaginary(std::vector<cplx>& t) {
    for (auto& z : t) {
        if (std::abs(z.imag()) <= 1e-8) {
            z = z.real();
        } else {
            std::ostringstream msg;
            msg << "elastic input produced complex L = " << z;
            log::warn(msg.str());
        }
    }
}

/// Solve the general equations from the one-term starting point.
inline TSetSolution solve_general(const PhaseShiftSet& problem, const nlsolve::SolveOptions& opts = {}) {
    if (problem.empty()) throw DomainError("solve_general: empty phase-shift set");
    const auto s = problem.angular_momenta();
    const auto target = detail::targets(problem);
    const auto init = initial_guess(problem.entries());
    auto fn = [&](std::span<const cplx> t) { return detail::general_residual_raw(t, s, target); };
    auto accept = [&](std::span<const cplx> t) { return tset_is_valid(t, s); };
    auto out = nlsolve::solve(fn, init, opts, accept);
    if (problem.elastic()) truncate_imaginary(out.solution);
    std::ostringstream msg;
    msg << "solve_general: N=" << s.size() << " residual " << out.residual_norm << " via "
        << nlsolve::to_string(out.strategy_used) << " in " << out.iterations << " iterations";
    log::info(msg.str());
    return {TSet(out.solution, TSetTag::general, s), out.residual_norm, out.iterations,
            out.strategy_used};
}

}  // namespace ctinv
