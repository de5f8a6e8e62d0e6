#pragma once

// Separate even-l and odd-l systems. Each needs no matrix inverse: the
// shifted reactances collapse to products over lambda = L(L+1) differences.

#include <cmath>
#include <numbers>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "ctinv/ct_core.hpp"
#include "ctinv/domain.hpp"
#include "ctinv/log.hpp"
#include "ctinv/nlsolve.hpp"
#include "ctinv/one_term.hpp"

namespace ctinv {

enum class Parity { even, odd };

inline const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

struct ParityProblem {
    Parity parity = Parity::even;
    std::vector<PhaseShiftEntry> entries;

    std::vector<int> angular_momenta() const {
        std::vector<int> s;
        for (const auto& e : entries) s.push_back(e.l);
        return s;
    }
    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
    bool elastic() const {
        for (const auto& e : entries)
            if (e.eta != 1.0) return false;
        return true;
    }
    void validate() const {
        for (const auto& e : entries)
            if ((e.l % 2 == 0) != (parity == Parity::even)) {
                std::ostringstream msg;
                msg << "parity problem: l=" << e.l << " is not " << to_string(parity);
                throw DomainError(msg.str());
            }
    }
};

inline std::pair<ParityProblem, ParityProblem> split_parity(const PhaseShiftSet& problem) {
    ParityProblem even{Parity::even, {}}, odd{Parity::odd, {}};
    for (const auto& e : problem.entries()) (e.l % 2 == 0 ? even : odd).entries.push_back(e);
    return {even, odd};
}

/// Re-wraps a parity sub-problem as a plain phase-shift set.
inline PhaseShiftSet as_phase_shift_set(const ParityProblem& p, double energy, double k,
                                        const std::string& units = "") {
    return {energy, k, p.entries, units};
}

namespace detail {

// w_{lL} = prod_{l' != l}(lambda_L - lambda_l') / prod_{L' != L}(lambda_L - lambda_L')
inline cplx parity_weight(std::span<const int> s, std::size_t li, std::span<const cplx> t,
                          std::size_t Li) {
    const cplx lam = angular_eigenvalue(t[Li]);
    cplx num = 1.0, den = 1.0;
    for (std::size_t j = 0; j < s.size(); ++j)
        if (j != li) num *= lam - static_cast<double>(s[j]) * (s[j] + 1.0);
    for (std::size_t j = 0; j < t.size(); ++j)
        if (j != Li) den *= lam - angular_eigenvalue(t[j]);
    return num / den;
}

inline std::vector<cplx> parity_residual_raw(std::span<const cplx> t, std::span<const int> s,
                                             std::span<const cplx> tan_shift, Parity parity) {
    const double half_pi = 0.5 * std::numbers::pi;
    std::vector<cplx> r(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        cplx sum = 0.0;
        for (std::size_t j = 0; j < t.size(); ++j) {
            const cplx w = parity_weight(s, i, t, j);
            const cplx arg = t[j] * half_pi;
            sum += parity == Parity::even ? w * std::tan(arg) : -w * std::cos(arg) / std::sin(arg);
        }
        r[i] = tan_shift[i] + sum;
    }
    return r;
}

inline std::vector<cplx> tan_shifts(const ParityProblem& p) {
    std::vector<cplx> out;
    for (const auto& e : p.entries) out.push_back(std::tan(e.complex_shift()));
    return out;
}

inline std::vector<cplx> checked_parity_residual(std::span<const cplx> t, const ParityProblem& p,
                                                 Parity expected) {
    if (p.parity != expected)
        throw DomainError(std::string("parity residual: expected an ") + to_string(expected) +
                          " problem");
    p.validate();
    const auto s = p.angular_momenta();
    validate_tset(t, s);
    auto r = parity_residual_raw(t, s, tan_shifts(p), expected);
    if (!std::isfinite(nlsolve::residual_norm(r)))
        log::debug(std::string(to_string(expected)) + " residual: T member on a tan/cot pole");
    return r;
}

}  // namespace detail

/// tan(delta~_l) + sum_L w_{lL} tan(L pi/2), l even.
inline std::vector<cplx> even_residual(std::span<const cplx> t, const ParityProblem& p) {
    return detail::checked_parity_residual(t, p, Parity::even);
}

/// tan(delta~_l) - sum_L w_{lL} cot(L pi/2), l odd.
inline std::vector<cplx> odd_residual(std::span<const cplx> t, const ParityProblem& p) {
    return detail::checked_parity_residual(t, p, Parity::odd);
}

inline TSetSolution solve_parity(const ParityProblem& p, const nlsolve::SolveOptions& opts = {}) {
    if (p.empty()) throw DomainError("solve_parity: empty problem");
    p.validate();
    const auto s = p.angular_momenta();
    const auto rhs = detail::tan_shifts(p);
    const auto init = initial_guess(p.entries);
    auto fn = [&](std::span<const cplx> t) {
        return detail::parity_residual_raw(t, s, rhs, p.parity);
    };
    auto accept = [&](std::span<const cplx> t) { return tset_is_valid(t, s); };
    auto out = nlsolve::solve(fn, init, opts, accept);
    if (p.elastic()) truncate_imaginary(out.solution);
    std::ostringstream msg;
    msg << "solve_parity(" << to_string(p.parity) << "): N=" << s.size() << " residual "
        << out.residual_norm << " via " << nlsolve::to_string(out.strategy_used);
    log::info(msg.str());
    const auto tag = p.parity == Parity::even ? TSetTag::even : TSetTag::odd;
    return {TSet(out.solution, tag, s), out.residual_norm, out.iterations, out.strategy_used};
}

/// Asymptotic coefficients: a_L for an even problem, b_L for an odd one (the
/// other family vanishes). Ordered as the members of `t`.
inline std::vector<cplx> coefficient_vectors(const TSet& t, const ParityProblem& p) {
    p.validate();
    const auto s = p.angular_momenta();
    validate_tset(t.members(), s);
    const double half_pi = 0.5 * std::numbers::pi;
    std::vector<cplx> out;
    for (std::size_t j = 0; j < t.size(); ++j) {
        const cplx lam = angular_eigenvalue(t[j]);
        cplx num = 1.0, den = 1.0;
        for (int l : s) num *= lam - static_cast<double>(l) * (l + 1.0);
        for (std::size_t k = 0; k < t.size(); ++k)
            if (k != j) den *= lam - angular_eigenvalue(t[k]);
        const cplx trig = p.parity == Parity::even ? std::cos(t[j] * half_pi) : std::sin(t[j] * half_pi);
        if (std::abs(trig) < 1e-14) {
            std::ostringstream msg;
            msg << "coefficient_vectors: L = " << t[j] << " sits on a pole";
            throw DomainError(msg.str());
        }
        out.push_back(num / den / trig);
    }
    return out;
}

/// A_L^a(x) = a_L cos x + b_L sin x.
inline cplx asymptotic_expansion(cplx a, cplx b, double x) { return a * std::cos(x) + b * std::sin(x); }

}  // namespace ctinv
