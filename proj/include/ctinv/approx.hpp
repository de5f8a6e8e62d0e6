#pragma once

// Approximate inversions built from the parity solutions:
//   A  add the potentials of the separate even and odd inversions,
//   T  reconstruct once from the union of the even and odd T-sets,
//   L  reconstruct from the one-term values.

#include <optional>
#include <tuple>
#include <string>
#include <vector>

#include "ctinv/domain.hpp"
#include "ctinv/nlsolve.hpp"
#include "ctinv/one_term.hpp"
#include "ctinv/parity.hpp"
#include "ctinv/reconstruct.hpp"

namespace ctinv {

enum class ApproxMode { A, T, L };

inline const char* to_string(ApproxMode m) {
    switch (m) {
        case ApproxMode::A: return "A";
        case ApproxMode::T: return "T";
        case ApproxMode::L: return "L";
    }
    return "A";
}

inline TSet approx_tset_L(const PhaseShiftSet& problem) {
    std::vector<cplx> t;
    for (const auto& e : problem.entries()) t.push_back(one_term(e));
    return TSet(t, TSetTag::one_term, problem.angular_momenta());
}

/// Parity solutions of both halves; a half with no entries or with zero
/// scattering contributes nothing.
struct ParitySolutions {
    ParityProblem even, odd;
    std::optional<TSetSolution> even_solution, odd_solution;
};

inline ParitySolutions solve_both_parities(const PhaseShiftSet& problem, const nlsolve::SolveOptions& opts = {}) {
    ParitySolutions out;
    std::tie(out.even, out.odd) = split_parity(problem);
    if (!out.even.empty() && !is_zero_scattering(out.even.entries)) out.even_solution = solve_parity(out.even, opts);
    if (!out.odd.empty() && !is_zero_scattering(out.odd.entries)) out.odd_solution = solve_parity(out.odd, opts);
    return out;
}

inline TSet approx_tset_T(const PhaseShiftSet& problem, const nlsolve::SolveOptions& opts = {}) {
    const auto parts = solve_both_parities(problem, opts);
    if (!parts.even.empty() && !parts.even_solution) throw InvalidTSet("approx T: even half has zero scattering");
    if (!parts.odd.empty() && !parts.odd_solution) throw InvalidTSet("approx T: odd half has zero scattering");
    std::vector<cplx> t;
    for (const auto& sol : {parts.even_solution, parts.odd_solution})
        if (sol) t.insert(t.end(), sol->tset.members().begin(), sol->tset.members().end());
    return TSet(t, TSetTag::union_set, problem.angular_momenta());
}

struct ApproxAResult {
    PotentialCurve total;  // q_A = q_e + q_o
    PotentialCurve even, odd;
    ParitySolutions parts;
};

inline ApproxAResult approx_potential_A_parts(const PhaseShiftSet& problem, const RadialGrid& grid,
                                              const nlsolve::SolveOptions& opts = {}) {
    ApproxAResult out;
    out.parts = solve_both_parities(problem, opts);
    auto half = [&](const ParityProblem& p, const std::optional<TSetSolution>& sol) {
        const auto s = p.angular_momenta();
        if (sol) return potential(sol->tset, s, grid, problem.energy(), problem.k());
        const std::vector<int> none;
        return potential(TSet({}, TSetTag::general, none), none, grid, problem.energy(), problem.k());
    };
    out.even = half(out.parts.even, out.parts.even_solution);
    out.odd = half(out.parts.odd, out.parts.odd_solution);
    out.total = out.even;
    for (std::size_t i = 0; i < out.total.q.size(); ++i) out.total.q[i] += out.odd.q[i];
    out.total.q_origin += out.odd.q_origin;
    out.total.filled_points.insert(out.total.filled_points.end(), out.odd.filled_points.begin(),
                                   out.odd.filled_points.end());
    return out;
}

inline PotentialCurve approx_potential_A(const PhaseShiftSet& problem, const RadialGrid& grid,
                                         const nlsolve::SolveOptions& opts = {}) {
    return approx_potential_A_parts(problem, grid, opts).total;
}

}  // namespace ctinv
