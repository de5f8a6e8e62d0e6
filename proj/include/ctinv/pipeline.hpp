#pragma once

// End-to-end inversion: T-set by the chosen mode, potential, and the
// forward check of the recovered phase shifts.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "ctinv/approx.hpp"
#include "ctinv/ct_core.hpp"
#include "ctinv/domain.hpp"
#include "ctinv/forward.hpp"
#include "ctinv/log.hpp"
#include "ctinv/parity.hpp"
#include "ctinv/reconstruct.hpp"

namespace ctinv {

enum class InvertMode { general, even, odd, approx_a, approx_t, approx_l };

inline const char* to_string(InvertMode m) {
    switch (m) {
        case InvertMode::general: return "general";
        case InvertMode::even: return "even";
        case InvertMode::odd: return "odd";
        case InvertMode::approx_a: return "approx-a";
        case InvertMode::approx_t: return "approx-t";
        case InvertMode::approx_l: return "approx-l";
    }
    return "general";
}

inline InvertMode invert_mode_from_string(const std::string& s) {
    for (auto m : {InvertMode::general, InvertMode::even, InvertMode::odd, InvertMode::approx_a,
                   InvertMode::approx_t, InvertMode::approx_l})
        if (s == to_string(m)) return m;
    throw ParseError("unknown inversion mode '" + s + "'");
}

struct InvertOptions {
    nlsolve::SolveOptions solver;
    std::optional<RadialGrid> grid;  // default: RadialGrid::default_for(S)
    ForwardOptions forward;
    bool roundtrip = true;
};

namespace detail {

inline double parity_residual_norm(const ParitySolutions& parts) {
    double r = 0.0;
    if (parts.even_solution) r = std::max(r, parts.even_solution->residual_norm);
    if (parts.odd_solution) r = std::max(r, parts.odd_solution->residual_norm);
    return r;
}

}  // namespace detail

/// Modes even/odd invert only the entries of that parity; the report's
/// input is then that half of the problem.
inline InversionReport invert(const PhaseShiftSet& problem, InvertMode mode, const InvertOptions& opts = {}) {
    InversionReport rep;
    rep.mode = to_string(mode);
    rep.input = problem;
    if (mode == InvertMode::even || mode == InvertMode::odd) {
        auto [even, odd] = split_parity(problem);
        const auto& half = mode == InvertMode::even ? even : odd;
        if (half.size() != problem.size())
            log::info(std::string("invert: using only the ") + to_string(half.parity) + " entries");
        rep.input = as_phase_shift_set(half, problem.energy(), problem.k(), problem.units());
    }
    if (rep.input.empty()) throw DomainError("invert: no phase shifts to invert");
    const auto s = rep.input.angular_momenta();
    const RadialGrid grid = opts.grid ? *opts.grid : RadialGrid::default_for(s);
    grid.validate();

    if (is_zero_scattering(rep.input.entries())) {
        log::info("invert: all phase shifts vanish; the potential is zero");
        const std::vector<int> none;
        rep.potential = potential(TSet({}, TSetTag::general, none), none, grid, rep.input.energy(), rep.input.k());
    } else {
        switch (mode) {
            case InvertMode::general: {
                auto sol = solve_general(rep.input, opts.solver);
                rep.residual_norm = sol.residual_norm;
                rep.tsets.push_back(sol.tset);
                break;
            }
            case InvertMode::even:
            case InvertMode::odd: {
                ParityProblem half{mode == InvertMode::even ? Parity::even : Parity::odd, rep.input.entries()};
                auto sol = solve_parity(half, opts.solver);
                rep.residual_norm = sol.residual_norm;
                rep.tsets.push_back(sol.tset);
                break;
            }
            case InvertMode::approx_a: {
                auto parts = approx_potential_A_parts(rep.input, grid, opts.solver);
                rep.residual_norm = detail::parity_residual_norm(parts.parts);
                for (const auto& sol : {parts.parts.even_solution, parts.parts.odd_solution})
                    if (sol) rep.tsets.push_back(sol->tset);
                rep.potential = std::move(parts.total);
                break;
            }
            case InvertMode::approx_t: {
                rep.tsets.push_back(approx_tset_T(rep.input, opts.solver));
                // residual of the combined set in the general equations
                rep.residual_norm = nlsolve::residual_norm(general_residual(rep.tsets[0].members(), rep.input));
                break;
            }
            case InvertMode::approx_l: {
                rep.tsets.push_back(approx_tset_L(rep.input));
                rep.residual_norm = nlsolve::residual_norm(general_residual(rep.tsets[0].members(), rep.input));
                break;
            }
        }
        if (mode != InvertMode::approx_a)
            rep.potential = potential(rep.tsets[0], s, grid, rep.input.energy(), rep.input.k());
    }
    if (opts.roundtrip) rep.roundtrip = roundtrip_report(rep.input, rep.potential, opts.forward);
    return rep;
}

}  // namespace ctinv
