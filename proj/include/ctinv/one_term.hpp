#pragma once

// One-term (total decoupling) value L = l - 2 delta~/pi: the exact solution of
// a single-l problem, the starting point of every solve, and approximation L.

#include <numbers>
#include <span>
#include <vector>

#include "ctinv/domain.hpp"

namespace ctinv {

inline cplx one_term(int l, double delta, double eta) {
    PhaseShiftEntry{l, delta, eta}.validate();
    return static_cast<double>(l) - 2.0 * PhaseShiftEntry{l, delta, eta}.complex_shift() / std::numbers::pi;
}

inline cplx one_term(const PhaseShiftEntry& e) { return one_term(e.l, e.delta, e.eta); }

/// One-term values as Newton starting points. A value that collides with S
/// or an earlier member (zero phase shifts give L = l) is nudged upward by
/// 1e-3 until it is separated.
inline std::vector<cplx> initial_guess(std::span<const PhaseShiftEntry> entries) {
    std::vector<int> s;
    for (const auto& e : entries) s.push_back(e.l);
    std::vector<cplx> guess;
    for (const auto& e : entries) {
        cplx L = one_term(e);
        auto collides = [&](cplx z) {
            const cplx lam = angular_eigenvalue(z);
            for (int l : s)
                if (std::abs(lam - angular_eigenvalue(cplx(l))) <= 1e3 * separation_tolerance)
                    return true;
            for (cplx g : guess)
                if (std::abs(lam - angular_eigenvalue(g)) <= 1e3 * separation_tolerance) return true;
            return false;
        };
        while (collides(L)) L += 1e-3;
        guess.push_back(L);
    }
    return guess;
}

/// True when every complex phase shift vanishes: the potential is zero and
/// no T-set disjoint from S exists.
inline bool is_zero_scattering(std::span<const PhaseShiftEntry> entries) {
    for (const auto& e : entries)
        if (std::abs(e.complex_shift()) > 1e-14) return false;
    return true;
}

}  // namespace ctinv
