#pragma once

// Published reference data used across the unit and acceptance tests.

#include <array>
#include <vector>

#include "ctinv/domain.hpp"

namespace fixtures {

using ctinv::cplx;

// Gauss potential V = -2 exp(-5 r^2) au at E = 18 au, k = 6.
inline constexpr double gauss_energy = 18.0;
inline constexpr double gauss_k = 6.0;
inline constexpr std::array<double, 11> gauss_delta{0.1294, 0.0964, 0.0535, 0.0232, 0.0082, 0.0025,
                                                    0.0006, 0.0001, 0.0, 0.0, 0.0};
inline constexpr std::array<double, 11> gauss_general{-0.0893, 0.9392, 1.9676, 2.9865, 3.9955, 4.9989,
                                                      5.9999,  7.0001, 8.0002, 9.0001, 10.0001};
inline constexpr std::array<double, 11> gauss_parity{-0.0809, 0.9391, 1.9666, 2.9861, 3.9954, 4.9989,
                                                     5.9999,  7.0001, 8.0002, 9.0001, 10.0001};
inline constexpr std::array<double, 11> gauss_one_term{-0.0824, 0.9386, 1.9659, 2.9852, 3.9948, 4.9984,
                                                       5.9996,  6.9999, 8.0000, 9.0000, 10.0000};

inline ctinv::PhaseShiftSet gauss_problem(int lmax = 10) {
    std::vector<ctinv::PhaseShiftEntry> e;
    for (int l = 0; l <= lmax; ++l) e.push_back({l, gauss_delta[static_cast<std::size_t>(l)], 1.0});
    return {gauss_energy, gauss_k, e, "au"};
}

inline ctinv::PhaseShiftSet gauss_subset(int parity) {
    std::vector<ctinv::PhaseShiftEntry> e;
    for (int l = parity; l <= 10; l += 2) e.push_back({l, gauss_delta[static_cast<std::size_t>(l)], 1.0});
    return {gauss_energy, gauss_k, e, "au"};
}

// n + 12C at E_cm = 9.23 MeV, k = 0.638 fm^-1.
inline constexpr double carbon_energy = 9.23;
inline constexpr double carbon_k = 0.638;
inline constexpr std::array<double, 5> carbon_delta{0.827, -0.562, -0.365, 0.057, 0.021};
inline constexpr std::array<double, 5> carbon_eta{0.580, 0.723, 0.526, 0.846, 0.959};
inline const std::array<cplx, 5> carbon_ct{cplx(-0.581, -0.085), cplx(1.226, 0.001), cplx(2.349, -0.192),
                                           cplx(2.981, -0.073), cplx(4.010, -0.062)};
inline const std::array<cplx, 5> carbon_a{cplx(-0.583, -0.076), cplx(1.360, -0.122), cplx(2.259, -0.203),
                                          cplx(3.011, -0.084), cplx(4.001, -0.050)};
inline const std::array<cplx, 5> carbon_l{cplx(-0.527, -0.173), cplx(1.358, -0.103), cplx(2.232, -0.205),
                                          cplx(2.964, -0.053), cplx(3.987, -0.013)};

inline ctinv::PhaseShiftSet carbon_problem() {
    std::vector<ctinv::PhaseShiftEntry> e;
    for (int l = 0; l < 5; ++l)
        e.push_back({l, carbon_delta[static_cast<std::size_t>(l)], carbon_eta[static_cast<std::size_t>(l)]});
    return {carbon_energy, carbon_k, e, "MeV,fm"};
}

// 87Rb pair, l = 0, 2, 4 at E = 0.303 mK.
inline constexpr std::array<int, 3> rb_l{0, 2, 4};
inline constexpr std::array<double, 3> rb_delta{-1.287, 1.635, 0.005};
inline constexpr std::array<double, 3> rb_roundtrip{0.014, 0.042, 0.004};

}  // namespace fixtures
