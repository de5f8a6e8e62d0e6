#pragma once

// Riccati-Bessel functions u_nu(x), v_nu(x) of real argument and complex order.
//
//   u_nu(x) =  sqrt(pi x / 2) J_{nu+1/2}(x)   ~ sin(x - nu pi/2)
//   v_nu(x) = -sqrt(pi x / 2) Y_{nu+1/2}(x)   ~ cos(x - nu pi/2)
//
// Both solve y'' = (nu(nu+1)/x^2 - 1) y and satisfy u v' - u' v = -1.
//
// Evaluation (for Re nu >= -1/2; lower orders go through the reflection
// nu -> -nu-1):
//   * u: ascending power series for x <= 2, continued outward with a Taylor
//     series integrator of the differential equation.
//   * v: Hankel asymptotic expansion at a start point X_a(nu) where it has
//     converged to machine precision, continued inward with the same
//     integrator.
//   * both: Hankel expansion directly for x >= X_a(nu).
// Each solution is propagated in its stable direction (u outward, v inward),
// so the relative accuracy of the pair stays near 1e-13 over the envelope.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include "ctinv/error.hpp"
#include "ctinv/log.hpp"

namespace ctinv {

using cplx = std::complex<double>;

/// Angular eigenvalue lambda = L(L+1).
inline cplx angular_eigenvalue(cplx order) { return order * (order + 1.0); }

struct RiccatiPair {
    cplx u;   // regular solution
    cplx du;  // u'
    cplx v;   // irregular solution
    cplx dv;  // v'

    cplx wronskian() const { return u * dv - du * v; }
};

namespace specfun {

inline constexpr double pi = std::numbers::pi;

/// Supported envelope; outside it accuracy is not guaranteed.
inline constexpr double max_abs_real_order = 20.0;
inline constexpr double max_abs_imag_order = 2.0;

// Lanczos approximation, g = 7, n = 9.
inline cplx log_gamma(cplx z) {
    static constexpr std::array<double, 9> coeff = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5) {
        // Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(1.0 - z);
    }
    z -= 1.0;
    cplx acc = coeff[0];
    for (std::size_t i = 1; i < coeff.size(); ++i) acc += coeff[i] / (z + static_cast<double>(i));
    const cplx t = z + 7.5;
    return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(acc);
}

inline bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real());
}

inline cplx gamma(cplx z) {
    if (is_nonpositive_integer(z)) throw DomainError("gamma: pole at non-positive integer");
    return std::exp(log_gamma(z));
}

/// 1/Gamma(z), entire.
inline cplx rgamma(cplx z) {
    if (is_nonpositive_integer(z)) return 0.0;
    return std::exp(-log_gamma(z));
}

namespace detail {

inline constexpr double series_limit = 2.0;
inline constexpr double term_tol = 1e-17;

struct Value {
    cplx y;
    cplx dy;
};

// u_nu(x) by its ascending series, Re nu >= -1/2.
inline Value regular_series(cplx nu, double x) {
    const cplx mu = nu + 0.5;
    const double z = -0.25 * x * x;
    cplx term = rgamma(nu + 1.5);
    cplx sum = term;
    cplx dsum = term * (nu + 1.0);
    for (int k = 1; k < 200; ++k) {
        term *= z / (static_cast<double>(k) * (static_cast<double>(k) + mu));
        sum += term;
        dsum += term * (nu + 1.0 + 2.0 * k);
        if (std::abs(term) <= term_tol * std::abs(sum) && k > 2) break;
    }
    const cplx pref = 0.5 * std::sqrt(pi) * x * std::exp(nu * std::log(0.5 * x));
    return {pref * sum, pref / x * dsum};
}

// Hankel expansion at x; empty when it has not converged to machine precision.
inline std::optional<RiccatiPair> hankel_asymptotic(cplx nu, double x) {
    const cplx four_mu2 = 4.0 * (nu + 0.5) * (nu + 0.5);
    cplx p = 1.0, q = 0.0, dp = 0.0, dq = 0.0;
    cplx a = 1.0;  // a_k(mu) / x^k
    double largest = 1.0;
    double previous = 1.0;
    bool converged = false;
    for (int k = 1; k < 400; ++k) {
        const double odd = 2.0 * k - 1.0;
        a *= (four_mu2 - odd * odd) / (8.0 * k * x);
        const double mag = std::abs(a);
        // exact termination for half-integer mu
        if (mag == 0.0) {
            converged = true;
            break;
        }
        if (mag > previous && mag > term_tol && k > 2 * std::abs(nu) + 4) return std::nullopt;
        previous = mag;
        largest = std::max(largest, mag);
        const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        const cplx da = -static_cast<double>(k) / x * a;
        if (k % 2 == 0) {
            p += sign * a;
            dp += sign * da;
        } else {
            q += sign * a;
            dq += sign * da;
        }
        if (mag < term_tol) {
            converged = true;
            break;
        }
    }
    if (!converged || largest > 1e2) return std::nullopt;
    const cplx phase = x - 0.5 * pi * nu;
    const cplx s = std::sin(phase);
    const cplx c = std::cos(phase);
    RiccatiPair r;
    r.u = p * s + q * c;
    r.v = p * c - q * s;
    r.du = dp * s + p * c + dq * c - q * s;
    r.dv = dp * c - p * s - dq * s - q * c;
    return r;
}

// Smallest tabulated radius where the Hankel expansion is converged.
inline double asymptotic_start(cplx nu) {
    static constexpr std::array<double, 16> ladder = {16.0,  20.0,  25.0,  32.0,  40.0,  50.0,
                                                      64.0,  80.0,  100.0, 128.0, 160.0, 200.0,
                                                      256.0, 320.0, 400.0, 512.0};
    for (double x : ladder)
        if (hankel_asymptotic(nu, x)) return x;
    std::ostringstream msg;
    msg << "riccati_bessel: asymptotic expansion did not converge for order " << nu;
    throw DomainError(msg.str());
}

// One Taylor step of y'' = (lambda/x^2 - 1) y from xc to xc + t. Returns false
// if the series did not converge (caller shortens the step).
inline bool taylor_step(cplx lambda, double xc, Value& state, double t) {
    const double xc2 = xc * xc;
    // d_n = c_n t^n
    cplx d_m2 = 0.0, d_m1 = 0.0;
    cplx d0 = state.y;
    cplx d1 = state.dy * t;
    cplx y = d0 + d1;
    cplx dsum = d1;
    int small = 0;
    for (int n = 0; n < 160; ++n) {
        const double nn = static_cast<double>(n);
        const cplx next = ((lambda - xc2 - nn * (nn - 1.0)) * d0 * (t * t) -
                           2.0 * xc * nn * (nn + 1.0) * d1 * t - 2.0 * xc * d_m1 * (t * t * t) -
                           d_m2 * (t * t * t * t)) /
                          (xc2 * (nn + 1.0) * (nn + 2.0));
        y += next;
        dsum += (nn + 2.0) * next;
        d_m2 = d_m1;
        d_m1 = d0;
        d0 = d1;
        d1 = next;
        const double scale = std::abs(y) + std::abs(dsum);
        if ((nn + 2.0) * std::abs(next) <= term_tol * scale) {
            if (++small >= 3) {
                state = {y, dsum / t};
                return std::isfinite(y.real()) && std::isfinite(y.imag());
            }
        } else {
            small = 0;
        }
    }
    return false;
}

inline constexpr double max_step = 1.0;
inline constexpr double step_fraction = 0.25;

// Propagate (y, y') of the free radial equation from x0 to x1.
inline void propagate(cplx lambda, double x0, Value& state, double x1) {
    double x = x0;
    while (x != x1) {
        const double dir = x1 > x ? 1.0 : -1.0;
        double h = std::min({std::abs(x1 - x), max_step, step_fraction * x});
        for (int attempt = 0;; ++attempt) {
            Value trial = state;
            if (taylor_step(lambda, x, trial, dir * h)) {
                state = trial;
                break;
            }
            if (attempt > 30) throw DomainError("riccati_bessel: Taylor propagation failed");
            h *= 0.5;
        }
        x = (std::abs(x1 - x) <= h) ? x1 : x + dir * h;
    }
}

inline void check_envelope(cplx nu) {
    if (std::abs(nu.real()) > max_abs_real_order || std::abs(nu.imag()) > max_abs_imag_order) {
        std::ostringstream msg;
        msg << "riccati_bessel: order " << nu << " outside supported envelope, accuracy not guaranteed";
        log::warn(msg.str());
    }
}

inline void check_argument(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        std::ostringstream msg;
        msg << "riccati_bessel: argument must be positive and finite, got " << x;
        throw DomainError(msg.str());
    }
}

// Evaluate at ascending points xs for Re nu >= -1/2.
inline std::vector<RiccatiPair> sweep_upper(cplx nu, std::span<const double> xs) {
    std::vector<RiccatiPair> out(xs.size());
    if (xs.empty()) return out;
    const cplx lambda = angular_eigenvalue(nu);
    const double xa = asymptotic_start(nu);

    // regular solution, outward
    std::optional<Value> u_state;
    double u_at = series_limit;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        if (x >= xa) {
            auto r = hankel_asymptotic(nu, x);
            if (r) {
                out[i].u = r->u;
                out[i].du = r->du;
                continue;
            }
        }
        if (x <= series_limit) {
            const Value s = regular_series(nu, x);
            out[i].u = s.y;
            out[i].du = s.dy;
            continue;
        }
        if (!u_state) u_state = regular_series(nu, series_limit);
        propagate(lambda, u_at, *u_state, x);
        u_at = x;
        out[i].u = u_state->y;
        out[i].du = u_state->dy;
    }

    // irregular solution, inward
    std::optional<Value> v_state;
    double v_at = xa;
    for (std::size_t j = xs.size(); j-- > 0;) {
        const double x = xs[j];
        if (x >= xa) {
            auto r = hankel_asymptotic(nu, x);
            if (r) {
                out[j].v = r->v;
                out[j].dv = r->dv;
                continue;
            }
        }
        if (!v_state) {
            const RiccatiPair start = *hankel_asymptotic(nu, xa);
            v_state = Value{start.v, start.dv};
            v_at = xa;
        }
        propagate(lambda, v_at, *v_state, std::min(x, v_at));
        v_at = std::min(x, v_at);
        out[j].v = v_state->y;
        out[j].dv = v_state->dy;
    }
    return out;
}

}  // namespace detail

/// u_nu, v_nu and their derivatives at every x (any order of xs; each x > 0).
inline std::vector<RiccatiPair> riccati_bessel(cplx order, std::span<const double> xs) {
    detail::check_envelope(order);
    for (double x : xs) detail::check_argument(x);

    std::vector<std::size_t> idx(xs.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> sorted(xs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) sorted[i] = xs[idx[i]];

    // orders below -1/2 reuse the pair of order -nu-1 rotated by theta
    const bool reflect = order.real() < -0.5;
    const cplx base = reflect ? -order - 1.0 : order;
    const auto values = detail::sweep_upper(base, sorted);

    std::vector<RiccatiPair> out(xs.size());
    if (!reflect) {
        for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] = values[i];
        return out;
    }
    const cplx theta = (base + 0.5) * pi;
    const cplx c = std::cos(theta);
    const cplx s = std::sin(theta);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const RiccatiPair& b = values[i];
        out[idx[i]] = {c * b.u + s * b.v, c * b.du + s * b.dv, c * b.v - s * b.u,
                       c * b.dv - s * b.du};
    }
    return out;
}

inline RiccatiPair riccati_bessel(cplx order, double x) {
    const std::array<double, 1> xs{x};
    return riccati_bessel(order, std::span<const double>(xs))[0];
}

/// W[u_L, v_l](x) = u_L v_l' - u_L' v_l.
inline cplx cross_wronskian(cplx order, int l, double x) {
    const RiccatiPair a = riccati_bessel(order, x);
    const RiccatiPair b = riccati_bessel(cplx(l), x);
    return a.u * b.dv - a.du * b.v;
}

/// n points log-spaced over [lo, hi].
inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    std::vector<double> xs(n);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        xs[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    xs.front() = lo;
    xs.back() = hi;
    return xs;
}

/// max |W + 1| over xs.
inline double wronskian_defect(cplx order, std::span<const double> xs) {
    double worst = 0.0;
    for (const auto& p : riccati_bessel(order, xs)) worst = std::max(worst, std::abs(p.wronskian() + 1.0));
    return worst;
}

}  // namespace specfun
}  // namespace ctinv
