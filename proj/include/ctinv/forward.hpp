#pragma once

// Forward problem: integrate the radial equation
//   psi'' = (q(x) - 1 + l(l+1)/x^2) psi
// outward with Numerov's method and match to free solutions beyond the
// potential's range to get delta_l and eta_l.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <sstream>
#include <vector>

#include "ctinv/domain.hpp"
#include "ctinv/error.hpp"
#include "ctinv/log.hpp"
#include "ctinv/specfun.hpp"

namespace ctinv {

/// Dimensionless potential q(x); taken as zero beyond `range`.
struct PotentialFn {
    std::function<cplx(double)> q;
    double range = 0.0;
};

/// q(x) = (depth/E) exp(-width (x/k)^2), i.e. V(r) = depth exp(-width r^2).
inline PotentialFn gauss_potential(double depth, double width, double energy, double k) {
    if (!(width > 0.0) || !(energy > 0.0) || !(k > 0.0))
        throw DomainError("gauss potential: width, energy and k must be positive");
    const double q0 = depth / energy;
    // beyond this radius |q| < 1e-14 * |q0|
    const double range = k * std::sqrt(std::log(1e14) / width);
    return {[=](double x) { return cplx(q0 * std::exp(-width * (x / k) * (x / k))); }, range};
}

/// Cubic Lagrange interpolation of a sampled curve, anchored at x = 0 by the
/// extrapolated origin value.
inline PotentialFn interpolate(const PotentialCurve& curve) {
    auto nodes = std::make_shared<std::vector<double>>();
    auto values = std::make_shared<std::vector<cplx>>();
    nodes->push_back(0.0);
    values->push_back(curve.q_origin);
    const auto xs = curve.grid.points();
    nodes->insert(nodes->end(), xs.begin(), xs.end());
    values->insert(values->end(), curve.q.begin(), curve.q.end());
    const double x_max = curve.grid.x_max;
    return {[nodes, values, x_max](double x) -> cplx {
                if (x > x_max) return 0.0;
                const auto& n = *nodes;
                const std::size_t m = n.size();
                std::size_t hi = static_cast<std::size_t>(std::upper_bound(n.begin(), n.end(), x) - n.begin());
                std::size_t first = hi >= 2 ? hi - 2 : 0;
                first = std::min(first, m - 4);
                cplx sum = 0.0;
                for (std::size_t i = first; i < first + 4; ++i) {
                    double w = 1.0;
                    for (std::size_t j = first; j < first + 4; ++j)
                        if (j != i) w *= (x - n[j]) / (n[i] - n[j]);
                    sum += w * (*values)[i];
                }
                return sum;
            },
            x_max};
}

struct ForwardOptions {
    double step = 0.01;          // Numerov step in x
    int refine = 4;              // step divisor near the origin
    double refine_until = 1.0;   // end of the refined region
    double match_radius = 0.0;   // 0: the potential's range
    bool keep_wavefunction = false;
};

struct ChannelSolution {
    int l = 0;
    double delta = 0.0;  // principal branch (-pi/2, pi/2]
    double eta = 1.0;
    cplx s_matrix = 1.0;
    double match_radius = 0.0;
    std::vector<double> xs;  // wavefunction samples when requested
    std::vector<cplx> wavefunction;
};

namespace detail {

inline constexpr double overflow_limit = 1e200;

// Numerov recursion state for psi'' = f psi.
struct Numerov {
    const PotentialFn& pot;
    double lam;
    double range;

    cplx f(double x) const {
        const cplx q = x <= range ? pot.q(x) : cplx(0.0);
        return q - 1.0 + lam / (x * x);
    }
};

}  // namespace detail

inline ChannelSolution integrate_radial(const PotentialFn& pot, int l, const ForwardOptions& opts = {}) {
    if (l < 0) throw DomainError("integrate_radial: negative angular momentum");
    if (!(opts.step > 0.0) || opts.refine < 1) throw DomainError("integrate_radial: bad step options");
    const double h = opts.step;
    const double hf = h / opts.refine;
    const double x_match = opts.match_radius > 0.0 ? opts.match_radius : pot.range;
    if (!(x_match > 0.0)) throw DomainError("integrate_radial: potential range must be positive");
    const double lam = static_cast<double>(l) * (l + 1.0);
    detail::Numerov nm{pot, lam, pot.range};

    // matching points on the coarse mesh, about a quarter period apart
    const long n_match = static_cast<long>(std::ceil(x_match / h));
    const long n_delta = std::max(1L, std::lround(0.5 * std::numbers::pi / h));
    const double xa = static_cast<double>(n_match) * h;
    const double xb = static_cast<double>(n_match + n_delta) * h;
    const long n_refined_coarse = std::max(2L, std::min(n_match, std::lround(opts.refine_until / h)));

    // regular start psi = x^{l+1} (1 + c x^2), c = (q(0) - 1)/(4l + 6)
    const cplx q0 = pot.q(hf);
    const cplx c = (q0 - 1.0) / (4.0 * l + 6.0);
    auto series = [&](double x) { return std::pow(x, l + 1) * (1.0 + c * x * x); };

    ChannelSolution out;
    out.l = l;
    out.match_radius = xa;

    // fine stage on x = k hf, k = 1 .. refine * n_refined_coarse
    const long n_fine = static_cast<long>(opts.refine) * n_refined_coarse;
    cplx y_prev = series(hf), y = series(2.0 * hf);
    cplx f_prev = nm.f(hf), f_cur = nm.f(2.0 * hf);
    const double hf2 = hf * hf / 12.0;
    // keep the value at x_end - h for the switch to the coarse step
    cplx y_coarse_prev = 0.0;
    const long k_coarse_prev = n_fine - opts.refine;
    if (k_coarse_prev == 1) y_coarse_prev = y_prev;
    if (k_coarse_prev == 2) y_coarse_prev = y;
    if (k_coarse_prev <= 0) y_coarse_prev = 0.0;  // x = 0, psi = 0
    auto record = [&](double x, cplx v) {
        if (opts.keep_wavefunction) {
            out.xs.push_back(x);
            out.wavefunction.push_back(v);
        }
    };
    record(hf, y_prev);
    record(2.0 * hf, y);
    for (long k = 3; k <= n_fine; ++k) {
        const double x = static_cast<double>(k) * hf;
        const cplx f_next = nm.f(x);
        const cplx y_next = (2.0 * y * (1.0 + 5.0 * hf2 * f_cur) - y_prev * (1.0 - hf2 * f_prev)) /
                            (1.0 - hf2 * f_next);
        y_prev = y;
        y = y_next;
        f_prev = f_cur;
        f_cur = f_next;
        if (k == k_coarse_prev) y_coarse_prev = y;
        if (std::abs(y) > detail::overflow_limit) {
            const double s = 1.0 / detail::overflow_limit;
            y *= s;
            y_prev *= s;
            y_coarse_prev *= s;
        }
        record(x, y);
    }

    // coarse stage from x = n_refined_coarse * h
    const double h2 = h * h / 12.0;
    long j = n_refined_coarse;
    cplx ym = y_coarse_prev, y0 = y;
    cplx fm = j - 1 > 0 ? nm.f(static_cast<double>(j - 1) * h) : cplx(0.0);
    cplx f0 = nm.f(static_cast<double>(j) * h);
    cplx ya = j == n_match ? y0 : cplx(0.0);
    if (j > n_match) throw DomainError("integrate_radial: refined region extends past the match radius");
    for (; j < n_match + n_delta; ++j) {
        const double x = static_cast<double>(j + 1) * h;
        const cplx f1 = nm.f(x);
        const cplx y1 = (2.0 * y0 * (1.0 + 5.0 * h2 * f0) - ym * (1.0 - h2 * fm)) / (1.0 - h2 * f1);
        ym = y0;
        y0 = y1;
        fm = f0;
        f0 = f1;
        if (std::abs(y0) > detail::overflow_limit) {
            const double s = 1.0 / detail::overflow_limit;
            y0 *= s;
            ym *= s;
            ya *= s;
        }
        if (!std::isfinite(std::abs(y0))) throw DomainError("integrate_radial: overflow in the wavefunction");
        if (j + 1 == n_match) ya = y0;
        record(x, y0);
    }
    const cplx yb = y0;

    // psi = alpha u_l + beta v_l at xa and xb
    const RiccatiPair pa = specfun::riccati_bessel(cplx(l), xa);
    const RiccatiPair pb = specfun::riccati_bessel(cplx(l), xb);
    const cplx det = pa.u * pb.v - pa.v * pb.u;
    if (std::abs(det) < 1e-12) throw DomainError("integrate_radial: degenerate matching points");
    const cplx alpha = (ya * pb.v - pa.v * yb) / det;
    const cplx beta = (pa.u * yb - ya * pb.u) / det;
    const cplx i(0.0, 1.0);
    out.s_matrix = (alpha + i * beta) / (alpha - i * beta);
    out.eta = std::abs(out.s_matrix);
    out.delta = 0.5 * std::arg(out.s_matrix);
    if (out.delta <= -0.5 * std::numbers::pi) out.delta += std::numbers::pi;
    return out;
}

namespace detail {

inline void warn_on_tail(const PotentialCurve& curve) {
    const double tail = curve.q.empty() ? 0.0 : std::abs(curve.q.back());
    if (tail > 1e-8) {
        std::ostringstream msg;
        msg << "forward: |q(x_max)| = " << tail << " exceeds 1e-8; tail truncated";
        log::warn(msg.str());
    }
}

inline ForwardOptions curve_options(const PotentialCurve& curve, ForwardOptions opts) {
    opts.step = curve.grid.step();
    if (opts.match_radius <= 0.0) opts.match_radius = curve.grid.x_max;
    return opts;
}

}  // namespace detail

/// Integrate against a sampled curve: step = grid step, matched at the
/// grid end with the tail beyond it dropped.
inline ChannelSolution integrate_radial(const PotentialCurve& curve, int l, const ForwardOptions& opts = {}) {
    detail::warn_on_tail(curve);
    return integrate_radial(interpolate(curve), l, detail::curve_options(curve, opts));
}

/// |a - b| reduced modulo pi to the nearest branch.
inline double phase_difference(double a, double b) {
    return std::abs(std::remainder(a - b, std::numbers::pi));
}

inline std::vector<RoundtripEntry> roundtrip_report(const PhaseShiftSet& problem, const PotentialCurve& curve,
                                                    const ForwardOptions& opts = {}) {
    detail::warn_on_tail(curve);
    const auto pot = interpolate(curve);
    const auto copts = detail::curve_options(curve, opts);
    std::vector<RoundtripEntry> out;
    for (const auto& e : problem.entries()) {
        const auto ch = integrate_radial(pot, e.l, copts);
        RoundtripEntry r;
        r.l = e.l;
        r.delta_orig = e.delta;
        r.delta_recomputed = ch.delta;
        r.eta_orig = e.eta;
        r.eta_recomputed = ch.eta;
        r.delta_diff = phase_difference(e.delta, ch.delta);
        r.eta_diff = std::abs(e.eta - ch.eta);
        out.push_back(r);
    }
    return out;
}

/// Phase shifts of an analytic potential for l = 0 .. lmax.
inline PhaseShiftSet forward_phase_shifts(const PotentialFn& pot, int lmax, double energy, double k,
                                          const ForwardOptions& opts = {}, const std::string& units = "") {
    std::vector<PhaseShiftEntry> entries;
    for (int l = 0; l <= lmax; ++l) {
        const auto ch = integrate_radial(pot, l, opts);
        if (ch.eta > 1.0 + 1e-9) throw DomainError("forward: elasticity above 1 (emissive potential)");
        entries.push_back({l, ch.delta, std::min(ch.eta, 1.0)});
    }
    return {energy, k, entries, units};
}

}  // namespace ctinv
