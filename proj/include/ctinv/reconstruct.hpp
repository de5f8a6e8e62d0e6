#pragma once

// Potential reconstruction from a solved T-set: expansion functions A_L(x),
// the kernel diagonal K(x,x) = sum_L A_L(x) u_L(x), and
// q(x) = -(2/x) d/dx (K(x,x)/x).

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <sstream>
#include <vector>

#include "ctinv/domain.hpp"
#include "ctinv/error.hpp"
#include "ctinv/log.hpp"
#include "ctinv/specfun.hpp"

namespace ctinv {

/// Linear systems beyond this (equilibrated) condition number are singular.
inline constexpr double max_condition = 1e14;
/// Longest run of consecutive singular grid points repaired by interpolation.
inline constexpr std::size_t max_filled_run = 3;

struct KernelState {
    double x = 0.0;
    std::vector<cplx> a;   // A_L(x)
    std::vector<cplx> da;  // A_L'(x)
    cplx kdiag = 0.0;      // K(x,x)
    cplx dkdiag = 0.0;     // d/dx K(x,x)
};

namespace detail {

// System matrix G_{lL} = W[u_L, v_l] / (l(l+1) - L(L+1)) at one point,
// with row/column equilibration folded into the returned solver.
struct ExpansionSystem {
    Eigen::MatrixXcd g;
    Eigen::VectorXd row_scale;
    Eigen::VectorXd col_scale;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
    double condition = 0.0;

    ExpansionSystem(std::span<const cplx> t, std::span<const int> s,
                    std::span<const RiccatiPair> u_big, std::span<const RiccatiPair> v_small) {
        const auto n = static_cast<Eigen::Index>(s.size());
        g.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto& vl = v_small[static_cast<std::size_t>(i)];
            const double lam_l = static_cast<double>(s[static_cast<std::size_t>(i)]) *
                                 (s[static_cast<std::size_t>(i)] + 1.0);
            for (Eigen::Index j = 0; j < n; ++j) {
                const auto& uL = u_big[static_cast<std::size_t>(j)];
                const cplx w = uL.u * vl.dv - uL.du * vl.v;
                g(i, j) = w / (lam_l - angular_eigenvalue(t[static_cast<std::size_t>(j)]));
            }
        }
        row_scale.resize(n);
        col_scale.resize(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double m = g.row(i).cwiseAbs().maxCoeff();
            row_scale(i) = m > 0.0 ? 1.0 / m : 1.0;
        }
        Eigen::MatrixXcd scaled = row_scale.asDiagonal() * g;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double m = scaled.col(j).cwiseAbs().maxCoeff();
            col_scale(j) = m > 0.0 ? 1.0 / m : 1.0;
        }
        scaled = scaled * col_scale.asDiagonal();
        lu.compute(scaled);
        const double rc = lu.rcond();
        condition = rc > 0.0 && std::isfinite(rc) ? 1.0 / rc : std::numeric_limits<double>::infinity();
    }

    bool singular() const { return !(condition <= max_condition); }

    Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const {
        const Eigen::VectorXcd y = lu.solve(row_scale.asDiagonal() * rhs);
        return col_scale.asDiagonal() * y;
    }
};

inline std::vector<RiccatiPair> pairs_at(std::span<const cplx> orders, double x) {
    std::vector<RiccatiPair> out;
    for (cplx o : orders) out.push_back(specfun::riccati_bessel(o, x));
    return out;
}

inline std::vector<cplx> int_orders(std::span<const int> s) { return {s.begin(), s.end()}; }

inline void check_sizes(std::span<const cplx> t, std::span<const int> s) { validate_tset(t, s); }

inline SingularSystem singular_at(double x, double condition) {
    std::ostringstream msg;
    msg << "expansion system singular at x=" << x << " (condition " << condition << ")";
    return SingularSystem(msg.str(), condition);
}

// Kernel state from precomputed special-function values. Returns false when
// the system at this point is singular or produced non-finite values.
inline bool kernel_from_pairs(double x, std::span<const cplx> t, std::span<const int> s,
                              std::span<const RiccatiPair> u_big,
                              std::span<const RiccatiPair> v_small, KernelState& out,
                              double& condition) {
    const auto n = static_cast<Eigen::Index>(s.size());
    ExpansionSystem sys(t, s, u_big, v_small);
    condition = sys.condition;
    if (sys.singular()) return false;

    Eigen::VectorXcd v(n), dv(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = v_small[static_cast<std::size_t>(i)].v;
        dv(i) = v_small[static_cast<std::size_t>(i)].dv;
    }
    const Eigen::VectorXcd a = sys.solve(v);
    cplx k = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) k += a(j) * u_big[static_cast<std::size_t>(j)].u;
    // d/dx W[u_L, v_l] = u_L v_l (l(l+1) - L(L+1)) / x^2, so the derivative
    // system shares the matrix: G A' = v' - v K / x^2.
    const Eigen::VectorXcd da = sys.solve(dv - v * (k / (x * x)));
    cplx dk = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& p = u_big[static_cast<std::size_t>(j)];
        dk += da(j) * p.u + a(j) * p.du;
    }
    out.x = x;
    out.a.assign(a.data(), a.data() + n);
    out.da.assign(da.data(), da.data() + n);
    out.kdiag = k;
    out.dkdiag = dk;
    return a.allFinite() && da.allFinite() && std::isfinite(std::abs(k)) && std::isfinite(std::abs(dk));
}

inline cplx q_from_kernel(double x, cplx k, cplx dk) { return -2.0 / (x * x) * (dk - k / x); }

// Replace flagged samples by interpolation through the nearest good
// neighbours (linear, or extrapolated at the ends of the grid).
inline void fill_bad_points(std::span<const double> xs, std::vector<cplx>& q, const std::vector<bool>& bad,
                            const std::vector<double>& conditions, std::vector<std::size_t>& filled) {
    const std::size_t n = q.size();
    std::size_t i = 0;
    while (i < n) {
        if (!bad[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && bad[j]) ++j;
        if (j - i > max_filled_run) throw singular_at(xs[i], conditions[i]);
        // two good anchor points
        std::size_t a, b;
        if (i > 0 && j < n) {
            a = i - 1;
            b = j;
        } else if (i == 0 && j + 1 < n) {
            a = j;
            b = j + 1;
        } else if (j == n && i >= 2) {
            a = i - 2;
            b = i - 1;
        } else {
            throw singular_at(xs[i], conditions[i]);
        }
        for (std::size_t m = i; m < j; ++m) {
            const double w = (xs[m] - xs[a]) / (xs[b] - xs[a]);
            q[m] = q[a] + w * (q[b] - q[a]);
            filled.push_back(m);
        }
        i = j;
    }
}

}  // namespace detail

/// A_L(x) solving sum_L A_L W[u_L, v_l] / (l(l+1) - L(L+1)) = v_l, l in S.
inline std::vector<cplx> expansion_coeffs(const TSet& t, std::span<const int> s, double x) {
    detail::check_sizes(t.members(), s);
    const auto u_big = detail::pairs_at(t.members(), x);
    const auto v_small = detail::pairs_at(detail::int_orders(s), x);
    detail::ExpansionSystem sys(t.members(), s, u_big, v_small);
    if (sys.singular()) throw detail::singular_at(x, sys.condition);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) v(static_cast<Eigen::Index>(i)) = v_small[i].v;
    const Eigen::VectorXcd a = sys.solve(v);
    return {a.data(), a.data() + a.size()};
}

/// A_L'(x) from the differentiated system, given A_L(x) and K(x,x).
inline std::vector<cplx> expansion_coeffs_derivative(const TSet& t, std::span<const int> s, double x,
                                                     std::span<const cplx> a, cplx kdiag) {
    detail::check_sizes(t.members(), s);
    if (a.size() != s.size()) throw DomainError("expansion_coeffs_derivative: size mismatch");
    const auto u_big = detail::pairs_at(t.members(), x);
    const auto v_small = detail::pairs_at(detail::int_orders(s), x);
    detail::ExpansionSystem sys(t.members(), s, u_big, v_small);
    if (sys.singular()) throw detail::singular_at(x, sys.condition);
    Eigen::VectorXcd rhs(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i)
        rhs(static_cast<Eigen::Index>(i)) = v_small[i].dv - v_small[i].v * kdiag / (x * x);
    const Eigen::VectorXcd da = sys.solve(rhs);
    return {da.data(), da.data() + da.size()};
}

inline KernelState kernel_state(const TSet& t, std::span<const int> s, double x) {
    detail::check_sizes(t.members(), s);
    const auto u_big = detail::pairs_at(t.members(), x);
    const auto v_small = detail::pairs_at(detail::int_orders(s), x);
    KernelState st;
    double cond = 0.0;
    if (!detail::kernel_from_pairs(x, t.members(), s, u_big, v_small, st, cond))
        throw detail::singular_at(x, cond);
    return st;
}

namespace detail {

// K(x,x) and K'(x,x) on the whole grid; bad marks singular points.
inline void kernel_on_grid(const TSet& t, std::span<const int> s, std::span<const double> xs,
                           std::vector<cplx>& k, std::vector<cplx>& dk, std::vector<bool>& bad,
                           std::vector<double>& conditions) {
    const std::size_t n = xs.size();
    std::vector<std::vector<RiccatiPair>> u_cols, v_cols;
    for (cplx L : t.members()) u_cols.push_back(specfun::riccati_bessel(L, xs));
    for (int l : s) v_cols.push_back(specfun::riccati_bessel(cplx(l), xs));
    k.assign(n, 0.0);
    dk.assign(n, 0.0);
    bad.assign(n, false);
    conditions.assign(n, 0.0);
    std::vector<RiccatiPair> u_big(t.size()), v_small(s.size());
    KernelState st;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < t.size(); ++j) u_big[j] = u_cols[j][i];
        for (std::size_t j = 0; j < s.size(); ++j) v_small[j] = v_cols[j][i];
        if (kernel_from_pairs(xs[i], t.members(), s, u_big, v_small, st, conditions[i])) {
            k[i] = st.kdiag;
            dk[i] = st.dkdiag;
        } else {
            bad[i] = true;
        }
    }
}

inline PotentialCurve finish_curve(const RadialGrid& grid, std::vector<cplx> q, double energy, double k,
                                   std::vector<std::size_t> filled) {
    PotentialCurve curve;
    curve.grid = grid;
    curve.energy = energy;
    curve.k = k;
    const auto xs = grid.points();
    curve.q_origin = extrapolate_to_origin(xs, q);
    curve.q = std::move(q);
    curve.filled_points = std::move(filled);
    if (!curve.filled_points.empty()) {
        std::ostringstream msg;
        msg << "potential: " << curve.filled_points.size() << " singular grid points interpolated";
        log::warn(msg.str());
    }
    return curve;
}

}  // namespace detail

/// q(x) = -(2/x^2)(K' - K/x) on the grid, with V(r) = E q(k r).
inline PotentialCurve potential(const TSet& t, std::span<const int> s, const RadialGrid& grid, double energy,
                                double k) {
    grid.validate();
    detail::check_sizes(t.members(), s);
    const auto xs = grid.points();
    std::vector<cplx> q(xs.size(), 0.0);
    std::vector<std::size_t> filled;
    if (!t.empty()) {
        std::vector<cplx> kd, dkd;
        std::vector<bool> bad;
        std::vector<double> cond;
        detail::kernel_on_grid(t, s, xs, kd, dkd, bad, cond);
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (!bad[i]) q[i] = detail::q_from_kernel(xs[i], kd[i], dkd[i]);
        detail::fill_bad_points(xs, q, bad, cond, filled);
    }
    return detail::finish_curve(grid, std::move(q), energy, k, std::move(filled));
}

/// Cross-check path: K(x,x)/x differentiated by finite differences with the
/// grid step (central inside, second-order one-sided at the ends).
inline PotentialCurve potential_fd(const TSet& t, std::span<const int> s, const RadialGrid& grid, double energy,
                                   double k) {
    grid.validate();
    detail::check_sizes(t.members(), s);
    const auto xs = grid.points();
    const std::size_t n = xs.size();
    std::vector<cplx> q(n, 0.0);
    std::vector<std::size_t> filled;
    if (!t.empty()) {
        std::vector<cplx> kd, dkd;
        std::vector<bool> bad;
        std::vector<double> cond;
        detail::kernel_on_grid(t, s, xs, kd, dkd, bad, cond);
        std::vector<cplx> f(n);
        for (std::size_t i = 0; i < n; ++i) f[i] = kd[i] / xs[i];
        const double h = grid.step();
        for (std::size_t i = 0; i < n; ++i) {
            cplx df;
            if (i == 0)
                df = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
            else if (i + 1 == n)
                df = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
            else
                df = (f[i + 1] - f[i - 1]) / (xs[i + 1] - xs[i - 1]);
            q[i] = -2.0 / xs[i] * df;
        }
        // a bad sample spoils its neighbours' differences too
        std::vector<bool> spread(n, false);
        for (std::size_t i = 0; i < n; ++i)
            if (bad[i])
                for (std::size_t j = i > 0 ? i - 1 : 0; j <= std::min(n - 1, i + 1); ++j) spread[j] = true;
        detail::fill_bad_points(xs, q, spread, cond, filled);
    }
    return detail::finish_curve(grid, std::move(q), energy, k, std::move(filled));
}

}  // namespace ctinv
