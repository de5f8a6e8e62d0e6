#pragma once

// Core data model: phase-shift input, shifted angular momentum sets, radial
// grids, potential curves and inversion reports.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "ctinv/error.hpp"
#include "ctinv/specfun.hpp"

namespace ctinv {

/// Minimum separation in lambda = L(L+1) between members of T and of S.
inline constexpr double separation_tolerance = 1e-6;

struct PhaseShiftEntry {
    int l = 0;
    double delta = 0.0;  // radians
    double eta = 1.0;    // elasticity in (0, 1]

    /// delta - (i/2) ln eta, so that S_l = exp(2i * complex_shift).
    cplx complex_shift() const { return {delta, -0.5 * std::log(eta)}; }

    cplx s_matrix() const { return eta * std::exp(cplx(0.0, 2.0 * delta)); }

    void validate() const {
        if (l < 0) throw DomainError("phase shift entry: negative angular momentum");
        if (!std::isfinite(delta)) throw DomainError("phase shift entry: non-finite delta");
        if (!(eta > 0.0 && eta <= 1.0)) {
            std::ostringstream msg;
            msg << "phase shift entry l=" << l << ": elasticity " << eta << " outside (0, 1]";
            throw DomainError(msg.str());
        }
    }
};

/// Entry built from a complex phase shift: delta = Re, eta = exp(-2 Im).
inline PhaseShiftEntry entry_from_complex(int l, cplx shift) {
    return {l, shift.real(), std::exp(-2.0 * shift.imag())};
}

/// Phase shifts at one energy. Entries are kept sorted by l, all l distinct.
class PhaseShiftSet {
  public:
    PhaseShiftSet() = default;

    PhaseShiftSet(double energy, double k, std::vector<PhaseShiftEntry> entries,
                  std::string units = "")
        : energy_(energy), k_(k), units_(std::move(units)), entries_(std::move(entries)) {
        if (!(energy_ > 0.0) || !(k_ > 0.0))
            throw DomainError("phase shift set: energy and k must be positive");
        for (const auto& e : entries_) e.validate();
        std::sort(entries_.begin(), entries_.end(),
                  [](const PhaseShiftEntry& a, const PhaseShiftEntry& b) { return a.l < b.l; });
        for (std::size_t i = 1; i < entries_.size(); ++i)
            if (entries_[i].l == entries_[i - 1].l) {
                std::ostringstream msg;
                msg << "phase shift set: duplicate angular momentum l=" << entries_[i].l;
                throw DomainError(msg.str());
            }
    }

    double energy() const { return energy_; }
    double k() const { return k_; }
    const std::string& units() const { return units_; }
    const std::vector<PhaseShiftEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    /// The set S of physical angular momenta.
    std::vector<int> angular_momenta() const {
        std::vector<int> s;
        s.reserve(entries_.size());
        for (const auto& e : entries_) s.push_back(e.l);
        return s;
    }

    bool elastic() const {
        return std::all_of(entries_.begin(), entries_.end(),
                           [](const PhaseShiftEntry& e) { return e.eta == 1.0; });
    }

    friend bool operator==(const PhaseShiftSet& a, const PhaseShiftSet& b) {
        if (a.energy_ != b.energy_ || a.k_ != b.k_ || a.units_ != b.units_) return false;
        if (a.entries_.size() != b.entries_.size()) return false;
        for (std::size_t i = 0; i < a.entries_.size(); ++i) {
            const auto& x = a.entries_[i];
            const auto& y = b.entries_[i];
            if (x.l != y.l || x.delta != y.delta || x.eta != y.eta) return false;
        }
        return true;
    }

  private:
    double energy_ = 1.0;
    double k_ = 1.0;
    std::string units_;
    std::vector<PhaseShiftEntry> entries_;
};

/// Weighted spin-orbit average [(l+1) d+ + l d-] / (2l+1).
inline cplx combine_spin_orbit(int l, cplx delta_plus, cplx delta_minus) {
    if (l < 0) throw DomainError("combine_spin_orbit: negative angular momentum");
    const double w = static_cast<double>(l);
    return ((w + 1.0) * delta_plus + w * delta_minus) / (2.0 * w + 1.0);
}

enum class TSetTag { general, even, odd, union_set, one_term };

inline const char* to_string(TSetTag tag) {
    switch (tag) {
        case TSetTag::general: return "general";
        case TSetTag::even: return "even";
        case TSetTag::odd: return "odd";
        case TSetTag::union_set: return "union";
        case TSetTag::one_term: return "one-term";
    }
    return "general";
}

inline TSetTag tset_tag_from_string(const std::string& text) {
    if (text == "general") return TSetTag::general;
    if (text == "even") return TSetTag::even;
    if (text == "odd") return TSetTag::odd;
    if (text == "union") return TSetTag::union_set;
    if (text == "one-term") return TSetTag::one_term;
    throw ParseError("unknown T-set tag '" + text + "'");
}

/// Throws InvalidTSet unless T is pairwise distinct and disjoint from S in
/// lambda = L(L+1), and |T| == |S|.
inline void validate_tset(std::span<const cplx> members, std::span<const int> s) {
    if (members.size() != s.size()) {
        std::ostringstream msg;
        msg << "T-set has " << members.size() << " members but S has " << s.size();
        throw InvalidTSet(msg.str());
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
        const cplx li = angular_eigenvalue(members[i]);
        if (!std::isfinite(li.real()) || !std::isfinite(li.imag()))
            throw InvalidTSet("T-set member is not finite");
        for (std::size_t j = i + 1; j < members.size(); ++j)
            if (std::abs(li - angular_eigenvalue(members[j])) <= separation_tolerance) {
                std::ostringstream msg;
                msg << "T-set members " << members[i] << " and " << members[j] << " coincide";
                throw InvalidTSet(msg.str());
            }
        for (int l : s)
            if (std::abs(li - angular_eigenvalue(cplx(l))) <= separation_tolerance) {
                std::ostringstream msg;
                msg << "T-set member " << members[i] << " collides with l=" << l;
                throw InvalidTSet(msg.str());
            }
    }
}

/// The set T of shifted angular momenta, kept sorted by real part.
class TSet {
  public:
    TSet() = default;

    TSet(std::vector<cplx> members, TSetTag tag, std::span<const int> s)
        : members_(std::move(members)), tag_(tag) {
        std::sort(members_.begin(), members_.end(), [](cplx a, cplx b) {
            return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
        });
        validate_tset(members_, s);
    }

    const std::vector<cplx>& members() const { return members_; }
    TSetTag tag() const { return tag_; }
    std::size_t size() const { return members_.size(); }
    bool empty() const { return members_.empty(); }
    cplx operator[](std::size_t i) const { return members_[i]; }

  private:
    std::vector<cplx> members_;
    TSetTag tag_ = TSetTag::general;
};

/// Uniform mesh in the dimensionless radius x = k r.
struct RadialGrid {
    double x_min = 1e-2;
    double x_max = 12.0;
    std::size_t n = 2000;

    RadialGrid() = default;
    RadialGrid(double lo, double hi, std::size_t count) : x_min(lo), x_max(hi), n(count) {
        validate();
    }

    void validate() const {
        if (!(x_min > 0.0) || !(x_min < x_max) || n < 16 || !std::isfinite(x_max))
            throw DomainError("radial grid: need 0 < x_min < x_max and n >= 16");
    }

    double step() const { return (x_max - x_min) / static_cast<double>(n - 1); }
    double point(std::size_t i) const {
        return i + 1 == n ? x_max : x_min + step() * static_cast<double>(i);
    }

    std::vector<double> points() const {
        std::vector<double> xs(n);
        for (std::size_t i = 0; i < n; ++i) xs[i] = point(i);
        return xs;
    }

    /// x in [1e-2, max(12, 2 max S)] with 2000 points.
    static RadialGrid default_for(std::span<const int> s) {
        int lmax = 0;
        for (int l : s) lmax = std::max(lmax, l);
        return {1e-2, std::max(12.0, 2.0 * lmax), 2000};
    }
};

/// Dimensionless potential q(x) = V(x/k)/E sampled on a grid.
struct PotentialCurve {
    RadialGrid grid;
    std::vector<cplx> q;
    double energy = 1.0;
    double k = 1.0;
    cplx q_origin = 0.0;                    // quadratic extrapolation to x = 0
    std::vector<std::size_t> filled_points;  // indices repaired by interpolation

    double radius(std::size_t i) const { return grid.point(i) / k; }
    cplx physical(std::size_t i) const { return energy * q[i]; }
    cplx physical_origin() const { return energy * q_origin; }
};

/// Quadratic extrapolation to x = 0 through the first three samples.
inline cplx extrapolate_to_origin(std::span<const double> xs, std::span<const cplx> values) {
    if (xs.size() < 3) return values.empty() ? cplx(0.0) : values.front();
    const double x0 = xs[0], x1 = xs[1], x2 = xs[2];
    const cplx l0 = values[0] * (x1 * x2) / ((x0 - x1) * (x0 - x2));
    const cplx l1 = values[1] * (x0 * x2) / ((x1 - x0) * (x1 - x2));
    const cplx l2 = values[2] * (x0 * x1) / ((x2 - x0) * (x2 - x1));
    return l0 + l1 + l2;
}

struct RoundtripEntry {
    int l = 0;
    double delta_orig = 0.0;
    double delta_recomputed = 0.0;
    double eta_orig = 1.0;
    double eta_recomputed = 1.0;
    double delta_diff = 0.0;  // Delta_l
    double eta_diff = 0.0;    // Xi_l
};

struct InversionReport {
    PhaseShiftSet input;
    std::string mode;
    std::vector<TSet> tsets;  // one set, or the even and odd sets of mode A
    double residual_norm = 0.0;
    PotentialCurve potential;
    std::vector<RoundtripEntry> roundtrip;
};

}  // namespace ctinv
