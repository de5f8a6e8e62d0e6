#pragma once

// File formats: phase-shift and potential-spec JSON in, potential CSV,
// T-set JSON and report JSON out. Every writer has a reader that inverts it.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctinv/domain.hpp"
#include "ctinv/error.hpp"
#include "ctinv/forward.hpp"

namespace ctinv::io {

using json = nlohmann::json;

namespace detail {

inline json parse_json(std::istream& in, const std::string& what) {
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(what + ": " + e.what());
    }
}

template <class T>
T field(const json& j, const char* key, const std::string& what) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(what + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(what + ": field '" + key + "': " + e.what());
    }
}

template <class T>
T field_or(const json& j, const char* key, T fallback, const std::string& what) {
    return j.contains(key) ? field<T>(j, key, what) : fallback;
}

}  // namespace detail

/// A complex value is either a bare number or {"re": .., "im": ..}.
inline cplx complex_from_json(const json& j, const std::string& what = "complex") {
    if (j.is_number()) return j.get<double>();
    if (j.is_object()) return {detail::field<double>(j, "re", what), detail::field_or<double>(j, "im", 0.0, what)};
    throw ParseError(what + ": expected a number or {re, im}");
}

inline json complex_to_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

inline std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    return in;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    return out;
}

// ---- phase shifts ----

/// Spin-orbit pairs are folded in only when `spin_orbit` is set; finding
/// them otherwise is an error rather than a silent drop.
inline PhaseShiftSet phase_shifts_from_json(const json& j, bool spin_orbit = false) {
    const std::string what = "phase shifts";
    const double energy = detail::field<double>(j, "energy", what);
    const double k = detail::field<double>(j, "k", what);
    const auto units = detail::field_or<std::string>(j, "units", "", what);
    std::vector<PhaseShiftEntry> entries;
    if (j.contains("phase_shifts")) {
        if (!j["phase_shifts"].is_array()) throw ParseError(what + ": 'phase_shifts' must be an array");
        for (const auto& row : j["phase_shifts"])
            entries.push_back({detail::field<int>(row, "l", what), detail::field<double>(row, "delta", what),
                               detail::field_or<double>(row, "eta", 1.0, what)});
    }
    if (j.contains("spin_orbit")) {
        if (!spin_orbit) throw ParseError(what + ": input has spin_orbit pairs; enable the spin-orbit combination");
        if (!j["spin_orbit"].is_array()) throw ParseError(what + ": 'spin_orbit' must be an array");
        for (const auto& row : j["spin_orbit"]) {
            const int l = detail::field<int>(row, "l", what);
            if (!row.contains("delta_plus") || !row.contains("delta_minus"))
                throw ParseError(what + ": spin_orbit row needs delta_plus and delta_minus");
            const cplx dp = complex_from_json(row["delta_plus"], what);
            const cplx dm = complex_from_json(row["delta_minus"], what);
            entries.push_back(entry_from_complex(l, combine_spin_orbit(l, dp, dm)));
        }
    }
    if (entries.empty()) throw ParseError(what + ": no phase shifts");
    return {energy, k, entries, units};
}

inline json phase_shifts_to_json(const PhaseShiftSet& p) {
    json rows = json::array();
    for (const auto& e : p.entries()) rows.push_back({{"l", e.l}, {"delta", e.delta}, {"eta", e.eta}});
    return {{"energy", p.energy()}, {"k", p.k()}, {"units", p.units()}, {"phase_shifts", rows}};
}

inline PhaseShiftSet read_phase_shifts(const std::filesystem::path& path, bool spin_orbit = false) {
    auto in = open_in(path);
    return phase_shifts_from_json(detail::parse_json(in, path.string()), spin_orbit);
}

inline void write_phase_shifts(const std::filesystem::path& path, const PhaseShiftSet& p) {
    open_out(path) << phase_shifts_to_json(p).dump(2) << '\n';
}

// ---- potential CSV ----

inline constexpr const char* csv_header = "r,x,re_V,im_V,re_q,im_q";

/// First row is the extrapolated origin value at x = 0; a leading comment
/// line carries E, k and units so the curve can be read back.
inline void write_potential_csv(std::ostream& out, const PotentialCurve& curve, const std::string& units = "") {
    char buf[256];
    std::snprintf(buf, sizeof buf, "# energy=%.17g k=%.17g units=", curve.energy, curve.k);
    out << buf << units << '\n' << csv_header << '\n';
    auto row = [&](double x, cplx q) {
        const cplx v = curve.energy * q;
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", x / curve.k, x, v.real(), v.imag(),
                      q.real(), q.imag());
        out << buf;
    };
    row(0.0, curve.q_origin);
    for (std::size_t i = 0; i < curve.q.size(); ++i) row(curve.grid.point(i), curve.q[i]);
}

inline PotentialCurve read_potential_csv(std::istream& in, std::string* units = nullptr) {
    const std::string what = "potential csv";
    std::string line;
    PotentialCurve curve;
    if (!std::getline(in, line)) throw ParseError(what + ": empty file");
    const bool preamble = line.rfind("# ", 0) == 0;
    if (preamble) {
        const auto e = line.find("energy="), k = line.find(" k="), u = line.find(" units=");
        if (e == std::string::npos || k == std::string::npos || u == std::string::npos)
            throw ParseError(what + ": malformed preamble");
        try {
            curve.energy = std::stod(line.substr(e + 7, k - e - 7));
            curve.k = std::stod(line.substr(k + 3, u - k - 3));
        } catch (const std::exception&) {
            throw ParseError(what + ": malformed preamble");
        }
        if (units) *units = line.substr(u + 7);
        if (!std::getline(in, line)) throw ParseError(what + ": missing header");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != csv_header) throw ParseError(what + ": expected header '" + std::string(csv_header) + "'");
    std::vector<double> rs, xs;
    std::vector<cplx> qs, vs;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        double r, x, vr, vi, qr, qi;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &r, &x, &vr, &vi, &qr, &qi) != 6)
            throw ParseError(what + ": bad row '" + line + "'");
        rs.push_back(r);
        xs.push_back(x);
        qs.emplace_back(qr, qi);
        vs.emplace_back(vr, vi);
    }
    if (xs.size() < 3 || xs[0] != 0.0) throw ParseError(what + ": need the x = 0 row and at least two grid points");
    curve.q_origin = qs[0];
    curve.q.assign(qs.begin() + 1, qs.end());
    try {
        curve.grid = RadialGrid(xs[1], xs.back(), xs.size() - 1);
    } catch (const DomainError& e) {
        throw ParseError(what + ": " + e.what());
    }
    if (!preamble) {
        // recover k from the first grid row and E from the largest |q|
        if (!(rs[1] > 0.0)) throw ParseError(what + ": bad radius column");
        curve.k = xs[1] / rs[1];
        std::size_t imax = 0;
        for (std::size_t i = 1; i < qs.size(); ++i)
            if (std::abs(qs[i]) > std::abs(qs[imax])) imax = i;
        if (std::abs(qs[imax]) > 0.0) curve.energy = std::abs(vs[imax]) / std::abs(qs[imax]);
    }
    return curve;
}

inline void write_potential_csv(const std::filesystem::path& path, const PotentialCurve& curve,
                                const std::string& units = "") {
    auto out = open_out(path);
    write_potential_csv(out, curve, units);
}

inline PotentialCurve read_potential_csv(const std::filesystem::path& path, std::string* units = nullptr) {
    auto in = open_in(path);
    return read_potential_csv(in, units);
}

// ---- forward potential spec ----

struct PotentialSpec {
    std::string form;  // "gauss" or "tabulated"
    double depth = 0.0;
    double width = 0.0;
    std::filesystem::path path;  // tabulated curve, relative to the spec file
};

struct ForwardSpec {
    double energy = 1.0;
    double k = 1.0;
    std::string units;
    int lmax = 0;
    PotentialSpec potential;
};

inline ForwardSpec forward_spec_from_json(const json& j, const std::filesystem::path& base = {}) {
    const std::string what = "potential spec";
    ForwardSpec s;
    s.energy = detail::field<double>(j, "energy", what);
    s.k = detail::field<double>(j, "k", what);
    s.units = detail::field_or<std::string>(j, "units", "", what);
    s.lmax = detail::field<int>(j, "lmax", what);
    if (s.lmax < 0) throw ParseError(what + ": lmax must be >= 0");
    if (!j.contains("potential")) throw ParseError(what + ": missing field 'potential'");
    const auto& p = j["potential"];
    s.potential.form = detail::field<std::string>(p, "form", what);
    if (s.potential.form == "gauss") {
        s.potential.depth = detail::field<double>(p, "depth", what);
        s.potential.width = detail::field<double>(p, "width", what);
    } else if (s.potential.form == "tabulated") {
        s.potential.path = detail::field<std::string>(p, "path", what);
        if (s.potential.path.is_relative()) s.potential.path = base / s.potential.path;
    } else {
        throw ParseError(what + ": unknown form '" + s.potential.form + "'");
    }
    return s;
}

inline ForwardSpec read_forward_spec(const std::filesystem::path& path) {
    auto in = open_in(path);
    return forward_spec_from_json(detail::parse_json(in, path.string()), path.parent_path());
}

/// A tabulated curve is taken in its own dimensionless form; its E and k
/// must agree with the spec's.
inline PotentialFn make_potential(const ForwardSpec& s) {
    if (s.potential.form == "gauss") return gauss_potential(s.potential.depth, s.potential.width, s.energy, s.k);
    const auto curve = read_potential_csv(s.potential.path);
    if (std::abs(curve.k - s.k) > 1e-12 * s.k || std::abs(curve.energy - s.energy) > 1e-12 * std::abs(s.energy))
        throw DomainError("tabulated potential: E or k differ from the spec");
    return interpolate(curve);
}

// ---- T-sets ----

struct TSetRecord {
    TSet tset;
    std::vector<int> s;
};

inline json tset_to_json(const TSet& t, std::span<const int> s) {
    json members = json::array();
    for (auto z : t.members()) members.push_back(complex_to_json(z));
    return {{"tag", to_string(t.tag())}, {"S", std::vector<int>(s.begin(), s.end())}, {"members", members}};
}

inline TSetRecord tset_from_json(const json& j) {
    const std::string what = "T-set";
    TSetRecord rec;
    rec.s = detail::field<std::vector<int>>(j, "S", what);
    std::vector<cplx> members;
    if (!j.contains("members") || !j["members"].is_array()) throw ParseError(what + ": missing 'members'");
    for (const auto& m : j["members"]) members.push_back(complex_from_json(m, what));
    try {
        rec.tset = TSet(members, tset_tag_from_string(detail::field<std::string>(j, "tag", what)), rec.s);
    } catch (const DomainError& e) {
        throw ParseError(what + ": " + e.what());
    }
    return rec;
}

namespace detail {

// S of a stored set: all of S for general/one-term/union sets, else the
// matching parity half.
inline std::vector<int> tset_momenta(const TSet& t, std::span<const int> s) {
    if (t.tag() != TSetTag::even && t.tag() != TSetTag::odd) return {s.begin(), s.end()};
    const int parity = t.tag() == TSetTag::even ? 0 : 1;
    std::vector<int> out;
    for (int l : s)
        if (l % 2 == parity) out.push_back(l);
    return out;
}

}  // namespace detail

/// The residual is the report's: the largest over the stored sets.
inline json tsets_to_json(const InversionReport& rep) {
    json sets = json::array();
    const auto s = rep.input.angular_momenta();
    for (const auto& t : rep.tsets) sets.push_back(tset_to_json(t, detail::tset_momenta(t, s)));
    return {{"mode", rep.mode}, {"residual_norm", rep.residual_norm}, {"sets", sets}};
}

inline std::vector<TSetRecord> tsets_from_json(const json& j) {
    std::vector<TSetRecord> out;
    if (!j.contains("sets") || !j["sets"].is_array()) throw ParseError("T-set file: missing 'sets'");
    for (const auto& s : j["sets"]) out.push_back(tset_from_json(s));
    return out;
}

// ---- report ----

inline json curve_to_json(const PotentialCurve& c) {
    json q = json::array();
    for (auto z : c.q) q.push_back(complex_to_json(z));
    return {{"energy", c.energy},   {"k", c.k},
            {"x_min", c.grid.x_min}, {"x_max", c.grid.x_max},
            {"n", c.grid.n},        {"q_origin", complex_to_json(c.q_origin)},
            {"filled_points", c.filled_points}, {"q", q}};
}

inline PotentialCurve curve_from_json(const json& j) {
    const std::string what = "potential";
    PotentialCurve c;
    c.energy = detail::field<double>(j, "energy", what);
    c.k = detail::field<double>(j, "k", what);
    c.grid = RadialGrid(detail::field<double>(j, "x_min", what), detail::field<double>(j, "x_max", what),
                        detail::field<std::size_t>(j, "n", what));
    c.q_origin = complex_from_json(j.value("q_origin", json(0.0)), what);
    c.filled_points = detail::field_or<std::vector<std::size_t>>(j, "filled_points", {}, what);
    if (!j.contains("q") || !j["q"].is_array()) throw ParseError(what + ": missing 'q'");
    for (const auto& z : j["q"]) c.q.push_back(complex_from_json(z, what));
    if (c.q.size() != c.grid.n) throw ParseError(what + ": q has the wrong length");
    return c;
}

inline json report_to_json(const InversionReport& rep) {
    json rt = json::array();
    for (const auto& r : rep.roundtrip)
        rt.push_back({{"l", r.l},
                      {"delta_orig", r.delta_orig},
                      {"delta_recomputed", r.delta_recomputed},
                      {"eta_orig", r.eta_orig},
                      {"eta_recomputed", r.eta_recomputed},
                      {"delta_diff", r.delta_diff},
                      {"eta_diff", r.eta_diff}});
    return {{"mode", rep.mode},
            {"input", phase_shifts_to_json(rep.input)},
            {"tsets", tsets_to_json(rep)["sets"]},
            {"residual_norm", rep.residual_norm},
            {"potential", curve_to_json(rep.potential)},
            {"roundtrip", rt}};
}

inline InversionReport report_from_json(const json& j) {
    const std::string what = "report";
    InversionReport rep;
    rep.mode = detail::field<std::string>(j, "mode", what);
    if (!j.contains("input")) throw ParseError(what + ": missing 'input'");
    rep.input = phase_shifts_from_json(j["input"]);
    rep.residual_norm = detail::field<double>(j, "residual_norm", what);
    for (auto& rec : tsets_from_json({{"sets", j.value("tsets", json::array())}})) rep.tsets.push_back(rec.tset);
    if (!j.contains("potential")) throw ParseError(what + ": missing 'potential'");
    rep.potential = curve_from_json(j["potential"]);
    for (const auto& r : j.value("roundtrip", json::array())) {
        RoundtripEntry e;
        e.l = detail::field<int>(r, "l", what);
        e.delta_orig = detail::field<double>(r, "delta_orig", what);
        e.delta_recomputed = detail::field<double>(r, "delta_recomputed", what);
        e.eta_orig = detail::field<double>(r, "eta_orig", what);
        e.eta_recomputed = detail::field<double>(r, "eta_recomputed", what);
        e.delta_diff = detail::field<double>(r, "delta_diff", what);
        e.eta_diff = detail::field<double>(r, "eta_diff", what);
        rep.roundtrip.push_back(e);
    }
    return rep;
}

inline void write_json(const std::filesystem::path& path, const json& j) { open_out(path) << j.dump(2) << '\n'; }

inline json read_json(const std::filesystem::path& path) {
    auto in = open_in(path);
    return detail::parse_json(in, path.string());
}

}  // namespace ctinv::io
