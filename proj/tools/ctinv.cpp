// Command-line front end: forward, invert, roundtrip, specfun-check.
// Exit codes: 0 ok, 1 other failure, 2 parse error, 3 non-convergence,
// 4 numerical-domain error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "ctinv/io.hpp"
#include "ctinv/log.hpp"
#include "ctinv/pipeline.hpp"
#include "ctinv/specfun.hpp"

namespace fs = std::filesystem;
using namespace ctinv;

namespace {

struct Job {
    std::string input;
    std::string output_dir = ".";
    std::string mode = "general";
    std::optional<double> grid_xmax;
    std::optional<std::size_t> grid_n;
    std::optional<double> tol;
    std::optional<unsigned long long> seed;
    bool spin_orbit = false;
};

InvertOptions invert_options(const Job& job, const PhaseShiftSet& input, InvertMode mode) {
    InvertOptions opts;
    if (job.tol) opts.solver.tol_residual = *job.tol;
    if (job.seed) opts.solver.seed = *job.seed;
    opts.solver.validate();
    if (job.grid_xmax || job.grid_n) {
        // the grid must cover the S actually inverted
        auto s = input.angular_momenta();
        if (mode == InvertMode::even || mode == InvertMode::odd)
            std::erase_if(s, [&](int l) { return l % 2 != (mode == InvertMode::even ? 0 : 1); });
        RadialGrid g = RadialGrid::default_for(s);
        if (job.grid_xmax) g.x_max = *job.grid_xmax;
        if (job.grid_n) g.n = *job.grid_n;
        g.validate();
        opts.grid = g;
    }
    return opts;
}

fs::path output_dir(const Job& job) {
    const fs::path dir(job.output_dir);
    fs::create_directories(dir);
    return dir;
}

void print_roundtrip(const InversionReport& rep) {
    std::printf("mode %s  residual %.3e  tsets %zu\n", rep.mode.c_str(), rep.residual_norm, rep.tsets.size());
    for (const auto& t : rep.tsets) {
        std::printf("  T[%s] =", to_string(t.tag()));
        for (auto z : t.members()) std::printf(" (%.4f%+.4fi)", z.real(), z.imag());
        std::printf("\n");
    }
    std::printf("   l     delta_in    delta_out        Delta          Xi\n");
    for (const auto& r : rep.roundtrip)
        std::printf("%4d %12.6f %12.6f %12.3e %12.3e\n", r.l, r.delta_orig, r.delta_recomputed, r.delta_diff,
                    r.eta_diff);
}

void write_inversion(const fs::path& dir, const InversionReport& rep) {
    io::write_json(dir / "tset.json", io::tsets_to_json(rep));
    io::write_potential_csv(dir / "potential.csv", rep.potential, rep.input.units());
    io::write_json(dir / "report.json", io::report_to_json(rep));
}

int run_forward(const Job& job) {
    const auto spec = io::read_forward_spec(job.input);
    const auto shifts = forward_phase_shifts(io::make_potential(spec), spec.lmax, spec.energy, spec.k, {}, spec.units);
    const auto dir = output_dir(job);
    io::write_phase_shifts(dir / "phase_shifts.json", shifts);
    std::printf("   l        delta          eta\n");
    for (const auto& e : shifts.entries()) std::printf("%4d %12.6f %12.6f\n", e.l, e.delta, e.eta);
    return 0;
}

int run_invert(const Job& job) {
    const auto input = io::read_phase_shifts(job.input, job.spin_orbit);
    const auto mode = invert_mode_from_string(job.mode);
    const auto rep = invert(input, mode, invert_options(job, input, mode));
    write_inversion(output_dir(job), rep);
    print_roundtrip(rep);
    return 0;
}

// Forward-solve a prescribed potential, invert its phase shifts and compare
// the recovered potential with the original.
int run_roundtrip(const Job& job) {
    const auto spec = io::read_forward_spec(job.input);
    const auto pot = io::make_potential(spec);
    const auto shifts = forward_phase_shifts(pot, spec.lmax, spec.energy, spec.k, {}, spec.units);
    const auto mode = invert_mode_from_string(job.mode);
    const auto rep = invert(shifts, mode, invert_options(job, shifts, mode));
    const auto dir = output_dir(job);
    io::write_phase_shifts(dir / "phase_shifts.json", shifts);
    write_inversion(dir, rep);
    double worst = 0.0;
    for (std::size_t i = 0; i < rep.potential.q.size(); ++i) {
        const double x = rep.potential.grid.point(i);
        worst = std::max(worst, std::abs(rep.potential.q[i] - pot.q(x)) * std::abs(spec.energy));
    }
    print_roundtrip(rep);
    std::printf("max |V - V_input| on the grid: %.3e\n", worst);
    return 0;
}

int run_specfun_check(const Job& job) {
    const auto xs = specfun::log_grid(1e-3, 60.0, 200);
    const cplx orders[] = {-0.5, -0.0893, 0.5, 0.9392, 3.3, 7.0001, 10.0001, cplx(-0.581, -0.085)};
    io::json rows = io::json::array();
    double worst = 0.0;
    std::printf("%-22s %12s\n", "order", "max|W+1|");
    for (auto nu : orders) {
        const double d = specfun::wronskian_defect(nu, xs);
        worst = std::max(worst, d);
        std::printf("(%8.4f, %8.4f)    %12.3e\n", nu.real(), nu.imag(), d);
        rows.push_back({{"order", io::complex_to_json(nu)}, {"max_defect", d}});
    }
    if (!job.output_dir.empty() && job.output_dir != ".")
        io::write_json(output_dir(job) / "specfun_check.json", {{"x_min", 1e-3}, {"x_max", 60.0}, {"rows", rows}});
    if (worst > 1e-10) {
        log::error("specfun-check: Wronskian defect above 1e-10");
        return 4;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fixed-energy inverse scattering: phase shifts to potentials and back"};
    app.require_subcommand(1);
    Job job;

    auto add_io = [&](CLI::App* cmd, bool input_required) {
        auto* opt = cmd->add_option("--input", job.input, "input JSON file");
        if (input_required) opt->required()->check(CLI::ExistingFile);
        cmd->add_option("--output-dir", job.output_dir, "directory for output files");
    };
    auto add_inversion = [&](CLI::App* cmd) {
        cmd->add_option("--mode", job.mode, "general, even, odd, approx-a, approx-t or approx-l")
            ->check(CLI::IsMember({"general", "even", "odd", "approx-a", "approx-t", "approx-l"}));
        cmd->add_option("--grid-xmax", job.grid_xmax, "radial grid end in x = kr");
        cmd->add_option("--grid-n", job.grid_n, "number of radial grid points");
        cmd->add_option("--tol", job.tol, "solver residual tolerance");
        cmd->add_option("--seed", job.seed, "seed of the stochastic fallback");
    };

    auto* fwd = app.add_subcommand("forward", "phase shifts of a prescribed potential");
    add_io(fwd, true);
    auto* inv = app.add_subcommand("invert", "T-set, potential and round-trip report from phase shifts");
    add_io(inv, true);
    add_inversion(inv);
    inv->add_flag("--spin-orbit", job.spin_orbit, "combine spin_orbit pairs of the input");
    auto* rt = app.add_subcommand("roundtrip", "forward, invert, and compare with the prescribed potential");
    add_io(rt, true);
    add_inversion(rt);
    auto* sf = app.add_subcommand("specfun-check", "Wronskian check of the Riccati-Bessel functions");
    add_io(sf, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*fwd) return run_forward(job);
        if (*inv) return run_invert(job);
        if (*rt) return run_roundtrip(job);
        return run_specfun_check(job);
    } catch (const ParseError& e) {
        log::error(e.what());
        return 2;
    } catch (const NonConvergence& e) {
        log::error(e.what());
        return 3;
    } catch (const SingularSystem& e) {
        log::error(e.what());
        return 4;
    } catch (const DomainError& e) {
        log::error(e.what());
        return 4;
    } catch (const std::exception& e) {
        log::error(e.what());
        return 1;
    }
}
