// kslog: ground states of the 2D diffusion-dominated aggregation model with
// logarithmic attraction. Subcommands solve the steady profile, evaluate
// free energies, evolve the radial mass function, and run verification
// suites. Exit codes: 0 ok, 1 usage/IO, 2 solver failure, 3 verification
// failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kslog/csv.hpp"
#include "kslog/energy.hpp"
#include "kslog/masspde.hpp"
#include "kslog/rearrange.hpp"
#include "kslog/steady.hpp"
#include "kslog/suites.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitVerify = 3;

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string default_out_dir() {
    const char* env = std::getenv("KSLOG_OUT");
    return env != nullptr ? env : ".";
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory " + dir);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << text;
}

void write_steady_files(const kslog::SteadyState& s, const std::string& dir) {
    ensure_dir(dir);
    std::vector<double> r(s.grid.n), rho(s.grid.n);
    double p = 1.0 / (s.m - 1.0);
    for (std::size_t i = 0; i < s.grid.n; ++i) {
        r[i] = s.grid.r(i);
        rho[i] = std::pow(s.theta[i], p);
    }
    kslog::write_csv(dir + "/steady.csv", {"r", "theta", "rho"}, {&r, &s.theta, &rho});

    std::string json = "{\n";
    json += "  \"m\": " + fmt(s.m) + ",\n";
    json += "  \"M\": " + fmt(s.M) + ",\n";
    json += "  \"R\": " + fmt(s.R) + ",\n";
    json += "  \"theta_c\": " + fmt(s.theta_c) + ",\n";
    json += "  \"D\": " + fmt(s.D) + ",\n";
    json += "  \"residual\": " + fmt(s.residual) + "\n";
    json += "}\n";
    write_text(dir + "/steady.json", json);
}

int cmd_steady(double m, double M, std::size_t nodes, const std::string& dir) {
    kslog::SolveOptions opts;
    if (nodes > 0)
        opts.support_nodes = nodes;
    kslog::SteadyState s = kslog::solve_steady(m, M, 1e-10, opts);
    write_steady_files(s, dir);
    std::cout << "R = " << fmt(s.R) << "\n"
              << "D = " << fmt(s.D) << "\n"
              << "el_residual = " << fmt(s.residual) << "\n"
              << "wrote " << dir << "/steady.csv, " << dir << "/steady.json\n";
    return 0;
}

/// Accepts `r,theta,rho` steady files (rho column) or bare `r,value`
/// density profiles.
kslog::RadialDensity load_profile(const std::string& path) {
    kslog::CsvTable t = kslog::read_csv(path);
    kslog::RadialGrid grid = kslog::grid_from_r_column(t.column("r"));
    const std::vector<double>* vals = nullptr;
    for (const char* name : {"rho", "value"}) {
        try {
            vals = &t.column(name);
            break;
        } catch (const std::runtime_error&) {
        }
    }
    if (vals == nullptr)
        throw std::runtime_error("profile needs a 'rho' or 'value' column");
    return kslog::RadialDensity::from_values(grid, *vals);
}

int cmd_energy(const std::string& path, double m, const std::string& dir) {
    kslog::RadialDensity rho = load_profile(path);
    kslog::EnergyBreakdown e = kslog::free_energy(rho, m);
    double dgap = std::abs(e.D_formula - e.D_profile);
    bool pass = dgap <= 1e-3 * std::abs(e.D_formula);

    ensure_dir(dir);
    kslog::Potential pot =
        kslog::newtonian_potential_radial(rho, kslog::detect_support_radius(rho));
    kslog::write_radial_profile(dir + "/potential.csv", pot.grid, pot.u);

    std::string json = "{\n";
    json += "  \"m\": " + fmt(m) + ",\n";
    json += "  \"M\": " + fmt(rho.declared_mass) + ",\n";
    json += "  \"H\": " + fmt(e.H) + ",\n";
    json += "  \"W\": " + fmt(e.W) + ",\n";
    json += "  \"G\": " + fmt(e.G) + ",\n";
    json += "  \"D_formula\": " + fmt(e.D_formula) + ",\n";
    json += "  \"D_profile\": " + fmt(e.D_profile) + ",\n";
    json += "  \"D_profile_std\": " + fmt(e.D_profile_std) + ",\n";
    json += "  \"multiplier_check\": \"";
    json += pass ? "PASS" : "FAIL";
    json += "\"\n}\n";
    ensure_dir(dir);
    write_text(dir + "/energy.json", json);
    std::cout << json;
    return 0;
}

int cmd_evolve(const std::string& init_spec, double m, double M, double T,
               std::size_t checkpoints, std::size_t nodes, double rmax_factor,
               const std::string& dir) {
    ensure_dir(dir);

    // scaled:a gets the full barrier monitor; other inits evolve plainly
    if (init_spec.rfind("scaled:", 0) == 0) {
        kslog::ComparisonParams params;
        params.m = m;
        params.M = M;
        params.a = std::stod(init_spec.substr(7));
        params.T = T;
        params.checkpoints = checkpoints;
        params.nodes = nodes;
        params.rmax_factor = rmax_factor;
        if (!(params.a > 0.0 && params.a <= 1.0))
            throw CLI::ValidationError("evolve", "scaled:a needs a in (0, 1]");
        kslog::ComparisonRun run = kslog::run_comparison(params);

        std::string manifest = "{\n  \"m\": " + fmt(m) + ",\n  \"M\": " + fmt(M) +
                               ",\n  \"init\": \"" + init_spec + "\",\n";
        manifest += "  \"dt_policy\": {\"diffusion_safety\": 0.2, \"cfl_safety\": 0.5},\n";
        manifest += "  \"checkpoints\": [";
        for (std::size_t i = 0; i < run.history.size(); ++i)
            manifest += fmt(run.history[i].t) + (i + 1 < run.history.size() ? ", " : "");
        manifest += "],\n  \"sup_distances\": [";
        for (std::size_t i = 0; i < run.history.size(); ++i)
            manifest += fmt(run.history[i].sup_distance) + (i + 1 < run.history.size() ? ", " : "");
        manifest += "],\n";
        manifest += "  \"lambda_fit\": " + fmt(run.rate.lambda_fit) + ",\n";
        manifest += "  \"lambda_theory\": " + fmt(run.rate.lambda_theory) + ",\n";
        manifest += "  \"fit_r_squared\": " + fmt(run.rate.r_squared) + ",\n";
        manifest += "  \"ordering_tol\": " + fmt(run.ordering_tol) + ",\n";
        manifest += "  \"worst_sub_margin\": " + fmt(run.report.worst_sub_margin) + ",\n";
        manifest += "  \"worst_super_margin\": " + fmt(run.report.worst_super_margin) + ",\n";
        manifest += "  \"ordered\": ";
        manifest += run.report.ordered ? "true" : "false";
        manifest += "\n}\n";
        write_text(dir + "/manifest.json", manifest);

        for (std::size_t i = 0; i < run.history.size(); ++i) {
            kslog::EvolutionState st;
            st.grid = run.grid;
            st.M = run.history[i].M;
            st.m = m;
            st.total = M;
            st.t = run.history[i].t;
            kslog::RadialDensity rho = kslog::mass_to_density(st);
            std::vector<double> r(run.grid.n);
            for (std::size_t j = 0; j < run.grid.n; ++j)
                r[j] = run.grid.r(j);
            kslog::write_csv(dir + "/checkpoint_" + std::to_string(i) + ".csv",
                             {"r", "M", "rho"}, {&r, &run.history[i].M, &rho.values});
        }
        if (!run.report.ordered) {
            std::cerr << "ordering violation: worst sub margin " << fmt(run.report.worst_sub_margin)
                      << ", worst super margin " << fmt(run.report.worst_super_margin)
                      << " (tol " << fmt(run.ordering_tol) << ")\n";
            return kExitVerify;
        }
        std::cout << "lambda_fit = " << fmt(run.rate.lambda_fit)
                  << ", lambda_theory = " << fmt(run.rate.lambda_theory) << ", monitor PASS\n";
        return 0;
    }

    kslog::SteadyState steady = kslog::solve_steady(m, M);
    double r_max = rmax_factor * steady.R;
    kslog::RadialGrid grid(nodes, r_max / static_cast<double>(nodes - 1));
    kslog::MassFunction mf0 = kslog::mass_function(steady.density());
    auto m0_at = [&](double r) {
        if (r >= mf0.grid.r_max())
            return mf0.total;
        double q = r / mf0.grid.dr;
        std::size_t k = std::min(static_cast<std::size_t>(q), mf0.grid.n - 2);
        double frac = q - static_cast<double>(k);
        return mf0.values[k] + frac * (mf0.values[k + 1] - mf0.values[k]);
    };

    kslog::EvolutionState init;
    init.grid = grid;
    init.m = m;
    init.total = mf0.total;
    init.M.resize(grid.n);
    if (init_spec == "steady") {
        for (std::size_t i = 0; i < grid.n; ++i)
            init.M[i] = m0_at(grid.r(i));
    } else if (init_spec.rfind("disk:", 0) == 0) {
        double R = std::stod(init_spec.substr(5));
        if (!(R > 0.0) || R >= grid.r_max())
            throw CLI::ValidationError("evolve", "disk radius must lie inside the domain");
        // smoothstep edge a few cells wide: the evolution wants continuous
        // initial densities
        double w = std::max(8.0 * grid.dr, 0.02 * R);
        std::vector<double> q(grid.n);
        for (std::size_t i = 0; i < grid.n; ++i) {
            double x = (R - grid.r(i)) / w;
            q[i] = x >= 1.0 ? 1.0 : (x <= 0.0 ? 0.0 : x * x * (3.0 - 2.0 * x));
        }
        double raw = kslog::integrate_radial(grid, q);
        for (auto& v : q)
            v *= mf0.total / raw;
        init.M = kslog::mass_function(kslog::RadialDensity::from_values(grid, q)).values;
        double qtot = init.M.back();
        for (auto& v : init.M)
            v *= mf0.total / qtot;
    } else if (init_spec.rfind("file:", 0) == 0) {
        kslog::RadialDensity rho0 = load_profile(init_spec.substr(5));
        kslog::MassFunction mf = kslog::mass_function(rho0);
        double scale = mf0.total / mf.total;  // mass-match to M
        for (std::size_t i = 0; i < grid.n; ++i) {
            double r = grid.r(i);
            double q = r / mf.grid.dr;
            std::size_t k = std::min(static_cast<std::size_t>(q), mf.grid.n - 2);
            double frac = q - static_cast<double>(k);
            double v = r >= mf.grid.r_max()
                           ? mf.total
                           : mf.values[k] + frac * (mf.values[k + 1] - mf.values[k]);
            init.M[i] = scale * v;
        }
    } else {
        throw CLI::ValidationError("evolve", "init must be steady, scaled:a, disk:R or file:path");
    }

    kslog::EvolveParams ep;
    ep.T = T;
    ep.checkpoints = checkpoints;
    auto history = kslog::evolve(init, steady, ep);
    auto rate = kslog::convergence_rate(history, steady);

    std::string manifest = "{\n  \"m\": " + fmt(m) + ",\n  \"M\": " + fmt(M) +
                           ",\n  \"init\": \"" + init_spec + "\",\n";
    manifest += "  \"dt_policy\": {\"diffusion_safety\": 0.2, \"cfl_safety\": 0.5, \"initial_dt\": " +
                fmt(kslog::stable_dt(init)) + "},\n";
    manifest += "  \"checkpoints\": [";
    for (std::size_t i = 0; i < history.size(); ++i)
        manifest += fmt(history[i].t) + (i + 1 < history.size() ? ", " : "");
    manifest += "],\n  \"sup_distances\": [";
    for (std::size_t i = 0; i < history.size(); ++i)
        manifest += fmt(history[i].sup_distance) + (i + 1 < history.size() ? ", " : "");
    manifest += "],\n";
    manifest += "  \"lambda_fit\": " + fmt(rate.lambda_fit) + ",\n";
    manifest += "  \"lambda_theory\": " + fmt(rate.lambda_theory) + ",\n";
    manifest += "  \"fit_r_squared\": " + fmt(rate.r_squared) + "\n}\n";
    write_text(dir + "/manifest.json", manifest);

    for (std::size_t i = 0; i < history.size(); ++i) {
        kslog::EvolutionState st;
        st.grid = grid;
        st.M = history[i].M;
        st.m = m;
        st.total = init.total;
        st.t = history[i].t;
        kslog::RadialDensity rho = kslog::mass_to_density(st);
        std::vector<double> r(grid.n);
        for (std::size_t j = 0; j < grid.n; ++j)
            r[j] = grid.r(j);
        kslog::write_csv(dir + "/checkpoint_" + std::to_string(i) + ".csv", {"r", "M", "rho"},
                         {&r, &history[i].M, &rho.values});
    }
    std::cout << "final sup distance = " << fmt(history.back().sup_distance) << "\n";
    return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, std::size_t cases,
               const std::string& out_file) {
    kslog::SuiteResult res = kslog::run_suite(suite, seed, cases);
    std::string json = kslog::suite_json(res);
    if (!out_file.empty())
        write_text(out_file, json);
    std::cout << json;
    return res.all_pass ? 0 : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ground states and mass-function dynamics of the 2D "
                 "diffusion-dominated Keller-Segel model"};
    app.require_subcommand(1);

    double m = 2.0, M = 1.0, T = 1.0, rmax_factor = 3.0;
    std::size_t nodes = 0, checkpoints = 21, cases = 0;
    std::string dir = default_out_dir();
    std::string profile, init_spec = "steady", suite, out_file;
    std::uint64_t seed = 0;

    auto* steady = app.add_subcommand("steady", "solve the compactly supported steady state");
    steady->add_option("--m", m, "diffusion exponent (> 1)")->required()->check(CLI::Range(1.0 + 1e-9, 1e9));
    steady->add_option("--mass", M, "total mass (> 0)")->required()->check(CLI::PositiveNumber);
    steady->add_option("--nodes", nodes, "nodes across the support (default 2048)");
    steady->add_option("--out", dir, "output directory");

    auto* energy = app.add_subcommand("energy", "free energy report for a profile CSV");
    energy->add_option("--profile", profile, "CSV with r,theta,rho or r,value")->required();
    energy->add_option("--m", m, "diffusion exponent (> 1)")->required()->check(CLI::Range(1.0 + 1e-9, 1e9));
    energy->add_option("--out", dir, "output directory");

    auto* evolve = app.add_subcommand("evolve", "evolve the radial mass function");
    evolve->add_option("--init", init_spec, "steady | scaled:a | disk:R | file:path");
    evolve->add_option("--m", m, "diffusion exponent (> 1)")->check(CLI::Range(1.0 + 1e-9, 1e9));
    evolve->add_option("--mass", M, "total mass")->check(CLI::PositiveNumber);
    evolve->add_option("--T", T, "final time")->check(CLI::PositiveNumber);
    evolve->add_option("--checkpoints", checkpoints, "checkpoint count (default 21)");
    evolve->add_option("--nodes", nodes, "grid nodes (default 2048)");
    evolve->add_option("--rmax-factor", rmax_factor, "domain size in support radii (default 3)");
    evolve->add_option("--out", dir, "output directory");

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", suite, "el | rearrangement | loghls | confinement | farfield | comparison")->required();
    verify->add_option("--seed", seed, "seed for randomized suites (default 0)");
    verify->add_option("--cases", cases, "case count for randomized suites");
    verify->add_option("--out", out_file, "write the JSON summary to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;  // usage problems are always exit 1
    }

    try {
        if (steady->parsed())
            return cmd_steady(m, M, nodes, dir);
        if (energy->parsed())
            return cmd_energy(profile, m, dir);
        if (evolve->parsed())
            return cmd_evolve(init_spec, m, M, T, checkpoints, nodes == 0 ? 2048 : nodes,
                              rmax_factor, dir);
        if (verify->parsed()) {
            if (std::find(kslog::suite_names().begin(), kslog::suite_names().end(), suite) ==
                kslog::suite_names().end()) {
                std::cerr << "unknown suite '" << suite << "'\n";
                return kExitUsage;
            }
            return cmd_verify(suite, seed, cases, out_file);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::runtime_error& e) {
        // IO problems are usage-level; anything else is a solver failure
        std::string msg = e.what();
        std::cerr << msg << "\n";
        if (msg.rfind("csv:", 0) == 0 || msg.find("cannot") != std::string::npos ||
            msg.rfind("profile", 0) == 0 || msg.rfind("density2d:", 0) == 0)
            return kExitUsage;
        return kExitSolver;
    }
    return kExitUsage;
}
