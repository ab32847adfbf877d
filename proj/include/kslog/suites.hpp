#ifndef KSLOG_SUITES_HPP
#define KSLOG_SUITES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "kslog/field2d.hpp"
#include "kslog/masspde.hpp"
#include "kslog/rng.hpp"
#include "kslog/steady.hpp"

namespace kslog {

struct SuiteCase {
    std::string case_id;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool holds = false;
};

struct SuiteResult {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<SuiteCase> cases;
    bool all_pass = false;
};

/// Known suites: el, rearrangement, loghls, confinement, farfield,
/// comparison. Unknown names throw std::invalid_argument. `cases` only
/// affects the randomized suites (0 = suite default).
SuiteResult run_suite(const std::string& name, std::uint64_t seed, std::size_t cases = 0);

std::vector<std::string> suite_names();

/// JSON text of a suite result (stable field order, deterministic bytes).
std::string suite_json(const SuiteResult& result);

/// Random blend of 2 to 4 Gaussian bumps, well inside the grid so the
/// density is effectively compactly supported (shared by the rearrangement
/// suite and the tests).
Density2D random_bump_density(CaseRng& rng, std::size_t n_cells = 64, double half_width = 4.0);

/// Scaled-family run shared by the comparison suite and the CLI: evolves
/// init a^2 rho0(a r) against the matched steady state and monitors the
/// sub/super barrier ordering.
struct ComparisonRun {
    SteadyState steady;
    std::vector<Checkpoint> history;
    RadialGrid grid;
    ComparisonReport report;
    ConvergenceRate rate;
    double ordering_tol = 0.0;
};

struct ComparisonParams {
    double m = 2.0;
    double M = 1.0;
    double a = 0.8;
    double T = 40.0;
    std::size_t checkpoints = 11;
    std::size_t nodes = 1536;
    double rmax_factor = 3.0;
    double ordering_tol_rel = 1e-4;
};

ComparisonRun run_comparison(const ComparisonParams& params);

}  // namespace kslog

#endif
