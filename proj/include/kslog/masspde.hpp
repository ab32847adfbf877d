#ifndef KSLOG_MASSPDE_HPP
#define KSLOG_MASSPDE_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "kslog/radial.hpp"
#include "kslog/steady.hpp"

namespace kslog {

/// Mass function M(r, t) of a radial solution, evolved by the closed
/// equation M_t = 2 pi r d_r((M_r/2pir)^m) + (M_r/2pir) M with Dirichlet
/// ends M(0) = 0, M(r_max) = total.
struct EvolutionState {
    RadialGrid grid;
    std::vector<double> M;
    double t = 0.0;
    double m = 0.0;
    double total = 0.0;
};

EvolutionState density_to_mass(const RadialDensity& rho, double m);
/// Inverse of density_to_mass: rho = (1/2pir) dM/dr by centered differences,
/// one-sided at the ends, rho(0) = M(r_1)/(pi r_1^2). Negative values beyond
/// tolerance signal a corrupted state and throw.
RadialDensity mass_to_density(const EvolutionState& state);

struct StepPolicy {
    double diffusion_safety = 0.2;  ///< dt <= safety dr^2 / (m max theta + eps)
    double cfl_safety = 0.5;        ///< dt <= safety dr / (max|v| + eps)
    double eps = 1e-12;
};

/// Stable explicit step size for the current state.
double stable_dt(const EvolutionState& state, const StepPolicy& policy = StepPolicy());

/// One explicit RK2 (midpoint) step. Monotonicity of M is re-asserted;
/// violations beyond tolerance throw.
EvolutionState step(const EvolutionState& state, double dt);

struct Checkpoint {
    double t = 0.0;
    std::vector<double> M;
    double sup_distance = 0.0;  ///< sup_r |M(r,t) - M_steady(r)|
};

struct EvolveParams {
    double T = 1.0;
    std::size_t checkpoints = 11;
    StepPolicy policy;
};

/// Time series at evenly spaced checkpoints; each checkpoint records the
/// sup distance to the matched-mass steady state.
std::vector<Checkpoint> evolve(const EvolutionState& init, const SteadyState& steady,
                               const EvolveParams& params);

/// Scaling factor of the barrier family, k' = C k^3 (1 - k^{2(m-1)});
/// k = 1 is the globally attracting fixed point.
double barrier_ode(double k0, double C, double m, double t);

enum class BarrierKind { Sub, Super };

/// Barrier phi(r,t) = k(t)^2 rho0(k(t) r) represented by its mass function
/// M_phi(r,t) = M_rho0(k(t) r).
struct Barrier {
    BarrierKind kind = BarrierKind::Sub;
    double k0 = 1.0;
    double C = 0.0;
    const SteadyState* base = nullptr;

    double k_at(double t) const { return barrier_ode(k0, C, base->m, t); }
};

Barrier make_barrier(BarrierKind kind, double a, const SteadyState& base);

/// Barrier mass function sampled on `grid` at time t.
std::vector<double> barrier_mass(const Barrier& b, double t, const RadialGrid& grid);

/// Bounds C1 <= M(r)/(2 pi r^2) <= C2 of the concentration ratio on the
/// support; the ratio is nonincreasing for radially nonincreasing profiles
/// (asserted), so C2 = rho0(0)/2 and C1 = M/(2 pi R^2).
std::pair<double, double> concentration_constants(const SteadyState& s);

struct ComparisonReport {
    double worst_sub_margin = 0.0;    ///< min over checkpoints of min_r (M - M_phi)
    double worst_super_margin = 0.0;  ///< min over checkpoints of min_r (M_eta - M)
    bool ordered = false;
    std::vector<double> sub_margins, super_margins;  ///< per checkpoint
};

/// Discrete comparison principle check M_phi <= M <= M_eta at every
/// checkpoint within tol. Violations produce a failing report, not an
/// exception.
ComparisonReport comparison_monitor(const std::vector<Checkpoint>& run, const RadialGrid& grid,
                                    const Barrier& sub, const Barrier& super, double tol);

enum class FitVerdict { Ok, Inconclusive, Skipped };

struct ConvergenceRate {
    double lambda_fit = 0.0;
    double r_squared = 0.0;
    double lambda_theory = 0.0;  ///< 2 (m-1) min(C1, C2)
    FitVerdict verdict = FitVerdict::Skipped;
};

/// Least-squares slope of log sup-distance over the checkpoint tail
/// (t >= transient_fraction * T, distances above the noise floor).
ConvergenceRate convergence_rate(const std::vector<Checkpoint>& run, const SteadyState& s,
                                 double transient_fraction = 0.2, double noise_floor = 1e-10);

/// Inward normal velocity v(r) = (m/(m-1)) d_r rho^{m-1} + M_rho(r)/(2 pi r)
/// on interior nodes; identically zero at the steady state and nonnegative
/// on sub-barrier profiles.
std::vector<double> velocity_field(const RadialDensity& rho, double m);

}  // namespace kslog

#endif
