#ifndef KSLOG_ENERGY_HPP
#define KSLOG_ENERGY_HPP

#include <vector>

#include "kslog/potential.hpp"
#include "kslog/radial.hpp"
#include "kslog/steady.hpp"

namespace kslog {

/// Free energy of a density, split into entropy H and interaction W, with
/// the stationarity multiplier computed two independent ways.
struct EnergyBreakdown {
    double H = 0.0;          ///< (1/(m-1)) int rho^m
    double W = 0.0;          ///< -(1/2) int (K*rho) rho
    double G = 0.0;          ///< H + W
    double D_formula = 0.0;  ///< (2/M) G + ((m-2)/(M(m-1))) ||rho||_m^m
    double D_profile = 0.0;  ///< mean of (m/(m-1)) theta - u over the inner support
    double D_profile_std = 0.0;
};

/// Entropy H = (1/(m-1)) int rho^m dx; m <= 1 rejected.
double entropy(const RadialDensity& rho, double m);

/// Interaction W = -(1/2) int (K*rho) rho dx through the radial potential.
/// R_supp <= 0 means: detect the support automatically.
double interaction_energy(const RadialDensity& rho, double R_supp = 0.0);

/// H, W, G and both multiplier readings. D_profile averages
/// (m/(m-1)) rho^(m-1) - u over the inner 90% of the support.
EnergyBreakdown free_energy(const RadialDensity& rho, double m, double R_supp = 0.0);

struct ElResidual {
    double inner = 0.0;  ///< sup over supp |(m/(m-1)) theta - u - D|
    double outer = 0.0;  ///< sup over r > R of (u + D)_+
};

/// Euler-Lagrange residuals of a steady state against its own multiplier.
ElResidual el_residual(const SteadyState& s);

/// W_R = double integral of log|x-y| rho rho over |x-y| > R, reduced to an
/// angular kernel for radial densities and evaluated at coarse resolution.
/// `radial_points` subsamples the grid; `angles` fixes the angular rule.
double truncated_interaction(const RadialDensity& rho, double R,
                             std::size_t radial_points = 192, std::size_t angles = 256);

/// Near-field companion: double integral of |log|x-y|| rho rho over
/// |x-y| <= R (both pieces share the annular kernel machinery).
double near_log_integral(const RadialDensity& rho, double R,
                         std::size_t radial_points = 192, std::size_t angles = 256);

/// Full double integral of log|x-y| rho rho via the exact angular identity
/// int_0^{2pi} log|x - y| dphi = 2 pi log max(|x|,|y|).
double log_double_integral_exact_kernel(const RadialDensity& rho);

struct ConfinementReport {
    double lhs = 0.0;     ///< W_1[rho]
    double rhs = 0.0;     ///< (M log R / 2) * tail mass beyond R
    double margin = 0.0;  ///< lhs - rhs
    bool holds = false;
};

/// Confinement bound W_1[rho] >= (M log R / 2) int_{|x|>R} rho for radially
/// nonincreasing rho and R >= 1. Non-monotone input is rejected.
ConfinementReport confinement_check(const RadialDensity& rho, double R);

}  // namespace kslog

#endif
