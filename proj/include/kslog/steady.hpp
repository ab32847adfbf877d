#ifndef KSLOG_STEADY_HPP
#define KSLOG_STEADY_HPP

#include <vector>

#include "kslog/radial.hpp"

namespace kslog {

/// Compactly supported steady profile theta = rho^(m-1) of the
/// diffusion-dominated model with logarithmic attraction.
struct SteadyState {
    double m = 0.0;        ///< diffusion exponent, > 1
    double M = 0.0;        ///< mass
    RadialGrid grid;       ///< uniform grid covering [0, r_max], r_max > R
    std::vector<double> theta;  ///< clamped to 0 beyond R
    double R = 0.0;        ///< support radius (first zero of theta)
    double theta_c = 0.0;  ///< central value theta(0)
    double D = 0.0;        ///< Lagrange multiplier, = -u(R) = (M/2pi) log R
    double residual = 0.0; ///< sup-norm Euler-Lagrange residual on the support

    RadialDensity density() const;  ///< rho = theta^(1/(m-1))
};

struct ShootResult {
    RadialGrid grid;
    std::vector<double> theta;      ///< clamped to 0 beyond R
    std::vector<double> theta_raw;  ///< sign-preserving continuation past R
    double R = 0.0;
};

/// Integrates theta'' + theta'/r + ((m-1)/m) theta_+^(1/(m-1)) = 0 outward
/// from theta(0) = theta_c, theta'(0) = 0 (RK4; series start near r = 0)
/// and locates the first zero R by bisection between grid nodes.
/// Throws std::runtime_error("support exceeds domain") when theta stays
/// positive up to r_max.
ShootResult shoot_profile(double m, double theta_c, double dr, double r_max);

struct SolveOptions {
    double mass_tol = 1e-10;        ///< relative tolerance on the shot mass
    std::size_t support_nodes = 2048;  ///< target node count across [0, R]
    double domain_factor = 1.5;     ///< r_max = domain_factor * estimated R
};

/// Finds theta_c with quadrature mass M by bracketed bisection plus a
/// secant polish; the theta_c -> mass map is checked to be monotone over
/// the bracket before root-finding.
SteadyState solve_steady(double m, double M, double tol = 1e-10,
                         const SolveOptions& opts = SolveOptions());

/// Rescales a steady state to support radius R_new using
/// theta_R(x) = (R_new/R)^(2(m-1)/(m-2)) theta(x R/R_new). Rejected for
/// |m - 2| < 0.05 where the exponent blows up.
SteadyState scaling_transform(const SteadyState& base, double R_new);

/// Zero crossings of w(t) = theta(e^t) for the log-variable equation
/// w'' + ((m-1)/m) e^{2t} |w|^{1/(m-1)-1} w = 0, continued past sign
/// changes. Empty when no crossing occurs before t_max.
std::vector<double> oscillation_diagnostic(double m, double theta_c, double t_max);

}  // namespace kslog

#endif
