#ifndef KSLOG_REARRANGE_HPP
#define KSLOG_REARRANGE_HPP

#include <string>
#include <vector>

#include "kslog/field2d.hpp"
#include "kslog/radial.hpp"

namespace kslog {

/// Outcome of comparing two mass concentrations (Definition of the partial
/// order: rho1 is less concentrated than rho2 when its centered-ball masses
/// never exceed rho2's).
enum class Concentration { LessConcentrated, MoreConcentrated, Equal, Crossing };

struct ConcentrationOrder {
    Concentration verdict = Concentration::Equal;
    double max_gap = 0.0;  ///< signed extremal value of M1(r) - M2(r)
    std::vector<double> crossing_radii;
};

/// Layer-cake data of a density: slab values sorted descending (stable by
/// original index) with their measure.
struct LayerCake {
    std::vector<double> values;  ///< nonincreasing
    std::vector<double> areas;
    std::vector<double> cum_area;   ///< cumulative areas, cum_area[k] = sum_{j<=k}
    std::vector<double> cum_vmass;  ///< cumulative value*area

    double total_area() const { return cum_area.empty() ? 0.0 : cum_area.back(); }
    /// integral of the layer-cake step function over [0, s]
    double integral(double s) const;
    /// average of the step function over [lo, hi]
    double window_average(double lo, double hi) const;
};

LayerCake layer_cake(const std::vector<double>& values, const std::vector<double>& areas);

/// Spherical decreasing rearrangement on the density's own grid. Node i
/// carries its annulus as measure; the output value at node j is the
/// average of the layer-cake function over node j's annulus window, so the
/// construction is measure-preserving and idempotent.
RadialDensity rearrange_radial(const RadialDensity& rho);

/// Rearrangement of a 2D density onto a fresh radial grid; each cell is a
/// slab of area h^2. `nodes` = 0 picks 8x the cell count so every slab is
/// resolved by several annulus windows.
RadialDensity rearrange_2d(const Density2D& rho, std::size_t nodes = 0);

/// Pointwise comparison of the two mass functions with a tolerance band of
/// tol_rel * max(total1, total2). Non-matching grids are compared on the
/// first grid by linear interpolation.
ConcentrationOrder compare_concentration(const RadialDensity& rho1, const RadialDensity& rho2,
                                         double tol_rel = 1e-9);

struct RieszCheck {
    double W_before = 0.0;  ///< -(1/2) int (K*rho) rho of the 2D input
    double W_after = 0.0;   ///< same for the rearranged radial profile
    double margin = 0.0;    ///< relative decrease of the log double integral
    bool holds = false;
};

/// Riesz-type monotonicity for the log kernel: the double integral of
/// log|x-y| rho rho does not increase under rearrangement. Left side by
/// direct 2D summation, right side through the radial potential.
RieszCheck riesz_log_check(const Density2D& rho, double tol_rel = 1e-6);

struct LogHlsCheck {
    double lhs = 0.0;  ///< int rho log rho
    double rhs = 0.0;  ///< -(2/M) iint log|x-y| rho rho - C(M)
    double margin = 0.0;
    bool holds = false;
};

/// Logarithmic HLS inequality with the sharp constant
/// C(M) = M (1 + log pi - log M); rho log rho evaluates to 0 where rho = 0.
LogHlsCheck log_hls_check(const RadialDensity& rho, double tol_rel = 1e-9);

double log_hls_constant(double M);

/// Sharp-constant extremal rho(r) = M lambda^2 / (pi (lambda^2 + r^2)^2)
/// sampled on [0, r_max]; near-equality in the log-HLS check as the domain
/// grows.
RadialDensity extremal_density(double M, double lambda, double r_max, std::size_t nodes);

}  // namespace kslog

#endif
