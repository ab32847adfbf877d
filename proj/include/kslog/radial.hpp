#ifndef KSLOG_RADIAL_HPP
#define KSLOG_RADIAL_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace kslog {

/// Central tolerance knobs shared by the numerical modules.
struct Tolerances {
    double closed_form = 1e-8;   ///< smooth closed-form quadrature checks
    double solver = 1e-4;        ///< checks against solver output
    double mass_check = 1e-6;    ///< declared vs quadrature mass of a density
    double monotone = 1e-12;     ///< slack for monotonicity assertions
};

Tolerances& default_tolerances();

/// Uniform radial grid r_i = i*dr, i = 0..n-1.
struct RadialGrid {
    std::size_t n = 0;
    double dr = 0.0;

    RadialGrid() = default;
    RadialGrid(std::size_t n_nodes, double spacing);

    double r(std::size_t i) const { return static_cast<double>(i) * dr; }
    double r_max() const { return r(n - 1); }
    bool operator==(const RadialGrid& o) const { return n == o.n && dr == o.dr; }

    /// Area of the annulus that node i represents (half-cell disk for i = 0).
    double annulus_area(std::size_t i) const;
};

/// Nonnegative radial density with mass bookkeeping.
/// The quadrature mass of `values` must match `declared_mass` within
/// tol.mass_check (relative).
struct RadialDensity {
    RadialGrid grid;
    std::vector<double> values;
    double declared_mass = 0.0;

    RadialDensity() = default;
    RadialDensity(RadialGrid g, std::vector<double> vals, double mass);

    /// Builds a density whose declared mass is the quadrature mass.
    static RadialDensity from_values(RadialGrid g, std::vector<double> vals);
};

/// Cumulative mass M(r_i) = int_0^{r_i} rho 2 pi s ds.
struct MassFunction {
    RadialGrid grid;
    std::vector<double> values;
    double total = 0.0;
};

/// integral f(r) 2 pi r dr over the grid. Composite Simpson; a 3/8 block
/// covers the last three intervals when the interval count is odd, so the
/// rule stays exact for cubic integrands (hence for quadratic f).
double integrate_radial(const RadialGrid& grid, const std::vector<double>& f);

/// Cumulative quadrature of rho 2 pi s ds by per-interval trapezoids.
/// Trapezoid weights are nonnegative, so M is nondecreasing for any
/// nonnegative input.
MassFunction mass_function(const RadialDensity& rho);

/// (int rho^p 2 pi r dr)^(1/p), p >= 1.
double lp_norm(const RadialDensity& rho, double p);

bool is_radially_nonincreasing(const RadialDensity& rho, double tol);
bool is_nonincreasing(const std::vector<double>& v, double tol);

/// Index one past the last value above `floor` (support detection).
std::size_t support_end(const std::vector<double>& values, double floor);

}  // namespace kslog

#endif
