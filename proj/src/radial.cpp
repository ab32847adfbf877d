#include "kslog/radial.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kslog {

Tolerances& default_tolerances() {
    static Tolerances tol;
    return tol;
}

RadialGrid::RadialGrid(std::size_t n_nodes, double spacing) : n(n_nodes), dr(spacing) {
    if (n < 16)
        throw std::invalid_argument("RadialGrid: need at least 16 nodes");
    if (!(dr > 0.0))
        throw std::invalid_argument("RadialGrid: spacing must be positive");
}

double RadialGrid::annulus_area(std::size_t i) const {
    const double pi = std::numbers::pi;
    if (i == 0) {
        double h = dr / 2.0;
        return pi * h * h;
    }
    double lo = r(i) - dr / 2.0;
    double hi = r(i) + dr / 2.0;
    return pi * (hi * hi - lo * lo);  // = 2 pi r_i dr
}

RadialDensity::RadialDensity(RadialGrid g, std::vector<double> vals, double mass)
    : grid(g), values(std::move(vals)), declared_mass(mass) {
    if (values.size() != grid.n)
        throw std::invalid_argument("RadialDensity: value count does not match grid");
    if (!(declared_mass >= 0.0))
        throw std::invalid_argument("RadialDensity: mass must be nonnegative");
    for (double v : values)
        if (v < 0.0)
            throw std::invalid_argument("RadialDensity: negative value");
    double q = integrate_radial(grid, values);
    double scale = std::max(declared_mass, std::abs(q));
    if (std::abs(q - declared_mass) > default_tolerances().mass_check * scale)
        throw std::invalid_argument("RadialDensity: quadrature mass " + std::to_string(q) +
                                    " disagrees with declared mass " + std::to_string(declared_mass));
}

RadialDensity RadialDensity::from_values(RadialGrid g, std::vector<double> vals) {
    double q = integrate_radial(g, vals);
    return RadialDensity(g, std::move(vals), q);
}

double integrate_radial(const RadialGrid& grid, const std::vector<double>& f) {
    if (grid.n < 3)
        throw std::invalid_argument("integrate_radial: need at least 3 nodes");
    if (f.size() != grid.n)
        throw std::invalid_argument("integrate_radial: value count does not match grid");
    const double two_pi = 2.0 * std::numbers::pi;
    auto g = [&](std::size_t i) { return two_pi * grid.r(i) * f[i]; };

    std::size_t intervals = grid.n - 1;
    std::size_t simpson_end = grid.n;  // one past last node of the Simpson block
    double total = 0.0;
    if (intervals % 2 == 1) {
        // Simpson 3/8 over the final three intervals keeps cubic exactness.
        std::size_t i = grid.n - 4;
        total += 3.0 * grid.dr / 8.0 * (g(i) + 3.0 * g(i + 1) + 3.0 * g(i + 2) + g(i + 3));
        simpson_end = grid.n - 3;
    }
    for (std::size_t i = 0; i + 2 < simpson_end; i += 2)
        total += grid.dr / 3.0 * (g(i) + 4.0 * g(i + 1) + g(i + 2));
    return total;
}

MassFunction mass_function(const RadialDensity& rho) {
    const double two_pi = 2.0 * std::numbers::pi;
    const RadialGrid& grid = rho.grid;
    MassFunction m;
    m.grid = grid;
    m.values.assign(grid.n, 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < grid.n; ++i) {
        double g0 = two_pi * grid.r(i) * rho.values[i];
        double g1 = two_pi * grid.r(i + 1) * rho.values[i + 1];
        acc += 0.5 * (g0 + g1) * grid.dr;
        m.values[i + 1] = acc;
    }
    m.total = acc;
    return m;
}

double lp_norm(const RadialDensity& rho, double p) {
    if (p < 1.0)
        throw std::invalid_argument("lp_norm: p must be >= 1");
    std::vector<double> powd(rho.grid.n);
    for (std::size_t i = 0; i < rho.grid.n; ++i)
        powd[i] = std::pow(rho.values[i], p);
    return std::pow(integrate_radial(rho.grid, powd), 1.0 / p);
}

bool is_nonincreasing(const std::vector<double>& v, double tol) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        if (v[i + 1] > v[i] + tol)
            return false;
    return true;
}

bool is_radially_nonincreasing(const RadialDensity& rho, double tol) {
    return is_nonincreasing(rho.values, tol);
}

std::size_t support_end(const std::vector<double>& values, double floor) {
    std::size_t end = 0;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] > floor)
            end = i + 1;
    return end;
}

}  // namespace kslog
