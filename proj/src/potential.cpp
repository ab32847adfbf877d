#include "kslog/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kslog {

double detect_support_radius(const RadialDensity& rho, double floor_rel) {
    double peak = *std::max_element(rho.values.begin(), rho.values.end());
    std::size_t end = support_end(rho.values, peak * floor_rel);
    if (end == 0)
        return 0.0;
    return rho.grid.r(std::min(end, rho.grid.n - 1));
}

Potential newtonian_potential_radial(const RadialDensity& rho, double R_supp) {
    const double pi = std::numbers::pi;
    const RadialGrid& grid = rho.grid;
    // R_supp == r_max is allowed (support filling the grid exactly, with the
    // exterior law anchored at the last node); beyond that the anchor would
    // miss mass.
    if (!(R_supp > 0.0) || R_supp > grid.r_max() * (1.0 + 1e-12))
        throw std::invalid_argument("newtonian_potential_radial: support exceeds the grid");

    MassFunction mf = mass_function(rho);
    // Integrand of the inward sweep, h(r) = M(r)/(2 pi r); h(0) = 0 since
    // M(r) ~ pi r^2 rho(0).
    std::vector<double> h(grid.n);
    h[0] = 0.0;
    for (std::size_t i = 1; i < grid.n; ++i)
        h[i] = mf.values[i] / (2.0 * pi * grid.r(i));

    // First node at or beyond the support edge; everything from there out
    // follows the exact exterior law.
    std::size_t ia = static_cast<std::size_t>(std::ceil(R_supp / grid.dr - 1e-12));
    ia = std::min(std::max<std::size_t>(ia, 1), grid.n - 1);

    Potential pot;
    pot.grid = grid;
    pot.M = rho.declared_mass;
    pot.R_supp = R_supp;
    pot.u.assign(grid.n, 0.0);
    for (std::size_t i = ia; i < grid.n; ++i)
        pot.u[i] = -(pot.M / (2.0 * pi)) * std::log(grid.r(i));

    // u(r_{i}) = u(r_{i+1}) - int_{r_i}^{r_{i+1}} h(s) ds ... with u' = -h,
    // integrating inward: u_i = u_{i+1} + int h. Cubic-accurate increments:
    // the four-point rule (-1, 13, 13, -1)/24 interior, quadratic
    // three-point rules at the ends.
    const double dr = grid.dr;
    for (std::size_t i = ia; i-- > 0;) {
        double inc;
        if (i == 0) {
            inc = dr / 12.0 * (5.0 * h[0] + 8.0 * h[1] - h[2]);
        } else if (i + 2 >= grid.n) {
            inc = dr / 12.0 * (-h[i - 1] + 8.0 * h[i] + 5.0 * h[i + 1]);
        } else {
            inc = dr / 24.0 * (-h[i - 1] + 13.0 * h[i] + 13.0 * h[i + 1] - h[i + 2]);
        }
        pot.u[i] = pot.u[i + 1] + inc;
    }
    return pot;
}

}  // namespace kslog
