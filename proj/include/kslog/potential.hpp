#ifndef KSLOG_POTENTIAL_HPP
#define KSLOG_POTENTIAL_HPP

#include <vector>

#include "kslog/radial.hpp"

namespace kslog {

/// Logarithmic Newtonian potential u = K * rho of a radial density,
/// K(x) = -(1/2pi) log|x|. Outside the support the values are exactly
/// -(M/2pi) log r.
struct Potential {
    RadialGrid grid;
    std::vector<double> u;
    double M = 0.0;
    double R_supp = 0.0;
};

/// Radial potential through the mass-function identity
/// u'(r) = -M_rho(r)/(2 pi r): exact log law anchored outside the support,
/// cumulative quadrature inward. The source must vanish beyond R_supp and
/// R_supp must sit strictly inside the grid.
Potential newtonian_potential_radial(const RadialDensity& rho, double R_supp);

/// Support radius detected from the trailing zero values (last node above
/// floor_rel * max, rounded up to the next node).
double detect_support_radius(const RadialDensity& rho, double floor_rel = 1e-13);

}  // namespace kslog

#endif
