#include "kslog/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kslog {

double entropy(const RadialDensity& rho, double m) {
    if (!(m > 1.0))
        throw std::invalid_argument("entropy: m must be > 1");
    std::vector<double> powd(rho.grid.n);
    for (std::size_t i = 0; i < rho.grid.n; ++i)
        powd[i] = std::pow(rho.values[i], m);
    return integrate_radial(rho.grid, powd) / (m - 1.0);
}

double interaction_energy(const RadialDensity& rho, double R_supp) {
    if (R_supp <= 0.0)
        R_supp = detect_support_radius(rho);
    Potential pot = newtonian_potential_radial(rho, R_supp);
    std::vector<double> integrand(rho.grid.n);
    for (std::size_t i = 0; i < rho.grid.n; ++i)
        integrand[i] = pot.u[i] * rho.values[i];
    return -0.5 * integrate_radial(rho.grid, integrand);
}

EnergyBreakdown free_energy(const RadialDensity& rho, double m, double R_supp) {
    if (!(m > 1.0))
        throw std::invalid_argument("free_energy: m must be > 1");
    if (R_supp <= 0.0)
        R_supp = detect_support_radius(rho);
    Potential pot = newtonian_potential_radial(rho, R_supp);

    EnergyBreakdown e;
    e.H = entropy(rho, m);
    std::vector<double> integrand(rho.grid.n);
    for (std::size_t i = 0; i < rho.grid.n; ++i)
        integrand[i] = pot.u[i] * rho.values[i];
    e.W = -0.5 * integrate_radial(rho.grid, integrand);
    e.G = e.H + e.W;

    double M = rho.declared_mass;
    double norm_m_m = (m - 1.0) * e.H;  // ||rho||_m^m
    e.D_formula = 2.0 / M * e.G + (m - 2.0) / (M * (m - 1.0)) * norm_m_m;

    // Profile reading of the multiplier over the inner 90% of the support;
    // the free boundary is excluded because theta -> 0 there amplifies the
    // relative error.
    double window = 0.9 * R_supp;
    double sum = 0.0, sum2 = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < rho.grid.n; ++i) {
        if (rho.grid.r(i) > window)
            break;
        double d = m / (m - 1.0) * std::pow(rho.values[i], m - 1.0) - pot.u[i];
        sum += d;
        sum2 += d * d;
        ++count;
    }
    if (count > 0) {
        e.D_profile = sum / static_cast<double>(count);
        double var = std::max(0.0, sum2 / static_cast<double>(count) - e.D_profile * e.D_profile);
        e.D_profile_std = std::sqrt(var);
    }
    return e;
}

ElResidual el_residual(const SteadyState& s) {
    RadialDensity rho = s.density();
    Potential pot = newtonian_potential_radial(rho, s.R);
    double mm = s.m / (s.m - 1.0);
    ElResidual res;
    for (std::size_t i = 0; i < s.grid.n; ++i) {
        double r = s.grid.r(i);
        if (r < s.R) {
            res.inner = std::max(res.inner, std::abs(mm * s.theta[i] - pot.u[i] - s.D));
        } else {
            res.outer = std::max(res.outer, std::max(0.0, pot.u[i] + s.D));
        }
    }
    return res;
}

namespace {

/// Kernel helpers for the annular reduction of
/// iint g(|x-y|) rho rho = 2 pi int int rho(r) rho(s) r s A(r,s) dr ds
/// with A(r,s) = int_0^{2pi} g(d(phi)) dphi, d^2 = r^2 + s^2 - 2 r s cos phi.
struct AnnularQuadrature {
    std::vector<double> radii, weights, values;  // subsampled density

    AnnularQuadrature(const RadialDensity& rho, std::size_t radial_points) {
        std::size_t stride = std::max<std::size_t>(1, rho.grid.n / radial_points);
        for (std::size_t i = 0; i < rho.grid.n; i += stride) {
            std::size_t hi = std::min(i + stride, rho.grid.n);
            // Lump each block of nodes into one annular ring carrying the
            // block's trapezoid mass fraction (without the 2 pi r factor).
            double w = 0.0, rw = 0.0, vw = 0.0;
            for (std::size_t j = i; j < hi; ++j) {
                double cell = rho.grid.dr;
                w += cell;
                rw += rho.grid.r(j) * cell;
                vw += rho.values[j] * cell;
            }
            radii.push_back(rw / w);
            weights.push_back(w);
            values.push_back(vw / w);
        }
    }
};

template <typename Kernel>
double annular_double_integral(const RadialDensity& rho, std::size_t radial_points,
                               std::size_t angles, Kernel g) {
    const double pi = std::numbers::pi;
    AnnularQuadrature q(rho, radial_points);
    std::size_t nrad = q.radii.size();

    // midpoint rule in phi over [0, pi], doubled by symmetry
    std::vector<double> cosphi(angles);
    for (std::size_t k = 0; k < angles; ++k)
        cosphi[k] = std::cos(pi * (static_cast<double>(k) + 0.5) / static_cast<double>(angles));
    double dphi = pi / static_cast<double>(angles);

    double total = 0.0;
    for (std::size_t a = 0; a < nrad; ++a) {
        double ra = q.radii[a];
        double fa = q.values[a] * ra * q.weights[a];
        if (fa == 0.0)
            continue;
        for (std::size_t b = 0; b < nrad; ++b) {
            double rb = q.radii[b];
            double fb = q.values[b] * rb * q.weights[b];
            if (fb == 0.0)
                continue;
            double r2s2 = ra * ra + rb * rb;
            double rs2 = 2.0 * ra * rb;
            double kernel = 0.0;
            for (std::size_t k = 0; k < angles; ++k) {
                double d2 = r2s2 - rs2 * cosphi[k];
                kernel += g(d2);
            }
            total += fa * fb * kernel * 2.0 * dphi;
        }
    }
    return 2.0 * pi * total;
}

}  // namespace

double truncated_interaction(const RadialDensity& rho, double R, std::size_t radial_points,
                             std::size_t angles) {
    double R2 = R * R;
    return annular_double_integral(rho, radial_points, angles, [R2](double d2) {
        return d2 > R2 ? 0.5 * std::log(d2) : 0.0;
    });
}

double near_log_integral(const RadialDensity& rho, double R, std::size_t radial_points,
                         std::size_t angles) {
    double R2 = R * R;
    return annular_double_integral(rho, radial_points, angles, [R2](double d2) {
        return (d2 <= R2 && d2 > 0.0) ? 0.5 * std::abs(std::log(d2)) : 0.0;
    });
}

double log_double_integral_exact_kernel(const RadialDensity& rho) {
    // 2 pi * int int rho(r) rho(s) r s * 2 pi log max(r, s) dr ds by nested
    // trapezoids; the inner cumulative structure makes this O(n).
    const double two_pi = 2.0 * std::numbers::pi;
    const RadialGrid& grid = rho.grid;
    std::size_t n = grid.n;
    std::vector<double> w(n, grid.dr);
    w[0] = w[n - 1] = grid.dr / 2.0;  // trapezoid end weights

    // cum[i] = sum_{j<=i} rho_j r_j w_j  (inner integral for s <= r)
    std::vector<double> f(n), cum(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        f[i] = rho.values[i] * grid.r(i) * w[i];
        acc += f[i];
        cum[i] = acc;
    }
    double total = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        if (f[i] == 0.0 && cum[i] == 0.0)
            continue;
        double logr = std::log(grid.r(i));
        // pairs with max = r_i: (s <= r_i, r_i) and (r_i, s < r_i)
        total += logr * f[i] * (2.0 * cum[i] - f[i]);
    }
    return two_pi * two_pi * total;
}

ConfinementReport confinement_check(const RadialDensity& rho, double R) {
    if (R < 1.0)
        throw std::invalid_argument("confinement_check: R must be >= 1");
    if (!is_radially_nonincreasing(rho, default_tolerances().monotone * rho.values[0]))
        throw std::invalid_argument("confinement_check: density must be radially nonincreasing");

    ConfinementReport rep;
    rep.lhs = truncated_interaction(rho, 1.0);
    // tail mass beyond R
    MassFunction mf = mass_function(rho);
    double inside;
    if (R >= rho.grid.r_max()) {
        inside = mf.total;
    } else {
        std::size_t k = static_cast<std::size_t>(R / rho.grid.dr);
        double frac = (R - rho.grid.r(k)) / rho.grid.dr;
        inside = mf.values[k] + frac * (mf.values[std::min(k + 1, rho.grid.n - 1)] - mf.values[k]);
    }
    double tail = std::max(0.0, mf.total - inside);
    rep.rhs = rho.declared_mass * std::log(R) / 2.0 * tail;
    rep.margin = rep.lhs - rep.rhs;
    rep.holds = rep.margin >= 0.0;
    return rep;
}

}  // namespace kslog
