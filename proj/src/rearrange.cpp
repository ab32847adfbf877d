#include "kslog/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "kslog/energy.hpp"
#include "kslog/potential.hpp"

namespace kslog {

double LayerCake::integral(double s) const {
    if (values.empty() || s <= 0.0)
        return 0.0;
    if (s >= total_area())
        return cum_vmass.back();
    // first slab whose cumulative area exceeds s
    auto it = std::upper_bound(cum_area.begin(), cum_area.end(), s);
    std::size_t k = static_cast<std::size_t>(it - cum_area.begin());
    double below = k == 0 ? 0.0 : cum_vmass[k - 1];
    double area_below = k == 0 ? 0.0 : cum_area[k - 1];
    return below + values[k] * (s - area_below);
}

double LayerCake::window_average(double lo, double hi) const {
    if (!(hi > lo) || values.empty() || lo >= total_area())
        return 0.0;
    // accumulate slab overlaps directly; differencing the cumulative
    // integral would lose ~1e-13 to cancellation on long profiles
    auto it = std::upper_bound(cum_area.begin(), cum_area.end(), lo);
    std::size_t k = static_cast<std::size_t>(it - cum_area.begin());
    double acc = 0.0;
    double pos = lo;
    while (k < values.size() && pos < hi) {
        double slab_end = cum_area[k];
        double seg = std::min(hi, slab_end) - pos;
        if (seg > 0.0)
            acc += values[k] * seg;
        pos = slab_end;
        ++k;
    }
    return acc / (hi - lo);
}

LayerCake layer_cake(const std::vector<double>& values, const std::vector<double>& areas) {
    if (values.size() != areas.size())
        throw std::invalid_argument("layer_cake: size mismatch");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    // stable: by value descending, then original index ascending
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    LayerCake lc;
    lc.values.reserve(values.size());
    lc.areas.reserve(values.size());
    lc.cum_area.reserve(values.size());
    lc.cum_vmass.reserve(values.size());
    double ca = 0.0, cv = 0.0;
    for (std::size_t k : order) {
        lc.values.push_back(values[k]);
        lc.areas.push_back(areas[k]);
        ca += areas[k];
        cv += values[k] * areas[k];
        lc.cum_area.push_back(ca);
        lc.cum_vmass.push_back(cv);
    }
    return lc;
}

namespace {

std::vector<double> window_resample(const LayerCake& lc, const RadialGrid& grid) {
    const double pi = std::numbers::pi;
    std::vector<double> out(grid.n, 0.0);
    for (std::size_t j = 0; j < grid.n; ++j) {
        double rlo = std::max(grid.r(j) - grid.dr / 2.0, 0.0);
        double rhi = grid.r(j) + grid.dr / 2.0;
        out[j] = lc.window_average(pi * rlo * rlo, pi * rhi * rhi);
    }
    return out;
}

}  // namespace

RadialDensity rearrange_radial(const RadialDensity& rho) {
    std::vector<double> areas(rho.grid.n);
    for (std::size_t i = 0; i < rho.grid.n; ++i)
        areas[i] = rho.grid.annulus_area(i);
    LayerCake lc = layer_cake(rho.values, areas);
    std::vector<double> out = window_resample(lc, rho.grid);
    return RadialDensity::from_values(rho.grid, std::move(out));
}

RadialDensity rearrange_2d(const Density2D& rho, std::size_t nodes) {
    const double pi = std::numbers::pi;
    for (double v : rho.values)
        if (v < 0.0)
            throw std::invalid_argument("rearrange_2d: negative cell value");
    std::vector<double> areas(rho.values.size(), rho.h * rho.h);
    LayerCake lc = layer_cake(rho.values, areas);

    double R_total = std::sqrt(lc.total_area() / pi);
    if (nodes == 0)
        nodes = std::max<std::size_t>(4096, 128 * rho.values.size());
    RadialGrid grid(nodes, R_total * (1.0 + 2.0 / static_cast<double>(nodes)) /
                               static_cast<double>(nodes - 1));
    std::vector<double> out = window_resample(lc, grid);
    return RadialDensity::from_values(grid, std::move(out));
}

ConcentrationOrder compare_concentration(const RadialDensity& rho1, const RadialDensity& rho2,
                                         double tol_rel) {
    MassFunction m1 = mass_function(rho1);
    MassFunction m2 = mass_function(rho2);
    double band = tol_rel * std::max(m1.total, m2.total);

    auto m2_at = [&](double r) {
        if (r >= rho2.grid.r_max())
            return m2.total;
        double q = r / rho2.grid.dr;
        std::size_t k = std::min(static_cast<std::size_t>(q), rho2.grid.n - 2);
        double frac = q - static_cast<double>(k);
        return m2.values[k] + frac * (m2.values[k + 1] - m2.values[k]);
    };

    ConcentrationOrder ord;
    bool any_less = false, any_more = false;
    int prev_sign = 0;
    for (std::size_t i = 0; i < rho1.grid.n; ++i) {
        double diff = m1.values[i] - m2_at(rho1.grid.r(i));
        if (std::abs(diff) > std::abs(ord.max_gap))
            ord.max_gap = diff;
        int sign = diff > band ? 1 : (diff < -band ? -1 : 0);
        if (sign > 0)
            any_more = true;
        if (sign < 0)
            any_less = true;
        if (sign != 0 && prev_sign != 0 && sign != prev_sign)
            ord.crossing_radii.push_back(rho1.grid.r(i));
        if (sign != 0)
            prev_sign = sign;
    }
    if (any_less && any_more)
        ord.verdict = Concentration::Crossing;
    else if (any_less)
        ord.verdict = Concentration::LessConcentrated;
    else if (any_more)
        ord.verdict = Concentration::MoreConcentrated;
    else
        ord.verdict = Concentration::Equal;
    return ord;
}

RieszCheck riesz_log_check(const Density2D& rho, double tol_rel) {
    const double pi = std::numbers::pi;
    double L_before = log_double_integral_2d(rho);

    RadialDensity flat = rearrange_2d(rho);
    double R_supp = detect_support_radius(flat);
    Potential pot = newtonian_potential_radial(flat, R_supp);
    std::vector<double> integrand(flat.grid.n);
    for (std::size_t i = 0; i < flat.grid.n; ++i)
        integrand[i] = pot.u[i] * flat.values[i];
    double int_u_rho = integrate_radial(flat.grid, integrand);
    double L_after = -2.0 * pi * int_u_rho;

    RieszCheck chk;
    chk.W_before = L_before / (4.0 * pi);
    chk.W_after = L_after / (4.0 * pi);
    double scale = std::max({std::abs(L_before), std::abs(L_after), 1e-300});
    chk.margin = (L_before - L_after) / scale;
    chk.holds = chk.margin >= -tol_rel;
    return chk;
}

double log_hls_constant(double M) {
    return M * (1.0 + std::log(std::numbers::pi) - std::log(M));
}

LogHlsCheck log_hls_check(const RadialDensity& rho, double tol_rel) {
    const double pi = std::numbers::pi;
    double M = integrate_radial(rho.grid, rho.values);
    if (!(M > 0.0))
        throw std::invalid_argument("log_hls_check: zero mass");

    std::vector<double> ent(rho.grid.n);
    for (std::size_t i = 0; i < rho.grid.n; ++i) {
        double v = rho.values[i];
        ent[i] = v > 0.0 ? v * std::log(v) : 0.0;  // rho log rho -> 0 at rho = 0
    }
    LogHlsCheck chk;
    chk.lhs = integrate_radial(rho.grid, ent);

    double R_supp = detect_support_radius(rho);
    Potential pot = newtonian_potential_radial(rho, R_supp);
    std::vector<double> integrand(rho.grid.n);
    for (std::size_t i = 0; i < rho.grid.n; ++i)
        integrand[i] = pot.u[i] * rho.values[i];
    double L = -2.0 * pi * integrate_radial(rho.grid, integrand);

    chk.rhs = -2.0 / M * L - log_hls_constant(M);
    chk.margin = chk.lhs - chk.rhs;
    chk.holds = chk.margin >= -tol_rel * std::max(std::abs(chk.lhs), std::abs(chk.rhs));
    return chk;
}

RadialDensity extremal_density(double M, double lambda, double r_max, std::size_t nodes) {
    const double pi = std::numbers::pi;
    RadialGrid grid(nodes, r_max / static_cast<double>(nodes - 1));
    std::vector<double> vals(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        double r = grid.r(i);
        double den = lambda * lambda + r * r;
        vals[i] = M * lambda * lambda / (pi * den * den);
    }
    return RadialDensity::from_values(grid, std::move(vals));
}

}  // namespace kslog
