#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kslog/potential.hpp"
#include "kslog/radial.hpp"
#include "oracles.hpp"

using namespace kslog;
namespace nb = std::numbers;

namespace {

RadialDensity full_grid_disk(double M, double R, std::size_t n) {
    RadialGrid g(n, R / static_cast<double>(n - 1));
    double c = M / (nb::pi * R * R);
    return RadialDensity(g, std::vector<double>(n, c), M);
}

RadialDensity embedded_disk(double M, double R, double r_max, std::size_t n) {
    RadialGrid g(n, r_max / static_cast<double>(n - 1));
    double c = M / (nb::pi * R * R);
    std::vector<double> v(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        if (g.r(i) <= R)
            v[i] = c;
    return RadialDensity::from_values(g, v);
}

}  // namespace

TEST_CASE("potential: uniform disk center value (closed form)") {
    double M = 1.3, R = 1.5;
    auto rho = full_grid_disk(M, R, 4096);
    Potential pot = newtonian_potential_radial(rho, R);
    CHECK(pot.u[0] == doctest::Approx(oracle::disk_potential_center(M, R)).epsilon(1e-12));
    // interior profile: u(r) = u(R) + M (R^2 - r^2) / (4 pi R^2)
    for (std::size_t i = 0; i < rho.grid.n; i += 511) {
        double r = rho.grid.r(i);
        double expect = -M / (2.0 * nb::pi) * std::log(R) + M * (R * R - r * r) / (4.0 * nb::pi * R * R);
        CHECK(pot.u[i] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("potential: exterior log law is exact") {
    double M = 2.0, R = 1.0;
    auto rho = embedded_disk(M, R, 3.0, 3072);
    Potential pot = newtonian_potential_radial(rho, R);
    // the exterior identity holds bit-exactly against the potential's own
    // mass bookkeeping
    for (std::size_t i = 0; i < rho.grid.n; ++i) {
        double r = rho.grid.r(i);
        if (r >= R) {
            double dev = std::abs(pot.u[i] + (pot.M / (2.0 * nb::pi)) * std::log(r));
            REQUIRE(dev <= 1e-12 * (pot.M / (2.0 * nb::pi)) * (std::abs(std::log(r)) + 1.0));
        }
    }
    // point far field at 2R exactly on the log law
    std::size_t i2R = static_cast<std::size_t>(std::ceil(2.0 * R / rho.grid.dr));
    CHECK(pot.u[i2R] + (pot.M / (2.0 * nb::pi)) * std::log(rho.grid.r(i2R)) == 0.0);
    // and the nominal mass is recovered to quadrature accuracy
    CHECK(pot.M == doctest::Approx(M).epsilon(2e-3));
}

TEST_CASE("potential: u'(r) 2 pi r + M(r) = 0 at interior nodes") {
    RadialGrid g(4096, 6.0 / 4095.0);
    std::vector<double> v(g.n);
    for (std::size_t i = 0; i < g.n; ++i)
        v[i] = std::exp(-g.r(i) * g.r(i));
    auto rho = RadialDensity::from_values(g, v);
    Potential pot = newtonian_potential_radial(rho, detect_support_radius(rho));
    MassFunction mf = mass_function(rho);
    double M = rho.declared_mass;
    for (std::size_t i = 1; i + 1 < g.n; i += 173) {
        double up = (pot.u[i + 1] - pot.u[i - 1]) / (2.0 * g.dr);
        CHECK(std::abs(up * 2.0 * nb::pi * g.r(i) + mf.values[i]) <= 1e-5 * M);
    }
}

TEST_CASE("potential: asymptotic mass ratio for a slowly decaying source") {
    // rho ~ r^-4: at r = 20 the tail holds ~0.25% of the mass, so the
    // log-potential ratio u / K is already within 1% of M
    RadialGrid g(8192, 40.0 / 8191.0);
    std::vector<double> v(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
        double r = g.r(i);
        v[i] = 1.0 / (nb::pi * (1.0 + r * r) * (1.0 + r * r));
    }
    auto rho = RadialDensity::from_values(g, v);
    double M = rho.declared_mass;
    Potential pot = newtonian_potential_radial(rho, detect_support_radius(rho));
    std::size_t i20 = static_cast<std::size_t>(20.0 / g.dr);
    double K = -(1.0 / (2.0 * nb::pi)) * std::log(g.r(i20));
    CHECK(pot.u[i20] / K == doctest::Approx(M).epsilon(1e-2));
}

TEST_CASE("potential: support beyond the grid rejected") {
    auto rho = embedded_disk(1.0, 1.0, 3.0, 1024);
    CHECK_THROWS_AS(newtonian_potential_radial(rho, 3.5), std::invalid_argument);
    CHECK_THROWS_AS(newtonian_potential_radial(rho, 0.0), std::invalid_argument);
}

TEST_CASE("detect_support_radius") {
    auto rho = embedded_disk(1.0, 1.0, 3.0, 3073);
    double R = detect_support_radius(rho);
    CHECK(R == doctest::Approx(1.0).epsilon(2.0 * rho.grid.dr));
}
