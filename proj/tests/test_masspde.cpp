#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kslog/masspde.hpp"
#include "kslog/steady.hpp"
#include "kslog/suites.hpp"
#include "oracles.hpp"

using namespace kslog;
namespace nb = std::numbers;

namespace {

/// steady mass function resampled onto a PDE grid
EvolutionState steady_on_grid(const SteadyState& s, std::size_t nodes, double rmax_factor,
                              double scale_a = 1.0) {
    MassFunction mf = mass_function(s.density());
    RadialGrid grid(nodes, rmax_factor * s.R / static_cast<double>(nodes - 1));
    EvolutionState st;
    st.grid = grid;
    st.m = s.m;
    st.total = mf.total;
    st.M.resize(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        double r = scale_a * grid.r(i);
        if (r >= mf.grid.r_max()) {
            st.M[i] = mf.total;
            continue;
        }
        double q = r / mf.grid.dr;
        std::size_t k = std::min(static_cast<std::size_t>(q), mf.grid.n - 2);
        double frac = q - static_cast<double>(k);
        st.M[i] = mf.values[k] + frac * (mf.values[k + 1] - mf.values[k]);
    }
    return st;
}

}  // namespace

TEST_CASE("density_to_mass / mass_to_density: round trips") {
    // uniform disk filling the grid: centered differences are exact
    RadialGrid g(2048, 1.5 / 2047.0);
    double c = 0.9;
    auto disk = RadialDensity(g, std::vector<double>(g.n, c), c * nb::pi * 1.5 * 1.5);
    EvolutionState st = density_to_mass(disk, 2.0);
    RadialDensity back = mass_to_density(st);
    for (std::size_t i = 0; i < g.n; i += 111)
        CHECK(back.values[i] == doctest::Approx(c).epsilon(1e-6));

    // steady state round trip within grid tolerance
    SteadyState s = solve_steady(2.0, 1.0);
    RadialDensity rho0 = s.density();
    EvolutionState st2 = density_to_mass(rho0, 2.0);
    RadialDensity back2 = mass_to_density(st2);
    double dev = 0.0;
    for (std::size_t i = 0; i < s.grid.n; ++i)
        dev = std::max(dev, std::abs(back2.values[i] - rho0.values[i]));
    CHECK(dev <= 1e-3 * rho0.values[0]);

    // zero density -> zero mass function
    RadialGrid gz(64, 0.1);
    EvolutionState z = density_to_mass(RadialDensity(gz, std::vector<double>(64, 0.0), 0.0), 2.0);
    CHECK(z.total == 0.0);

    // corrupted (decreasing) mass function is rejected
    EvolutionState badst = st;
    badst.M[100] = badst.M[120];  // non-monotone dip
    CHECK_THROWS_AS(mass_to_density(badst), std::runtime_error);
}

TEST_CASE("step: steady state is a discrete fixed point") {
    SteadyState s = solve_steady(2.0, 1.0);
    EvolutionState st = steady_on_grid(s, 2048, 3.0);
    std::vector<double> M0 = st.M;
    double dt = stable_dt(st);
    EvolutionState next = step(st, dt);
    double drift = 0.0;
    for (std::size_t i = 0; i < st.grid.n; ++i)
        drift = std::max(drift, std::abs(next.M[i] - M0[i]));
    CHECK(drift <= 1e-8 * st.total);

    // flat region beyond the support stays exactly flat
    std::size_t i_flat = static_cast<std::size_t>(2.0 * s.R / st.grid.dr);
    CHECK(next.M[i_flat] == st.M[i_flat]);

    // boundary value pinned across many steps
    EvolutionState cur = st;
    for (int k = 0; k < 1000; ++k)
        cur = step(cur, dt);
    CHECK(cur.M.back() == st.total);
    CHECK(cur.M.front() == 0.0);
}

TEST_CASE("evolve: steady initial data stays put over T = 1") {
    SteadyState s = solve_steady(2.0, 1.0);
    EvolutionState st = steady_on_grid(s, 2048, 3.0);
    EvolveParams ep;
    ep.T = 1.0;
    ep.checkpoints = 5;
    auto hist = evolve(st, s, ep);
    for (const auto& cp : hist)
        CHECK(cp.sup_distance <= 1e-6 * st.total);
}

TEST_CASE("evolve: uniform disk relaxes toward the steady state") {
    SteadyState s = solve_steady(2.0, 1.0);
    RadialGrid grid(768, 3.0 * s.R / 767.0);
    EvolutionState st;
    st.grid = grid;
    st.m = s.m;
    st.total = mass_function(s.density()).total;
    // same mass spread over a disk of radius 2 with a few-cell smoothstep
    // edge (the evolution wants continuous initial densities)
    double Rd = 2.0, w = 8.0 * grid.dr;
    std::vector<double> q(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) {
        double r = grid.r(i);
        double x = (Rd - r) / w;
        q[i] = x >= 1.0 ? 1.0 : (x <= 0.0 ? 0.0 : x * x * (3.0 - 2.0 * x));
    }
    double raw = integrate_radial(grid, q);
    for (auto& v : q)
        v *= st.total / raw;
    st.M = mass_function(RadialDensity::from_values(grid, q)).values;
    double qtot = st.M.back();
    for (auto& v : st.M)
        v *= st.total / qtot;
    EvolveParams ep;
    ep.T = 50.0;
    ep.checkpoints = 7;
    auto hist = evolve(st, s, ep);
    CHECK(hist.back().sup_distance <= 0.1 * hist.front().sup_distance);
}

TEST_CASE("evolve: scaled initial data contracts toward the steady state") {
    SteadyState s = solve_steady(2.0, 1.0);
    EvolutionState st = steady_on_grid(s, 768, 3.0, 0.8);
    EvolveParams ep;
    ep.T = 12.0;
    ep.checkpoints = 7;
    auto hist = evolve(st, s, ep);
    CHECK(hist.front().sup_distance > 0.1);
    for (std::size_t i = 1; i < hist.size(); ++i)
        CHECK(hist[i].sup_distance <= hist[i - 1].sup_distance * (1.0 + 1e-9));
}

TEST_CASE("barrier_ode: equilibrium, monotone approach, linearized rate") {
    CHECK(barrier_ode(1.0, 1.0, 2.0, 5.0) == 1.0);
    CHECK(barrier_ode(0.7, 0.0, 2.0, 5.0) == 0.7);

    double m = 2.0, C = 1.0;
    double prev = 0.8;
    for (double t : {0.5, 1.0, 2.0, 3.0}) {
        double k = barrier_ode(0.8, C, m, t);
        CHECK(k > prev);
        CHECK(k < 1.0);
        prev = k;
    }
    // once |k-1| < 0.1 the decay rate approaches 2 C (m-1)
    double t1 = 1.5, t2 = 2.5;
    double k1 = barrier_ode(0.8, C, m, t1);
    double k2 = barrier_ode(0.8, C, m, t2);
    REQUIRE(std::abs(k1 - 1.0) < 0.1);
    double rate = std::log(std::abs(k1 - 1.0) / std::abs(k2 - 1.0)) / (t2 - t1);
    CHECK(rate == doctest::Approx(2.0 * C * (m - 1.0)).epsilon(0.05));

    // supersolution side: k decreasing toward 1
    double ks = barrier_ode(1.25, C, m, 2.0);
    CHECK(ks > 1.0);
    CHECK(ks < 1.25);

    CHECK_THROWS_AS(barrier_ode(-1.0, 1.0, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("barrier_mass: k = 1 reproduces the steady mass function") {
    SteadyState s = solve_steady(2.0, 1.0);
    Barrier b = make_barrier(BarrierKind::Sub, 1.0, s);
    MassFunction mf = mass_function(s.density());
    auto M = barrier_mass(b, 0.0, s.grid);
    double dev = 0.0;
    for (std::size_t i = 0; i < s.grid.n; ++i)
        dev = std::max(dev, std::abs(M[i] - mf.values[i]));
    CHECK(dev <= 1e-12 * mf.total);
}

TEST_CASE("concentration_constants: disk and steady state") {
    // uniform disk: the ratio M(r)/(2 pi r^2) is the constant c/2
    double c = 0.8, R = 1.2, m = 2.0;
    RadialGrid g(2048, R / 2047.0);
    SteadyState disk;
    disk.m = m;
    disk.M = c * nb::pi * R * R;
    disk.grid = g;
    disk.theta.assign(g.n, std::pow(c, m - 1.0));
    disk.R = R;
    disk.theta_c = std::pow(c, m - 1.0);
    auto [C1d, C2d] = concentration_constants(disk);
    CHECK(C1d == doctest::Approx(c / 2.0).epsilon(1e-6));
    CHECK(C2d == doctest::Approx(c / 2.0).epsilon(1e-12));

    // m = 2, M = 1: C1 = 1/(2 pi R^2) with the Bessel radius
    SteadyState s = solve_steady(2.0, 1.0);
    auto [C1, C2] = concentration_constants(s);
    double R_or = oracle::m2_support_radius();
    CHECK(C1 == doctest::Approx(1.0 / (2.0 * nb::pi * R_or * R_or)).epsilon(1e-4));
    CHECK(C2 == doctest::Approx(oracle::m2_theta_c(1.0) / 2.0).epsilon(1e-6));
    CHECK(C1 <= C2);

    // a ring profile has a non-monotone ratio
    SteadyState ring = disk;
    for (std::size_t i = 0; i < g.n; ++i) {
        double r = g.r(i);
        ring.theta[i] = std::exp(-(r - 0.6) * (r - 0.6) / 0.02);
    }
    ring.M = integrate_radial(g, [&] {
        std::vector<double> v(g.n);
        for (std::size_t i = 0; i < g.n; ++i)
            v[i] = ring.theta[i];
        return v;
    }());
    CHECK_THROWS_AS(concentration_constants(ring), std::runtime_error);
}

TEST_CASE("comparison_monitor: ordering on a short run; degenerate a = 1") {
    ComparisonParams params;
    params.T = 6.0;
    params.checkpoints = 5;
    params.nodes = 768;
    params.ordering_tol_rel = 1e-3;  // coarse grid, loose band
    ComparisonRun run = run_comparison(params);
    CHECK(run.report.ordered);
    CHECK(run.report.sub_margins.size() == params.checkpoints);

    // sub vs super barrier masses are ordered at all times
    Barrier sub = make_barrier(BarrierKind::Sub, 0.8, run.steady);
    Barrier super = make_barrier(BarrierKind::Super, 0.8, run.steady);
    for (double t : {0.0, 1.0, 5.0, 20.0}) {
        auto Ms = barrier_mass(sub, t, run.grid);
        auto Mx = barrier_mass(super, t, run.grid);
        for (std::size_t i = 0; i < run.grid.n; i += 37)
            REQUIRE(Ms[i] <= Mx[i] + 1e-12);
    }

    // a = 1: barriers and the run coincide for all time
    Barrier sub1 = make_barrier(BarrierKind::Sub, 1.0, run.steady);
    Barrier super1 = make_barrier(BarrierKind::Super, 1.0, run.steady);
    auto Ms = barrier_mass(sub1, 3.0, run.grid);
    auto Mx = barrier_mass(super1, 3.0, run.grid);
    for (std::size_t i = 0; i < run.grid.n; i += 53)
        CHECK(Ms[i] == Mx[i]);
}

TEST_CASE("convergence_rate: lambda_theory scales with mass at m = 2") {
    // R is mass independent at m = 2, so C1 = M/(2 pi R^2) and the
    // theoretical rate 2(m-1) C1 both scale linearly in M
    SteadyState s1 = solve_steady(2.0, 1.0);
    SteadyState s4 = solve_steady(2.0, 4.0);
    auto [C1a, C2a] = concentration_constants(s1);
    auto [C1b, C2b] = concentration_constants(s4);
    CHECK(C1b / C1a == doctest::Approx(4.0).epsilon(1e-3));
    CHECK(C2b / C2a == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("convergence_rate: skipped at the fixed point, sane on a real run") {
    SteadyState s = solve_steady(2.0, 1.0);
    EvolutionState st = steady_on_grid(s, 512, 3.0);
    EvolveParams ep;
    ep.T = 0.5;
    ep.checkpoints = 12;
    auto hist = evolve(st, s, ep);
    ConvergenceRate rate = convergence_rate(hist, s, 0.0, 1e-6);
    CHECK(rate.verdict == FitVerdict::Skipped);  // distances below the noise floor
    CHECK(rate.lambda_theory ==
          doctest::Approx(2.0 * (s.m - 1.0) / (2.0 * nb::pi * s.R * s.R)).epsilon(1e-6));
}

TEST_CASE("velocity_field: zero at the steady state, nonnegative on sub-barriers") {
    SteadyState s = solve_steady(2.0, 1.0);
    RadialDensity rho0 = s.density();
    auto v0 = velocity_field(rho0, s.m);
    double scale = s.M / (2.0 * nb::pi * s.R);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < s.grid.n; ++i)
        if (s.grid.r(i) < 0.98 * s.R)
            worst = std::max(worst, std::abs(v0[i]));
    CHECK(worst <= 1e-3 * scale);

    // sub-barrier a^2 rho0(a r): v >= 0 inside the (larger) support
    double a = 0.8;
    std::vector<double> scaled(s.grid.n, 0.0);
    for (std::size_t i = 0; i < s.grid.n; ++i) {
        double ar = a * s.grid.r(i);
        std::size_t k = static_cast<std::size_t>(ar / s.grid.dr);
        double frac = ar / s.grid.dr - static_cast<double>(k);
        double th = k + 1 < s.grid.n ? s.theta[k] + frac * (s.theta[k + 1] - s.theta[k]) : 0.0;
        scaled[i] = a * a * std::max(th, 0.0);  // m = 2
    }
    auto sub = RadialDensity::from_values(s.grid, scaled);
    auto vs = velocity_field(sub, s.m);
    double min_v = 0.0;
    for (std::size_t i = 1; i + 1 < s.grid.n; ++i)
        if (s.grid.r(i) < 0.95 * s.R / a && sub.values[i] > 1e-8 * sub.values[0])
            min_v = std::min(min_v, vs[i]);
    CHECK(min_v >= -1e-4 * scale);

    // a = 1 reduces to the steady state: v identically small again
    auto v1 = velocity_field(rho0, s.m);
    double w1 = 0.0;
    for (std::size_t i = 1; i + 1 < s.grid.n; ++i)
        if (s.grid.r(i) < 0.98 * s.R)
            w1 = std::max(w1, std::abs(v1[i]));
    CHECK(w1 == worst);
}
