#include "kslog/field2d.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "kslog/csv.hpp"

namespace kslog {

Density2D::Density2D(std::size_t n_cells, double cell) : n(n_cells), h(cell) {
    if (n < 2)
        throw std::invalid_argument("Density2D: need at least 2 cells per side");
    if (!(h > 0.0))
        throw std::invalid_argument("Density2D: cell size must be positive");
    values.assign(n * n, 0.0);
}

double Density2D::mass() const {
    double s = 0.0;
    for (double v : values)
        s += v;
    return s * h * h;
}

std::pair<double, double> Density2D::center_of_mass() const {
    double s = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t ix = 0; ix < n; ++ix)
        for (std::size_t iy = 0; iy < n; ++iy) {
            double v = at(ix, iy);
            s += v;
            sx += v * x(ix);
            sy += v * x(iy);
        }
    if (s == 0.0)
        return {0.0, 0.0};
    return {sx / s, sy / s};
}

double log_self_cell_integral(double h) {
    const double pi = std::numbers::pi;
    return h * h * (std::log(h) - 0.5 * std::log(2.0) + pi / 4.0 - 1.5);
}

std::vector<double> potential_2d(const Density2D& rho) {
    const double pi = std::numbers::pi;
    std::size_t n = rho.n;
    double h2 = rho.h * rho.h;
    double self = log_self_cell_integral(rho.h);
    std::vector<double> u(n * n, 0.0);

    // log|x_i - x_j| depends only on the index offset; precompute the upper
    // quadrant of offsets.
    std::vector<double> logtab(n * n);
    for (std::size_t dx = 0; dx < n; ++dx)
        for (std::size_t dy = 0; dy < n; ++dy) {
            if (dx == 0 && dy == 0)
                continue;
            double ddx = static_cast<double>(dx) * rho.h;
            double ddy = static_cast<double>(dy) * rho.h;
            logtab[dx * n + dy] = 0.5 * std::log(ddx * ddx + ddy * ddy);
        }

    for (std::size_t ix = 0; ix < n; ++ix) {
        for (std::size_t iy = 0; iy < n; ++iy) {
            double acc = 0.0;
            for (std::size_t jx = 0; jx < n; ++jx) {
                std::size_t dx = ix > jx ? ix - jx : jx - ix;
                const double* row = rho.values.data() + jx * n;
                const double* tab = logtab.data() + dx * n;
                for (std::size_t jy = 0; jy < n; ++jy) {
                    if (jx == ix && jy == iy)
                        continue;
                    std::size_t dy = iy > jy ? iy - jy : jy - iy;
                    acc += row[jy] * tab[dy];
                }
            }
            u[ix * n + iy] = -(acc * h2 + rho.at(ix, iy) * self) / (2.0 * pi);
        }
    }
    return u;
}

double potential_at(const Density2D& rho, double px, double py) {
    const double pi = std::numbers::pi;
    double acc = 0.0;
    for (std::size_t ix = 0; ix < rho.n; ++ix) {
        double dx = px - rho.x(ix);
        for (std::size_t iy = 0; iy < rho.n; ++iy) {
            double v = rho.at(ix, iy);
            if (v == 0.0)
                continue;
            double dy = py - rho.x(iy);
            double d2 = dx * dx + dy * dy;
            acc += v * 0.5 * std::log(d2);
        }
    }
    return -acc * rho.h * rho.h / (2.0 * pi);
}

double log_double_integral_2d(const Density2D& rho) {
    const double pi = std::numbers::pi;
    std::vector<double> u = potential_2d(rho);
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        s += u[i] * rho.values[i];
    return -2.0 * pi * s * rho.h * rho.h;
}

FarFieldEstimate far_field_check(const Density2D& rho, double r_o, std::size_t n_radii,
                                 std::size_t n_angles) {
    const double pi = std::numbers::pi;
    auto [cx, cy] = rho.center_of_mass();

    // The estimate needs the source inside B_{r_o} around its center of mass.
    double peak = 0.0;
    for (double v : rho.values)
        peak = std::max(peak, std::abs(v));
    for (std::size_t ix = 0; ix < rho.n; ++ix)
        for (std::size_t iy = 0; iy < rho.n; ++iy) {
            double dx = rho.x(ix) - cx, dy = rho.x(iy) - cy;
            if (dx * dx + dy * dy > r_o * r_o && std::abs(rho.at(ix, iy)) > 1e-9 * peak)
                throw std::invalid_argument("far_field_check: support extends beyond r_o");
        }

    double M = rho.mass();
    double fd = rho.h / 4.0;  // centered-difference step for the gradient

    FarFieldEstimate est;
    for (std::size_t ir = 0; ir < n_radii; ++ir) {
        double rad = 2.0 * r_o +
                     (4.0 * r_o - 2.0 * r_o) * static_cast<double>(ir) / static_cast<double>(n_radii - 1);
        for (std::size_t ia = 0; ia < n_angles; ++ia) {
            double phi = 2.0 * pi * (static_cast<double>(ia) + 0.37) / static_cast<double>(n_angles);
            double px = cx + rad * std::cos(phi);
            double py = cy + rad * std::sin(phi);
            auto rem = [&](double qx, double qy) {
                double dist = std::hypot(qx - cx, qy - cy);
                return potential_at(rho, qx, qy) + M / (2.0 * pi) * std::log(dist);
            };
            double r0 = rem(px, py);
            est.C1 = std::max(est.C1, std::abs(r0) * rad * rad / (r_o * r_o));
            double gx = (rem(px + fd, py) - rem(px - fd, py)) / (2.0 * fd);
            double gy = (rem(px, py + fd) - rem(px, py - fd)) / (2.0 * fd);
            est.C2 = std::max(est.C2, std::hypot(gx, gy) * rad * rad * rad / (r_o * r_o));
        }
    }
    return est;
}

void write_density2d_csv(const std::string& path, const Density2D& rho) {
    std::vector<double> xs, ys, vs;
    xs.reserve(rho.n * rho.n);
    ys.reserve(rho.n * rho.n);
    vs.reserve(rho.n * rho.n);
    for (std::size_t ix = 0; ix < rho.n; ++ix)
        for (std::size_t iy = 0; iy < rho.n; ++iy) {
            xs.push_back(rho.x(ix));
            ys.push_back(rho.x(iy));
            vs.push_back(rho.at(ix, iy));
        }
    write_csv(path, {"x", "y", "value"}, {&xs, &ys, &vs});
}

Density2D read_density2d_csv(const std::string& path) {
    CsvTable t = read_csv(path);
    const auto& xs = t.column("x");
    const auto& vs = t.column("value");
    std::size_t cells = xs.size();
    auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(cells))));
    if (n * n != cells || n < 2)
        throw std::runtime_error("density2d: cell count is not a square");
    double h = xs[n] - xs[0];  // consecutive ix at fixed iy stride n
    if (!(h > 0.0))
        throw std::runtime_error("density2d: could not infer cell size");
    Density2D rho(n, h);
    rho.values = vs;
    return rho;
}

static const char kMagic[8] = {'K', 'S', 'G', 'R', 'D', '2', 'D', '\0'};

void write_density2d_binary(const std::string& path, const Density2D& rho) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("density2d: cannot write " + path);
    out.write(kMagic, sizeof kMagic);
    std::uint64_t n = rho.n;
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(&rho.h), sizeof rho.h);
    out.write(reinterpret_cast<const char*>(rho.values.data()),
              static_cast<std::streamsize>(rho.values.size() * sizeof(double)));
}

Density2D read_density2d_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("density2d: cannot open " + path);
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw std::runtime_error("density2d: bad magic in " + path);
    std::uint64_t n = 0;
    double h = 0.0;
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    in.read(reinterpret_cast<char*>(&h), sizeof h);
    Density2D rho(static_cast<std::size_t>(n), h);
    in.read(reinterpret_cast<char*>(rho.values.data()),
            static_cast<std::streamsize>(rho.values.size() * sizeof(double)));
    if (!in)
        throw std::runtime_error("density2d: truncated file " + path);
    return rho;
}

}  // namespace kslog
