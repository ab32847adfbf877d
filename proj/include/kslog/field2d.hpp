#ifndef KSLOG_FIELD2D_HPP
#define KSLOG_FIELD2D_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace kslog {

/// Square Cartesian density, n x n cells of size h centered at the origin.
/// Cell (ix, iy) is centered at ((ix - (n-1)/2) h, (iy - (n-1)/2) h),
/// row-major storage.
struct Density2D {
    std::size_t n = 0;
    double h = 0.0;
    std::vector<double> values;

    Density2D() = default;
    Density2D(std::size_t n_cells, double cell);

    double& at(std::size_t ix, std::size_t iy) { return values[ix * n + iy]; }
    double at(std::size_t ix, std::size_t iy) const { return values[ix * n + iy]; }
    double x(std::size_t ix) const { return (static_cast<double>(ix) - 0.5 * static_cast<double>(n - 1)) * h; }

    double mass() const;
    std::pair<double, double> center_of_mass() const;
};

/// Exact integral of log|x - y| over one square cell of side h, evaluated
/// at the cell center: h^2 (log h - (log 2)/2 + pi/4 - 3/2).
double log_self_cell_integral(double h);

/// Potential u = K * rho by direct summation over cells, the self cell
/// replaced by the exact log integral above. Returns u at every cell.
std::vector<double> potential_2d(const Density2D& rho);

/// Potential at an arbitrary point (no self-cell handling; keep the point
/// off the cell centers or outside the support).
double potential_at(const Density2D& rho, double px, double py);

/// Double integral of log|x-y| rho rho over the grid (self-cells included
/// exactly); equals -2 pi int u rho.
double log_double_integral_2d(const Density2D& rho);

struct FarFieldEstimate {
    double C1 = 0.0;  ///< sup |u - M K| |x|^2 / r_o^2 on the sample ring
    double C2 = 0.0;  ///< sup |grad(u - M K)| |x|^3 / r_o^2
};

/// Multipole-remainder constants of the far-field expansion for a source
/// supported in B_{r_o} around its center of mass; samples |x| in
/// [2 r_o, 4 r_o]. The grid is translated to zero center of mass
/// internally. Throws when the density is not supported in B_{r_o}.
FarFieldEstimate far_field_check(const Density2D& rho, double r_o,
                                 std::size_t n_radii = 9, std::size_t n_angles = 32);

/// `x,y,value` CSV and dense binary (magic, n, h, row-major doubles).
void write_density2d_csv(const std::string& path, const Density2D& rho);
Density2D read_density2d_csv(const std::string& path);
void write_density2d_binary(const std::string& path, const Density2D& rho);
Density2D read_density2d_binary(const std::string& path);

}  // namespace kslog

#endif
