#ifndef KSLOG_CSV_HPP
#define KSLOG_CSV_HPP

#include <string>
#include <vector>

#include "kslog/radial.hpp"

namespace kslog {

/// Columns of a CSV file with a header line. Throws std::runtime_error on
/// malformed input (missing header, ragged rows, non-numeric fields).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns[0].size(); }
    const std::vector<double>& column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& columns);

/// Rebuilds a RadialGrid from an r column, validating r_0 = 0 and uniform
/// spacing.
RadialGrid grid_from_r_column(const std::vector<double>& r);

/// `r,value` profile files.
void write_radial_profile(const std::string& path, const RadialGrid& grid,
                          const std::vector<double>& values);
std::pair<RadialGrid, std::vector<double>> read_radial_profile(const std::string& path);

}  // namespace kslog

#endif
