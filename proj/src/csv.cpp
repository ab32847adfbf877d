#include "kslog/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kslog {

const std::vector<double>& CsvTable::column(const std::string& name) const {
    for (std::size_t c = 0; c < header.size(); ++c)
        if (header[c] == name)
            return columns[c];
    throw std::runtime_error("csv: missing column '" + name + "'");
}

static std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.empty())
        throw std::runtime_error("csv: empty file " + path);
    CsvTable table;
    table.header = split_row(line);
    table.columns.resize(table.header.size());
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        auto cells = split_row(line);
        if (cells.size() != table.header.size())
            throw std::runtime_error("csv: ragged row at line " + std::to_string(lineno) + " in " + path);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            try {
                std::size_t used = 0;
                double v = std::stod(cells[c], &used);
                if (used != cells[c].size())
                    throw std::invalid_argument("trailing");
                table.columns[c].push_back(v);
            } catch (const std::exception&) {
                throw std::runtime_error("csv: bad number '" + cells[c] + "' at line " +
                                         std::to_string(lineno) + " in " + path);
            }
        }
    }
    if (table.rows() == 0)
        throw std::runtime_error("csv: no data rows in " + path);
    return table;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<const std::vector<double>*>& columns) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("csv: cannot write " + path);
    for (std::size_t c = 0; c < header.size(); ++c)
        out << header[c] << (c + 1 < header.size() ? "," : "\n");
    std::size_t rows = columns.empty() ? 0 : columns[0]->size();
    char buf[64];
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", (*columns[c])[r]);
            out << buf << (c + 1 < columns.size() ? "," : "\n");
        }
    }
}

RadialGrid grid_from_r_column(const std::vector<double>& r) {
    if (r.size() < 16)
        throw std::runtime_error("csv: radial grid needs at least 16 nodes");
    if (r[0] != 0.0)
        throw std::runtime_error("csv: radial grid must start at r = 0");
    double dr = r[1] - r[0];
    if (!(dr > 0.0))
        throw std::runtime_error("csv: radial grid spacing must be positive");
    for (std::size_t i = 0; i + 1 < r.size(); ++i)
        if (std::abs(r[i + 1] - r[i] - dr) > 1e-9 * dr)
            throw std::runtime_error("csv: radial grid is not uniform");
    return RadialGrid(r.size(), dr);
}

void write_radial_profile(const std::string& path, const RadialGrid& grid,
                          const std::vector<double>& values) {
    std::vector<double> r(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i)
        r[i] = grid.r(i);
    write_csv(path, {"r", "value"}, {&r, &values});
}

std::pair<RadialGrid, std::vector<double>> read_radial_profile(const std::string& path) {
    CsvTable t = read_csv(path);
    RadialGrid grid = grid_from_r_column(t.column("r"));
    return {grid, t.column("value")};
}

}  // namespace kslog
