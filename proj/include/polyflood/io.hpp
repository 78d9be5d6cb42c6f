#ifndef POLYFLOOD_IO_HPP_
#define POLYFLOOD_IO_HPP_

#include <string>
#include <utility>
#include <vector>

namespace polyflood {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;  // columns[k][row]
  size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  const std::vector<double>& column(const std::string& name) const;
};

// Comma-separated, one header line, numbers at 17 significant digits.
void write_csv(const std::string& path, const Table& table);
// Throws std::runtime_error on a missing file, ragged rows or non-numeric cells.
Table read_csv(const std::string& path);

struct VtkGrid {
  int nx;
  int ny;
  double dx;
  double dy;
};

// Legacy ASCII STRUCTURED_POINTS with one SCALARS block per field, points at
// cell centers, x fastest.
void write_vtk(const std::string& path, const VtkGrid& grid, const std::string& title,
               const std::vector<std::pair<std::string, std::vector<double>>>& fields);

}  // namespace polyflood

#endif  // POLYFLOOD_IO_HPP_
