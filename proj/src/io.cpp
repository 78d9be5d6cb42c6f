#include "polyflood/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace polyflood {

const std::vector<double>& Table::column(const std::string& name) const {
  for (size_t k = 0; k < header.size(); ++k)
    if (header[k] == name) return columns[k];
  throw std::out_of_range("missing column: " + name);
}

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

void write_csv(const std::string& path, const Table& table) {
  if (table.columns.size() != table.header.size())
    throw std::invalid_argument("csv: header and column count differ");
  for (const auto& c : table.columns)
    if (c.size() != table.rows()) throw std::invalid_argument("csv: ragged columns");
  std::ofstream out = open_out(path);
  for (size_t k = 0; k < table.header.size(); ++k) out << (k ? "," : "") << table.header[k];
  out << '\n';
  for (size_t r = 0; r < table.rows(); ++r) {
    for (size_t k = 0; k < table.columns.size(); ++k)
      out << (k ? "," : "") << fmt17(table.columns[k][r]);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  t.columns.assign(t.header.size(), {});
  size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    size_t k = 0;
    while (std::getline(ss, cell, ',')) {
      if (k >= t.header.size()) throw std::runtime_error(path + ": too many cells on row " + std::to_string(row));
      size_t used = 0;
      double v;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cell.size())
        throw std::runtime_error(path + ": non-numeric cell on row " + std::to_string(row));
      t.columns[k++].push_back(v);
    }
    if (k != t.header.size())
      throw std::runtime_error(path + ": expected " + std::to_string(t.header.size()) +
                               " cells on row " + std::to_string(row));
  }
  return t;
}

void write_vtk(const std::string& path, const VtkGrid& g, const std::string& title,
               const std::vector<std::pair<std::string, std::vector<double>>>& fields) {
  const size_t n = static_cast<size_t>(g.nx) * static_cast<size_t>(g.ny);
  for (const auto& [name, values] : fields)
    if (values.size() != n) throw std::invalid_argument("vtk: field " + name + " has wrong size");
  std::ofstream out = open_out(path);
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << g.nx << ' ' << g.ny << " 1\n";
  out << "ORIGIN " << fmt17(0.5 * g.dx) << ' ' << fmt17(0.5 * g.dy) << " 0\n";
  out << "SPACING " << fmt17(g.dx) << ' ' << fmt17(g.dy) << " 1\n";
  out << "POINT_DATA " << n << '\n';
  for (const auto& [name, values] : fields) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : values) out << fmt17(v) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace polyflood
