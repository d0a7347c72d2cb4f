#include "fhnvs/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fhnvs/error.hpp"

namespace fhnvs {

namespace {

std::string expected_header(int dim) {
  std::string h;
  for (int k = 1; k <= dim; ++k) h += "x" + std::to_string(k) + ",";
  return h + "value";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && (s[b] == ' ' || s[b] == '\t')) ++b;
  return s.substr(b);
}

double parse_number(const std::string& token, const std::filesystem::path& path, std::size_t line) {
  const std::string t = trim(token);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) {
    throw FormatError(path.string() + ":" + std::to_string(line) + ": not a number: '" + t + "'");
  }
  if (!std::isfinite(v)) {
    throw FormatError(path.string() + ":" + std::to_string(line) + ": non-finite entry");
  }
  return v;
}

}  // namespace

void save_csv(const Field& field, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  const Grid& g = field.grid();
  out << expected_header(g.dim()) << '\n';
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point x = g.coord(i);
    for (int k = 0; k < g.dim(); ++k) out << format_double(x[k]) << ',';
    out << format_double(field[i]) << '\n';
  }
  if (!out) throw Error("write failed for " + path.string());
}

Field load_csv(const Grid& grid, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty file");
  if (trim(line) != expected_header(grid.dim())) {
    throw FormatError(path.string() + ": expected header '" + expected_header(grid.dim()) + "', got '" +
                      trim(line) + "'");
  }
  std::vector<double> values;
  values.reserve(grid.size());
  const double coord_tol = 1e-9 * grid.half_width();
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> tokens;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) tokens.push_back(tok);
    if (tokens.size() != static_cast<std::size_t>(grid.dim() + 1)) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(grid.dim() + 1) + " columns");
    }
    if (values.size() >= grid.size()) {
      throw FormatError(path.string() + ": more rows than the grid's " + std::to_string(grid.size()) + " nodes");
    }
    const Point x = grid.coord(values.size());
    for (int k = 0; k < grid.dim(); ++k) {
      const double xk = parse_number(tokens[k], path, lineno);
      if (std::abs(xk - x[k]) > coord_tol) {
        throw FormatError(path.string() + ":" + std::to_string(lineno) + ": node coordinate does not match grid");
      }
    }
    values.push_back(parse_number(tokens.back(), path, lineno));
  }
  if (values.size() != grid.size()) {
    throw FormatError(path.string() + ": " + std::to_string(values.size()) + " rows, grid has " +
                      std::to_string(grid.size()) + " nodes");
  }
  return Field(grid, std::move(values));
}

void save_vtk(const Field& field, const std::filesystem::path& path, std::string_view name) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  const Grid& g = field.grid();
  const int n = g.n();
  const double h = g.spacing();
  const double o = g.coord_axis(1);
  const int nx = n;
  const int ny = g.dim() > 1 ? n : 1;
  const int nz = g.dim() > 2 ? n : 1;
  out << "# vtk DataFile Version 3.0\nfhnvs field\nASCII\nDATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << nx << ' ' << ny << ' ' << nz << '\n';
  out << "ORIGIN " << o << ' ' << (g.dim() > 1 ? o : 0.0) << ' ' << (g.dim() > 2 ? o : 0.0) << '\n';
  out << "SPACING " << h << ' ' << h << ' ' << h << '\n';
  out << "POINT_DATA " << g.size() << '\n';
  out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  // VTK wants x1 fastest; flat storage has the last axis fastest.
  for (int k = 1; k <= nz; ++k) {
    for (int j = 1; j <= ny; ++j) {
      for (int i = 1; i <= nx; ++i) {
        std::array<int, 3> idx{i, j, k};
        out << format_double(field[g.flat(idx)]) << '\n';
      }
    }
  }
}

}  // namespace fhnvs
