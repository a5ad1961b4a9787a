#include "wt/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wt {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Matrix& m) {
  if (header.size() != m.cols)
    throw std::invalid_argument("write_csv: header/column mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) out << ',';
    out << header[c];
  }
  out << "\r\n";
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      if (c) out << ',';
      out << format_g17(m(r, c));
    }
    out << "\r\n";
  }
}

Matrix read_csv(const std::string& path, std::size_t expect_cols) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> row;
    bool numeric = true;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size() &&
            cell.find_first_not_of(" \t", used) != std::string::npos)
          numeric = false;
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw std::runtime_error("read_csv: non-numeric row in " + path);
    }
    first = false;
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("read_csv: no data in " + path);
  const std::size_t cols = rows.front().size();
  if (expect_cols != 0 && cols != expect_cols)
    throw std::runtime_error("read_csv: unexpected column count in " + path);
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols)
      throw std::runtime_error("read_csv: ragged rows in " + path);
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

}  // namespace wt
