#include "csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ngdim/error.hpp"

namespace ngdim::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_number(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* first = cell.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size() && std::isfinite(out);
}

}  // namespace

DataMatrix parse_csv(std::istream& in, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    std::vector<double> values(cells.size());
    std::size_t bad = cells.size();
    std::size_t numeric = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (parse_number(cells[c], values[c])) ++numeric;
      else if (bad == cells.size()) bad = c;
    }
    if (first) {
      first = false;
      width = cells.size();
      if (numeric == 0) continue;  // header
    }
    if (cells.size() != width)
      throw InvalidData(source + ": row " + std::to_string(line_no) + " has " +
                        std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(width));
    if (bad != cells.size())
      throw InvalidData(source + ": non-numeric or missing value '" + cells[bad] + "' at row " +
                        std::to_string(line_no) + ", column " + std::to_string(bad + 1));
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw InvalidData(source + ": no data rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(width);
  if (n <= p)
    throw InvalidData(source + ": need more observations than variables (n = " +
                      std::to_string(n) + ", p = " + std::to_string(p) + ")");
  Eigen::MatrixXd x(p, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) x(j, i) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return DataMatrix(std::move(x));
}

DataMatrix ingest_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return parse_csv(in, path);
}

void write_csv(const std::string& path, const Eigen::MatrixXd& values,
               const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  if (!header.empty()) out << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < values.cols(); ++i) {
    for (Eigen::Index j = 0; j < values.rows(); ++j) {
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, values(j, i));
      if (j) out << ',';
      out.write(buf, ptr - buf);
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace ngdim::cli
