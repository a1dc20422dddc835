#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ngdim/data.hpp"

namespace ngdim::cli {

// Reads one observation per row. A first row without any numeric cell is a
// header. Throws IoError when the file cannot be read and InvalidData for
// empty input, ragged rows, missing or non-numeric cells (1-based row/column
// in the message) and n <= p.
DataMatrix ingest_csv(const std::string& path);
DataMatrix parse_csv(std::istream& in, const std::string& source = "<input>");

// Writes the columns of `values` as rows, with full round-trip precision.
void write_csv(const std::string& path, const Eigen::MatrixXd& values,
               const std::vector<std::string>& header);

}  // namespace ngdim::cli
