#pragma once

#include <string>

#include <Eigen/Dense>

#include "penlevel/dataset.hpp"

namespace penlevel {

// Numeric CSV readers. Rows must be rectangular; a leading non-numeric row is
// skipped automatically when has_header is unset (-1), or per the flag (0/1).
// Parse failures throw CsvParseError with the 1-based row number.
RowMatrixXd read_csv_matrix(const std::string& path, int has_header = -1);
Eigen::VectorXd read_csv_vector(const std::string& path, int has_header = -1);

void write_csv_matrix(const std::string& path, const RowMatrixXd& m);
void write_csv_vector(const std::string& path, const Eigen::VectorXd& v);

}  // namespace penlevel
