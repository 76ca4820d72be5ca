#include "penlevel/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "penlevel/errors.hpp"

namespace penlevel {

namespace {

bool parse_row(const std::string& line, std::vector<double>& out) {
    out.clear();
    size_t pos = 0;
    while (pos <= line.size()) {
        size_t comma = line.find(',', pos);
        if (comma == std::string::npos) comma = line.size();
        std::string cell = line.substr(pos, comma - pos);
        // Trim surrounding whitespace; strtod tolerates leading only.
        size_t b = cell.find_first_not_of(" \t\r");
        size_t e = cell.find_last_not_of(" \t\r");
        if (b == std::string::npos) return false;
        cell = cell.substr(b, e - b + 1);
        char* end = nullptr;
        double v = std::strtod(cell.c_str(), &end);
        if (end == cell.c_str() || *end != '\0') return false;
        out.push_back(v);
        pos = comma + 1;
        if (comma == line.size()) break;
    }
    return !out.empty();
}

std::vector<std::vector<double>> read_rows(const std::string& path, int has_header) {
    std::ifstream in(path);
    if (!in) throw CsvParseError(0, "cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    size_t lineno = 0;
    std::vector<double> row;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (!parse_row(line, row)) {
            if (rows.empty() && (has_header == 1 || has_header == -1)) {
                has_header = 0;  // consumed the one permitted header row
                continue;
            }
            throw CsvParseError(lineno, "non-numeric cell");
        }
        if (rows.empty() && has_header == 1) {
            has_header = 0;  // numeric-looking header, skip as instructed
            continue;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw CsvParseError(lineno, "ragged row");
        rows.push_back(row);
    }
    if (rows.empty()) throw CsvParseError(lineno, "no data rows in " + path);
    return rows;
}

}  // namespace

RowMatrixXd read_csv_matrix(const std::string& path, int has_header) {
    auto rows = read_rows(path, has_header);
    RowMatrixXd m(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return m;
}

Eigen::VectorXd read_csv_vector(const std::string& path, int has_header) {
    auto rows = read_rows(path, has_header);
    if (rows.front().size() != 1)
        throw CsvParseError(1, "expected a single column in " + path);
    Eigen::VectorXd v(static_cast<Eigen::Index>(rows.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rows[static_cast<size_t>(i)][0];
    return v;
}

namespace {

void write_rows(const std::string& path, const double* data, Eigen::Index rows, Eigen::Index cols) {
    std::ofstream out(path);
    if (!out) throw CsvParseError(0, "cannot open " + path + " for writing");
    char buf[40];
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", data[i * cols + j]);
            out << buf << (j + 1 < cols ? "," : "\n");
        }
    }
}

}  // namespace

void write_csv_matrix(const std::string& path, const RowMatrixXd& m) {
    write_rows(path, m.data(), m.rows(), m.cols());
}

void write_csv_vector(const std::string& path, const Eigen::VectorXd& v) {
    write_rows(path, v.data(), v.size(), 1);
}

}  // namespace penlevel
