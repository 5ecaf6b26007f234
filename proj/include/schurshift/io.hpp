#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

namespace schurshift {

/// Row-major CSV, one matrix row per line, full double precision.
/// Lines starting with '#' are comments and are skipped by the reader.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m, const std::string& comment = "");
void write_matrix_csv_file(const std::string& path, const Eigen::MatrixXd& m,
                           const std::string& comment = "");
Eigen::MatrixXd read_matrix_csv(std::istream& in);
Eigen::MatrixXd read_matrix_csv_file(const std::string& path);

/// Round-trip decimal form of a double (printf %.17g).
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace schurshift
