#ifndef TRANSCLIME_CSV_HPP_
#define TRANSCLIME_CSV_HPP_

#include <optional>
#include <string>
#include <vector>

#include "transclime/matrix.hpp"

namespace transclime {

// Numeric CSV with a header row of column names. Cells are written with
// "%.17g" so values round-trip exactly and output bytes are stable.
struct CsvTable {
  std::vector<std::string> header;
  // row-major cells; std::nullopt marks a missing (blank or NA) cell
  std::vector<std::vector<std::optional<double>>> rows;

  long n_rows() const { return static_cast<long>(rows.size()); }
  long n_cols() const { return static_cast<long>(header.size()); }
};

CsvTable read_csv(const std::string& path);

std::string format_double(double v);

void write_matrix_csv(const std::string& path, const Matrix& m,
                      const std::vector<std::string>& header);
// Column names default to x1..xp.
void write_matrix_csv(const std::string& path, const Matrix& m);

// Reads a fully numeric CSV into a matrix; throws on any missing cell.
Matrix read_matrix_csv(const std::string& path,
                       std::vector<std::string>* header = nullptr);

std::vector<std::string> default_header(long p);

}  // namespace transclime

#endif  // TRANSCLIME_CSV_HPP_
