#include "transclime/csv.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace transclime {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool is_missing_token(const std::string& t) {
  if (t.empty()) return true;
  std::string low;
  for (char c : t) low.push_back(static_cast<char>(std::tolower(c)));
  return low == "na" || low == "nan";
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("read_csv: cannot open " + path);
  }
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("read_csv: empty file " + path);
  }
  for (const auto& h : split_line(line)) table.header.push_back(trim(h));
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != table.header.size()) {
      throw std::runtime_error("read_csv: " + path + " line " +
                               std::to_string(lineno) + " has " +
                               std::to_string(cells.size()) + " cells, header has " +
                               std::to_string(table.header.size()));
    }
    std::vector<std::optional<double>> row;
    row.reserve(cells.size());
    for (const auto& cell : cells) {
      const std::string t = trim(cell);
      if (is_missing_token(t)) {
        row.push_back(std::nullopt);
        continue;
      }
      std::size_t pos = 0;
      double v = 0.0;
      try {
        v = std::stod(t, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != t.size() || !std::isfinite(v)) {
        throw std::runtime_error("read_csv: " + path + " line " +
                                 std::to_string(lineno) +
                                 ": non-numeric cell '" + t + "'");
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> default_header(long p) {
  std::vector<std::string> h;
  h.reserve(static_cast<std::size_t>(p));
  for (long j = 1; j <= p; ++j) h.push_back("x" + std::to_string(j));
  return h;
}

void write_matrix_csv(const std::string& path, const Matrix& m,
                      const std::vector<std::string>& header) {
  if (static_cast<long>(header.size()) != m.cols()) {
    throw std::invalid_argument("write_matrix_csv: header size mismatch");
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_matrix_csv: cannot open " + path);
  }
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j) out << ',';
    out << header[j];
  }
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  write_matrix_csv(path, m, default_header(m.cols()));
}

Matrix read_matrix_csv(const std::string& path,
                       std::vector<std::string>* header) {
  const CsvTable t = read_csv(path);
  Matrix m(t.n_rows(), t.n_cols());
  for (long i = 0; i < t.n_rows(); ++i) {
    for (long j = 0; j < t.n_cols(); ++j) {
      const auto& cell = t.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (!cell) {
        throw std::runtime_error("read_matrix_csv: missing cell in " + path);
      }
      m(i, j) = *cell;
    }
  }
  if (header) *header = t.header;
  return m;
}

}  // namespace transclime
