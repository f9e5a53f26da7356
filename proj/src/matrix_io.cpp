#include "trimpcr/matrix_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>

#include "trimpcr/errors.hpp"

namespace trimpcr {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file: " + path.string());
  return in;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output file: " + path.string());
  return out;
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw InputError("not a decimal number: '" + std::string(text) + "'");
  }
  if (!std::isfinite(value)) throw InputError("non-finite value: '" + std::string(text) + "'");
  return value;
}

void write_matrix(std::ostream& out, const DenseMatrix& M) {
  out << "# rows=" << M.rows() << " cols=" << M.cols() << '\n';
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(M(i, j));
    }
    out << '\n';
  }
}

DenseMatrix read_matrix(std::istream& in, const std::string& source) {
  static const std::regex header_re(R"(^#\s*rows=(\d+)\s+cols=(\d+)\s*$)");
  std::string line;
  if (!std::getline(in, line)) throw InputError(source + ": empty matrix file");
  std::smatch match;
  const std::string header(trim(line));
  if (!std::regex_match(header, match, header_re)) {
    throw InputError(source + ": expected '# rows=<r> cols=<c>' header, got '" + header + "'");
  }
  const auto rows = static_cast<Eigen::Index>(std::stoll(match[1].str()));
  const auto cols = static_cast<Eigen::Index>(std::stoll(match[2].str()));

  DenseMatrix M(rows, cols);
  Eigen::Index r = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    if (r == rows) throw InputError(source + ": more than " + std::to_string(rows) + " data rows");
    const auto cells = split_commas(view);
    if (static_cast<Eigen::Index>(cells.size()) != cols) {
      throw InputError(source + ": line " + std::to_string(line_no) + " has " +
                       std::to_string(cells.size()) + " values, expected " + std::to_string(cols));
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      try {
        M(r, j) = parse_double(cells[static_cast<std::size_t>(j)]);
      } catch (const InputError& e) {
        throw InputError(source + ": line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    ++r;
  }
  if (r != rows) {
    throw InputError(source + ": expected " + std::to_string(rows) + " data rows, found " +
                     std::to_string(r));
  }
  return M;
}

void write_matrix_file(const std::filesystem::path& path, const DenseMatrix& M) {
  auto out = open_for_write(path);
  write_matrix(out, M);
}

DenseMatrix read_matrix_file(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return read_matrix(in, path.string());
}

void write_vector_file(const std::filesystem::path& path, const Vector& v) {
  write_matrix_file(path, DenseMatrix(v));
}

Vector read_vector_file(const std::filesystem::path& path) {
  const DenseMatrix M = read_matrix_file(path);
  if (M.cols() != 1) {
    throw DimensionError(path.string() + ": expected a single-column vector, found " +
                         std::to_string(M.cols()) + " columns");
  }
  return M.col(0);
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == name) return j;
  }
  throw InputError("table has no column '" + std::string(name) + "'");
}

double Table::number(std::size_t row, std::string_view name) const {
  return parse_double(rows.at(row).at(column(name)));
}

void write_table(std::ostream& out, const Table& table) {
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (j > 0) out << ',';
      out << cells[j];
    }
    out << '\n';
  };
  emit(table.header);
  for (const auto& row : table.rows) emit(row);
}

Table read_table(std::istream& in, const std::string& source) {
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw InputError(source + ": empty table");
  for (auto cell : split_commas(trim(line))) table.header.emplace_back(cell);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) continue;
    std::vector<std::string> row;
    for (auto cell : split_commas(view)) row.emplace_back(cell);
    if (row.size() != table.header.size()) {
      throw InputError(source + ": line " + std::to_string(line_no) + " has " +
                       std::to_string(row.size()) + " cells, header has " +
                       std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_table_file(const std::filesystem::path& path, const Table& table) {
  auto out = open_for_write(path);
  write_table(out, table);
}

Table read_table_file(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return read_table(in, path.string());
}

}  // namespace trimpcr
