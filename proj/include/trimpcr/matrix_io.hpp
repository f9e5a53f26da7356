#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "trimpcr/matrix_core.hpp"

namespace trimpcr {

// Matrix files: a `# rows=<r> cols=<c>` header, then r lines of c
// comma-separated decimals. Vectors are single-column matrices. Values are
// written in shortest round-trip form, so write -> read is bit-exact.

std::string format_double(double value);
/// Throws InputError on anything but a complete finite decimal literal.
double parse_double(std::string_view text);

void write_matrix(std::ostream& out, const DenseMatrix& M);
DenseMatrix read_matrix(std::istream& in, const std::string& source = "<stream>");

void write_matrix_file(const std::filesystem::path& path, const DenseMatrix& M);
DenseMatrix read_matrix_file(const std::filesystem::path& path);

void write_vector_file(const std::filesystem::path& path, const Vector& v);
/// Reads a single-column matrix file; DimensionError if it has more columns.
Vector read_vector_file(const std::filesystem::path& path);

/// Header plus string cells; used for experiment reports.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;
};

void write_table(std::ostream& out, const Table& table);
Table read_table(std::istream& in, const std::string& source = "<stream>");
void write_table_file(const std::filesystem::path& path, const Table& table);
Table read_table_file(const std::filesystem::path& path);

}  // namespace trimpcr
