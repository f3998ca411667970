#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "srpcp/linalg.hpp"

/// Dense matrix files.
///
///   RawF64  16-byte header: "SRPM", u32 rows, u32 cols, u32 reserved (0),
///           all little-endian; then rows*cols little-endian doubles in
///           row-major order. Lossless.
///   CSV     first line "rows,cols", then one comma-separated line per row,
///           values printed with 17 significant digits.
namespace srpcp::data {

enum class MatrixFormat { Csv, RawF64 };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed token; row and column are 1-based data coordinates (0 for the
/// header line).
class ParseError : public IoError {
 public:
  ParseError(const std::string& what, Index row, Index col)
      : IoError(what), row_(row), col_(col) {}
  Index row() const { return row_; }
  Index col() const { return col_; }

 private:
  Index row_;
  Index col_;
};

/// Structurally wrong file: empty, bad header, wrong dimensions, truncated.
class FormatError : public IoError {
 public:
  using IoError::IoError;
};

/// .csv selects Csv; everything else RawF64.
MatrixFormat format_for_path(const std::filesystem::path& path);

void save_matrix(const std::filesystem::path& path, const DenseMatrix& m,
                 MatrixFormat format);
DenseMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format);

void save_matrix(const std::filesystem::path& path, const DenseMatrix& m);
DenseMatrix load_matrix(const std::filesystem::path& path);

/// CSV helpers shared with the table loaders.
std::string format_double(double value);
double parse_double(std::string_view token, Index row, Index col);

}  // namespace srpcp::data
