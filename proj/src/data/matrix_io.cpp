#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "srpcp/matrix_io.hpp"

namespace srpcp::data {
namespace {

constexpr char kMagic[4] = {'S', 'R', 'P', 'M'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

std::uint64_t get_le(const std::string& in, std::size_t pos, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  }
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> lines_of(const std::string& text) {
  std::vector<std::string_view> out;
  std::string_view rest(text);
  while (!rest.empty()) {
    const std::size_t pos = rest.find('\n');
    out.push_back(rest.substr(0, pos));
    if (pos == std::string_view::npos) break;
    rest.remove_prefix(pos + 1);
  }
  while (!out.empty() && trim(out.back()).empty()) out.pop_back();
  return out;
}

Index parse_dim(std::string_view token, const char* name) {
  long long v = -1;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || v < 0) {
    throw FormatError(std::string("bad ") + name + " in CSV header: '" +
                      std::string(token) + "'");
  }
  return static_cast<Index>(v);
}

std::string save_csv(const DenseMatrix& m) {
  std::string out = std::to_string(m.rows()) + "," + std::to_string(m.cols()) + "\n";
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out.push_back(',');
      out += format_double(m(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

DenseMatrix load_csv(const std::string& text) {
  const std::vector<std::string_view> lines = lines_of(text);
  if (lines.empty()) throw FormatError("empty CSV matrix file");
  const std::vector<std::string_view> header = split(lines[0], ',');
  if (header.size() != 2) throw FormatError("CSV header must be 'rows,cols'");
  const Index rows = parse_dim(header[0], "rows");
  const Index cols = parse_dim(header[1], "cols");
  if (static_cast<Index>(lines.size()) - 1 != rows) {
    throw FormatError("CSV header declares " + std::to_string(rows) +
                      " rows but the file has " + std::to_string(lines.size() - 1));
  }
  DenseMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const std::vector<std::string_view> fields = split(lines[i + 1], ',');
    if (static_cast<Index>(fields.size()) != cols) {
      throw FormatError("CSV row " + std::to_string(i + 1) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(cols));
    }
    for (Index j = 0; j < cols; ++j) m(i, j) = parse_double(fields[j], i + 1, j + 1);
  }
  return m;
}

std::string save_raw(const DenseMatrix& m) {
  if (m.rows() > 0xffffffffLL || m.cols() > 0xffffffffLL) {
    throw FormatError("matrix too large for the RawF64 header");
  }
  std::string out(kMagic, 4);
  out.reserve(16 + 8 * static_cast<std::size_t>(m.size()));
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.cols()));
  put_u32(out, 0);  // reserved, pads the header to 16 bytes
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) put_f64(out, m(i, j));
  }
  return out;
}

DenseMatrix load_raw(const std::string& bytes) {
  if (bytes.empty()) throw FormatError("empty RawF64 file");
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError("missing SRPM header");
  }
  const auto rows = static_cast<Index>(get_le(bytes, 4, 4));
  const auto cols = static_cast<Index>(get_le(bytes, 8, 4));
  const auto need = 16 + 8 * static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  if (bytes.size() != need) {
    throw FormatError("RawF64 header declares " + std::to_string(rows) + "x" +
                      std::to_string(cols) + " but the payload has " +
                      std::to_string(bytes.size() - 16) + " bytes");
  }
  DenseMatrix m(rows, cols);
  std::size_t pos = 16;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j, pos += 8) {
      m(i, j) = std::bit_cast<double>(get_le(bytes, pos, 8));
    }
  }
  return m;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(len));
}

double parse_double(std::string_view token, Index row, Index col) {
  token = trim(token);
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (token.empty() || ec != std::errc() || ptr != last) {
    throw ParseError("cannot parse '" + std::string(token) + "' as a number at row " +
                         std::to_string(row) + ", column " + std::to_string(col),
                     row, col);
  }
  return v;
}

MatrixFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? MatrixFormat::Csv : MatrixFormat::RawF64;
}

void save_matrix(const std::filesystem::path& path, const DenseMatrix& m,
                 MatrixFormat format) {
  write_file(path, format == MatrixFormat::Csv ? save_csv(m) : save_raw(m));
}

DenseMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format) {
  const std::string bytes = read_file(path);
  return format == MatrixFormat::Csv ? load_csv(bytes) : load_raw(bytes);
}

void save_matrix(const std::filesystem::path& path, const DenseMatrix& m) {
  save_matrix(path, m, format_for_path(path));
}

DenseMatrix load_matrix(const std::filesystem::path& path) {
  return load_matrix(path, format_for_path(path));
}

}  // namespace srpcp::data
