#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "srpcp/frames.hpp"
#include "srpcp/matrix_io.hpp"

namespace srpcp::data {
namespace {

// Reads one whitespace-delimited header integer, skipping '#' comments.
long long header_int(const std::string& bytes, std::size_t& pos,
                     const std::string& file) {
  for (;;) {
    while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  const std::size_t start = pos;
  long long v = 0;
  while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
    v = v * 10 + (bytes[pos] - '0');
    if (v > 1'000'000'000) throw ParseError(file + ": PGM header value too large", 0, 0);
    ++pos;
  }
  if (pos == start) throw ParseError(file + ": malformed PGM header", 0, 0);
  return v;
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  const std::string name = path.string();
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw ParseError(name + ": not a binary (P5) PGM file", 0, 0);
  }
  std::size_t pos = 2;
  const long long width = header_int(bytes, pos, name);
  const long long height = header_int(bytes, pos, name);
  const long long maxval = header_int(bytes, pos, name);
  if (maxval != 255) throw ParseError(name + ": only maxval 255 is supported", 0, 0);
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw ParseError(name + ": malformed PGM header", 0, 0);
  }
  ++pos;
  const auto count = static_cast<std::size_t>(width * height);
  if (bytes.size() - pos < count) throw FormatError(name + ": truncated pixel data");

  GrayImage img;
  img.height = height;
  img.width = width;
  img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                    bytes.begin() + static_cast<std::ptrdiff_t>(pos + count));
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
  if (static_cast<Index>(image.pixels.size()) != image.height * image.width) {
    throw std::invalid_argument("write_pgm: pixel count does not match dimensions");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()),
            static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

FrameStack load_frame_stack(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) throw FormatError("no .pgm frames in " + dir.string());
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    return a.filename().string() < b.filename().string();
  });

  FrameStack stack;
  for (const auto& file : files) {
    GrayImage img = read_pgm(file);
    if (stack.frames.empty()) {
      stack.height = img.height;
      stack.width = img.width;
    } else if (img.height != stack.height || img.width != stack.width) {
      throw FormatError(file.filename().string() + " is " + std::to_string(img.width) +
                        "x" + std::to_string(img.height) + ", expected " +
                        std::to_string(stack.width) + "x" + std::to_string(stack.height));
    }
    stack.names.push_back(file.filename().string());
    stack.frames.push_back(std::move(img));
  }
  return stack;
}

DenseMatrix stack_to_matrix(const FrameStack& stack) {
  const Index h = stack.height;
  const Index w = stack.width;
  DenseMatrix m(h * w, static_cast<Index>(stack.frames.size()));
  for (Index f = 0; f < m.cols(); ++f) {
    const GrayImage& img = stack.frames[f];
    for (Index c = 0; c < w; ++c) {
      for (Index r = 0; r < h; ++r) m(r + c * h, f) = img.at(r, c) / 255.0;
    }
  }
  return m;
}

DenseMatrix unstack_column(const DenseMatrix& m, Index index, Index height,
                           Index width) {
  if (index < 0 || index >= m.cols()) {
    throw std::out_of_range("unstack_column: frame index out of range");
  }
  if (height * width != m.rows()) {
    throw std::invalid_argument("unstack_column: height * width must equal rows");
  }
  return m.col(index).reshaped(height, width);
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile: no values");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

DenseMatrix contrast_stretch(const DenseMatrix& image) {
  if (image.size() == 0) return image;
  std::vector<double> values(image.data(), image.data() + image.size());
  const double lo = percentile(values, 0.01);
  const double hi = percentile(std::move(values), 0.99);
  if (!(hi > lo)) return image;
  return ((image.array() - lo) / (hi - lo)).max(0.0).min(1.0).matrix();
}

GrayImage quantize(const DenseMatrix& image) {
  GrayImage img;
  img.height = image.rows();
  img.width = image.cols();
  img.pixels.resize(static_cast<std::size_t>(image.size()));
  for (Index r = 0; r < img.height; ++r) {
    for (Index c = 0; c < img.width; ++c) {
      const double v = std::clamp(image(r, c), 0.0, 1.0);
      img.at(r, c) = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
  }
  return img;
}

}  // namespace srpcp::data
