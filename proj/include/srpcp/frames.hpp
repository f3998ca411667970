#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "srpcp/linalg.hpp"

/// Grayscale frame stacks for background/foreground separation.
namespace srpcp::data {

/// 8-bit image, row-major pixels.
struct GrayImage {
  Index height = 0;
  Index width = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(Index row, Index col) const { return pixels[row * width + col]; }
  std::uint8_t& at(Index row, Index col) { return pixels[row * width + col]; }
};

struct FrameStack {
  Index height = 0;
  Index width = 0;
  std::vector<GrayImage> frames;
  std::vector<std::string> names;  // file names, in stacking order
};

/// Binary P5, maxval 255. Throws ParseError on anything else.
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

/// Every *.pgm file in `dir`, sorted by file name. Throws FormatError on an
/// empty directory or mixed dimensions.
FrameStack load_frame_stack(const std::filesystem::path& dir);

/// One column per frame, pixels in column-major order (row index fastest),
/// scaled to [0, 1].
DenseMatrix stack_to_matrix(const FrameStack& stack);

/// Column `index` reshaped to a height x width image of doubles.
DenseMatrix unstack_column(const DenseMatrix& m, Index index, Index height,
                           Index width);

/// Linear map of the [1%, 99%] percentile range onto [0, 1], clipped.
/// Images whose percentiles coincide are returned unchanged.
DenseMatrix contrast_stretch(const DenseMatrix& image);

/// Percentile by linear interpolation between order statistics, q in [0, 1].
double percentile(std::vector<double> values, double q);

/// Clip to [0, 1] and round to 0..255.
GrayImage quantize(const DenseMatrix& image);

}  // namespace srpcp::data
