#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mpa {

/// Row-major sample raster; coefficient (y, x) is row y, column x.
using SampleRaster = Eigen::Array<std::uint16_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Single-channel (luma) picture.
struct FramePlane {
  int bit_depth = 8;
  SampleRaster samples;

  FramePlane() = default;
  FramePlane(int width, int height, int bit_depth, std::uint16_t fill = 0)
      : bit_depth(bit_depth), samples(SampleRaster::Constant(height, width, fill)) {
    if (bit_depth != 8 && bit_depth != 10) throw std::invalid_argument("frame: bit depth must be 8 or 10");
  }

  int width() const { return static_cast<int>(samples.cols()); }
  int height() const { return static_cast<int>(samples.rows()); }
  int max_value() const { return (1 << bit_depth) - 1; }

  std::uint16_t operator()(int x, int y) const { return samples(y, x); }
  std::uint16_t& operator()(int x, int y) { return samples(y, x); }

  bool same_format(const FramePlane& o) const {
    return width() == o.width() && height() == o.height() && bit_depth == o.bit_depth;
  }

  friend bool operator==(const FramePlane& a, const FramePlane& b) {
    return a.same_format(b) && (a.samples == b.samples).all();
  }

  /// Checks the sample range invariant.
  void validate() const {
    if (bit_depth != 8 && bit_depth != 10) throw std::invalid_argument("frame: bit depth must be 8 or 10");
    if (samples.size() > 0 && samples.maxCoeff() > max_value())
      throw std::invalid_argument("frame: sample exceeds " + std::to_string(bit_depth) + "-bit range");
  }
};

}  // namespace mpa
