#pragma once

// Fractional sample access on ERP rasters. Positions are in raster index
// space: integer (x, y) addresses stored sample (x, y). Columns wrap modulo
// the width, rows clamp to [0, height - 1].

#include "mpa/frame.hpp"
#include "mpa/geometry.hpp"

#include <cstdint>

namespace mpa {

enum class Interpolator {
  Bilinear,  // 2x2 taps
  Cubic,     // separable 4-tap Keys kernel, a = -0.5
};

/// Interpolated value before rounding.
double interpolate_exact(const FramePlane& ref, const Vector2<double>& pos, Interpolator kind);

/// Interpolated sample: exact value rounded half up, clamped to the bit-depth
/// range. Integer positions return the stored sample.
std::uint16_t interpolate(const FramePlane& ref, const Vector2<double>& pos, Interpolator kind = Interpolator::Bilinear);

/// Taps for one fixed displacement. Every sample displaced by the same shift
/// has the same fractional phase, so the weights are computed once.
class ShiftedSampler {
 public:
  ShiftedSampler(const Vector2<double>& shift, Interpolator kind);

  /// Equivalent to interpolate(ref, (x, y) + shift, kind).
  std::uint16_t operator()(const FramePlane& ref, int x, int y) const;

  /// Fills the n x n patch of `out` at (ox, oy) with the samples for raster
  /// positions (x0 + i, y0 + j). n <= kMaxPatch.
  void fill(const FramePlane& ref, int x0, int y0, int n, SampleRaster& out, int ox, int oy) const;

  static constexpr int kMaxPatch = 8;

 private:
  int ix_ = 0;
  int iy_ = 0;
  int taps_ = 2;
  double wx_[4] = {};
  double wy_[4] = {};
};

}  // namespace mpa
