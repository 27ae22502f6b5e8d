#include "mpa/interpolation.hpp"

#include <algorithm>
#include <cmath>

namespace mpa {
namespace {

int wrap_column(int x, int width) {
  x %= width;
  return x < 0 ? x + width : x;
}

int clamp_row(int y, int height) { return std::clamp(y, 0, height - 1); }

double keys_weight(double d) {
  constexpr double a = -0.5;
  d = std::abs(d);
  if (d < 1.0) return ((a + 2.0) * d - (a + 3.0)) * d * d + 1.0;
  if (d < 2.0) return ((a * d - 5.0 * a) * d + 8.0 * a) * d - 4.0 * a;
  return 0.0;
}

double bilinear(const FramePlane& ref, double x, double y) {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const double ax = x - fx;
  const double ay = y - fy;
  const int x0 = wrap_column(static_cast<int>(fx), ref.width());
  const int x1 = wrap_column(static_cast<int>(fx) + 1, ref.width());
  const int y0 = clamp_row(static_cast<int>(fy), ref.height());
  const int y1 = clamp_row(static_cast<int>(fy) + 1, ref.height());

  const double top = (1.0 - ax) * ref(x0, y0) + ax * ref(x1, y0);
  if (ay == 0.0) return top;
  const double bottom = (1.0 - ax) * ref(x0, y1) + ax * ref(x1, y1);
  return (1.0 - ay) * top + ay * bottom;
}

double cubic(const FramePlane& ref, double x, double y) {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const double ax = x - fx;
  const double ay = y - fy;
  const int ix = static_cast<int>(fx);
  const int iy = static_cast<int>(fy);

  double wx[4];
  double wy[4];
  int cols[4];
  int rows[4];
  for (int k = 0; k < 4; ++k) {
    wx[k] = keys_weight(ax - (k - 1));
    wy[k] = keys_weight(ay - (k - 1));
    cols[k] = wrap_column(ix + k - 1, ref.width());
    rows[k] = clamp_row(iy + k - 1, ref.height());
  }

  double acc = 0.0;
  for (int j = 0; j < 4; ++j) {
    if (wy[j] == 0.0) continue;
    double row = 0.0;
    for (int i = 0; i < 4; ++i) row += wx[i] * ref(cols[i], rows[j]);
    acc += wy[j] * row;
  }
  return acc;
}

// Round half up, then clamp. Clamping first is equivalent and lets the
// truncating conversion stand in for floor on the non-negative range.
std::uint16_t round_to_sample(double v, int max_value) {
  return static_cast<std::uint16_t>(std::clamp(v, 0.0, static_cast<double>(max_value)) + 0.5);
}

}  // namespace

double interpolate_exact(const FramePlane& ref, const Vector2<double>& pos, Interpolator kind) {
  return kind == Interpolator::Cubic ? cubic(ref, pos.x(), pos.y()) : bilinear(ref, pos.x(), pos.y());
}

std::uint16_t interpolate(const FramePlane& ref, const Vector2<double>& pos, Interpolator kind) {
  return round_to_sample(interpolate_exact(ref, pos, kind), ref.max_value());
}

ShiftedSampler::ShiftedSampler(const Vector2<double>& shift, Interpolator kind) {
  const double fx = std::floor(shift.x());
  const double fy = std::floor(shift.y());
  const double ax = shift.x() - fx;
  const double ay = shift.y() - fy;
  if (kind == Interpolator::Cubic) {
    taps_ = 4;
    ix_ = static_cast<int>(fx) - 1;
    iy_ = static_cast<int>(fy) - 1;
    for (int k = 0; k < 4; ++k) {
      wx_[k] = keys_weight(ax - (k - 1));
      wy_[k] = keys_weight(ay - (k - 1));
    }
  } else {
    ix_ = static_cast<int>(fx);
    iy_ = static_cast<int>(fy);
    wx_[0] = 1.0 - ax;
    wx_[1] = ax;
    wy_[0] = 1.0 - ay;
    wy_[1] = ay;
  }
}

std::uint16_t ShiftedSampler::operator()(const FramePlane& ref, int x, int y) const {
  const int w = ref.width();
  int cols[4];
  for (int i = 0; i < taps_; ++i) cols[i] = wrap_column(x + ix_ + i, w);
  double acc = 0.0;
  for (int j = 0; j < taps_; ++j) {
    if (wy_[j] == 0.0) continue;
    const int row = clamp_row(y + iy_ + j, ref.height());
    double sum = 0.0;
    for (int i = 0; i < taps_; ++i) sum += wx_[i] * ref(cols[i], row);
    acc += wy_[j] * sum;
  }
  return round_to_sample(acc, ref.max_value());
}

void ShiftedSampler::fill(const FramePlane& ref, int x0, int y0, int n, SampleRaster& out, int ox, int oy) const {
  // Resolve wrapping and clamping once for the whole patch.
  int cols[kMaxPatch + 3];
  int rows[kMaxPatch + 3];
  const int span = n + taps_ - 1;
  for (int i = 0; i < span; ++i) {
    cols[i] = wrap_column(x0 + ix_ + i, ref.width());
    rows[i] = clamp_row(y0 + iy_ + i, ref.height());
  }
  if (wx_[1] == 0.0 && wy_[1] == 0.0 && taps_ == 2) {
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) out(oy + j, ox + i) = ref(cols[i], rows[j]);
    return;
  }
  const int max_value = ref.max_value();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int t = 0; t < taps_; ++t) {
        if (wy_[t] == 0.0) continue;
        const int row = rows[j + t];
        double sum = 0.0;
        for (int k = 0; k < taps_; ++k) sum += wx_[k] * ref(cols[i + k], row);
        acc += wy_[t] * sum;
      }
      out(oy + j, ox + i) = round_to_sample(acc, max_value);
    }
}

}  // namespace mpa
