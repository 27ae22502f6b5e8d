#pragma once

#include "mpa/frame.hpp"

#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace mpa {

class MetricsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Returned by psnr / ws_psnr for identical inputs.
inline constexpr double kLosslessPsnr = std::numeric_limits<double>::infinity();

/// PSNR for a given squared-error sum over `count` samples.
double psnr_from_sse(double sse, double count, int bit_depth);

double psnr(const FramePlane& a, const FramePlane& b);

/// Normalized per-row ERP weights cos((j + 0.5 - H/2) * pi / H) / sum.
std::vector<double> erp_row_weights(int height);

/// WS-PSNR of an ERP frame pair.
double ws_psnr(const FramePlane& a, const FramePlane& b);

/// WS-PSNR with caller-supplied per-row weights (normalized internally).
double ws_psnr(const FramePlane& a, const FramePlane& b, std::span<const double> row_weights);

struct RDPoint {
  double rate = 0;     // > 0
  double quality = 0;  // dB
};

/// Bjontegaard delta rate of `test` against `anchor` in percent; negative
/// values are savings. log(rate) is fit as a cubic in quality for both
/// curves and the difference is averaged over the common quality interval.
double bd_rate(std::span<const RDPoint> anchor, std::span<const RDPoint> test);

}  // namespace mpa
