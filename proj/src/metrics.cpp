#include "mpa/metrics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mpa {
namespace {

void require_same_format(const FramePlane& a, const FramePlane& b) {
  if (!a.same_format(b))
    throw MetricsError("metrics: frame format mismatch (" + std::to_string(a.width()) + "x" +
                       std::to_string(a.height()) + "@" + std::to_string(a.bit_depth) + " vs " +
                       std::to_string(b.width()) + "x" + std::to_string(b.height()) + "@" +
                       std::to_string(b.bit_depth) + ")");
  if (a.samples.size() == 0) throw MetricsError("metrics: empty frame");
}

Eigen::ArrayXd row_sse(const FramePlane& a, const FramePlane& b) {
  const auto diff = (a.samples.cast<double>() - b.samples.cast<double>()).eval();
  return diff.square().rowwise().sum();
}

double psnr_from_mse(double mse, int bit_depth) {
  if (mse == 0.0) return kLosslessPsnr;
  const double peak = static_cast<double>((1 << bit_depth) - 1);
  return 10.0 * std::log10(peak * peak / mse);
}

// Cubic least-squares fit of log(rate) over x = (quality - center) / scale;
// coefficients low order first.
Eigen::Vector4d fit_log_rate(std::span<const RDPoint> pts, double center, double scale) {
  Eigen::MatrixXd v(static_cast<Eigen::Index>(pts.size()), 4);
  Eigen::VectorXd y(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double q = (pts[i].quality - center) / scale;
    v.row(static_cast<Eigen::Index>(i)) << 1.0, q, q * q, q * q * q;
    y(static_cast<Eigen::Index>(i)) = std::log(pts[i].rate);
  }
  return v.colPivHouseholderQr().solve(y);
}

double integrate_cubic(const Eigen::Vector4d& c, double lo, double hi) {
  auto antideriv = [&](double x) {
    return c(0) * x + c(1) * x * x / 2.0 + c(2) * x * x * x / 3.0 + c(3) * x * x * x * x / 4.0;
  };
  return antideriv(hi) - antideriv(lo);
}

void validate_curve(std::span<const RDPoint> pts, const char* name) {
  if (pts.size() < 4) throw MetricsError(std::string("bd_rate: ") + name + " needs at least 4 points");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!(pts[i].rate > 0) || !std::isfinite(pts[i].rate))
      throw MetricsError(std::string("bd_rate: ") + name + " has a non-positive rate");
    if (!std::isfinite(pts[i].quality)) throw MetricsError(std::string("bd_rate: ") + name + " has non-finite quality");
    if (i > 0 && !(pts[i].quality > pts[i - 1].quality))
      throw MetricsError(std::string("bd_rate: ") + name + " quality must be strictly increasing");
  }
}

}  // namespace

double psnr_from_sse(double sse, double count, int bit_depth) { return psnr_from_mse(sse / count, bit_depth); }

double psnr(const FramePlane& a, const FramePlane& b) {
  require_same_format(a, b);
  return psnr_from_sse(row_sse(a, b).sum(), static_cast<double>(a.samples.size()), a.bit_depth);
}

std::vector<double> erp_row_weights(int height) {
  std::vector<double> w(static_cast<std::size_t>(height));
  double sum = 0.0;
  for (int j = 0; j < height; ++j) {
    w[static_cast<std::size_t>(j)] = std::cos((j + 0.5 - height / 2.0) * std::numbers::pi / height);
    sum += w[static_cast<std::size_t>(j)];
  }
  for (double& x : w) x /= sum;
  return w;
}

double ws_psnr(const FramePlane& a, const FramePlane& b) {
  const auto w = erp_row_weights(a.height());
  return ws_psnr(a, b, w);
}

double ws_psnr(const FramePlane& a, const FramePlane& b, std::span<const double> row_weights) {
  require_same_format(a, b);
  if (row_weights.size() != static_cast<std::size_t>(a.height()))
    throw MetricsError("ws_psnr: one weight per row required");
  const Eigen::ArrayXd sse = row_sse(a, b);
  const Eigen::Map<const Eigen::ArrayXd> w(row_weights.data(), static_cast<Eigen::Index>(row_weights.size()));
  const double wsum = w.sum();
  if (!(wsum > 0)) throw MetricsError("ws_psnr: weights must have a positive sum");
  // Each row holds `width` samples sharing one weight.
  const double wmse = (w * sse).sum() / (wsum * a.width());
  return psnr_from_mse(wmse, a.bit_depth);
}

double bd_rate(std::span<const RDPoint> anchor, std::span<const RDPoint> test) {
  validate_curve(anchor, "anchor");
  validate_curve(test, "test");

  const double lo = std::max(anchor.front().quality, test.front().quality);
  const double hi = std::min(anchor.back().quality, test.back().quality);
  if (!(hi > lo)) throw MetricsError("bd_rate: quality ranges do not overlap");

  const double center = 0.5 * (lo + hi);
  const double scale = 0.5 * (hi - lo);
  const Eigen::Vector4d ca = fit_log_rate(anchor, center, scale);
  const Eigen::Vector4d ct = fit_log_rate(test, center, scale);
  // The common interval maps to x in [-1, 1].
  const double mean_diff = (integrate_cubic(ct, -1.0, 1.0) - integrate_cubic(ca, -1.0, 1.0)) / 2.0;
  return 100.0 * std::expm1(mean_diff);
}

}  // namespace mpa
