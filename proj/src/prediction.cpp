#include "mpa/prediction.hpp"

#include <stdexcept>
#include <string>

namespace mpa {

bool is_valid_block_size(int n) { return n == 8 || n == 16 || n == 32 || n == 64; }

void validate_block(const Block& blk, int frame_width, int frame_height) {
  if (!is_valid_block_size(blk.w) || !is_valid_block_size(blk.h))
    throw std::invalid_argument("block: size must be one of 8, 16, 32, 64");
  if (blk.x0 < 0 || blk.y0 < 0 || blk.x0 + blk.w > frame_width || blk.y0 + blk.h > frame_height)
    throw std::invalid_argument("block: (" + std::to_string(blk.x0) + ", " + std::to_string(blk.y0) +
                                ") exceeds the frame");
}

SubblockField::SubblockField(const Block& blk, const ProjectionConfig& cfg, std::optional<PlaneKind> plane)
    : block_(blk), cfg_(cfg) {
  if (plane) plane_ = motion_plane(*plane);
  const int cols = blk.w / kSubblockSize;
  const int rows = blk.h / kSubblockSize;
  centers_.reserve(static_cast<std::size_t>(cols * rows));
  for (int sy = 0; sy < rows; ++sy)
    for (int sx = 0; sx < cols; ++sx)
      centers_.emplace_back(blk.x0 + sx * kSubblockSize + 2.0, blk.y0 + sy * kSubblockSize + 2.0);

  if (plane_) {
    plane_centers_.reserve(centers_.size());
    for (const auto& c : centers_) plane_centers_.push_back(reproject(c, *plane_, cfg_));
  }
}

void SubblockField::shifts(const MotionVector& mv, std::span<Vector2<double>> out) const {
  if (!plane_) {
    out[0] = mv.in_pixels();
    for (std::size_t k = 1; k < centers_.size(); ++k) out[k] = out[0];
    return;
  }
  for (std::size_t k = 0; k < centers_.size(); ++k) {
    const auto& pc = plane_centers_[k];
    if (!pc) {
      out[k].setZero();
      continue;
    }
    const ImageCoord moved = apply_mpa_on_plane(*pc, mv, *plane_, cfg_);
    out[k] = {wrapped_du(moved.x(), centers_[k].x(), cfg_.width), moved.y() - centers_[k].y()};
  }
}

SampleRaster compensate(const FramePlane& ref, const Block& blk, std::span<const Vector2<double>> shifts,
                        Interpolator interpolator) {
  SampleRaster out(blk.h, blk.w);
  const int cols = blk.w / kSubblockSize;
  const int rows = blk.h / kSubblockSize;
  for (int sy = 0; sy < rows; ++sy)
    for (int sx = 0; sx < cols; ++sx) {
      const ShiftedSampler sample(shifts[static_cast<std::size_t>(sy * cols + sx)], interpolator);
      const int x = sx * kSubblockSize, y = sy * kSubblockSize;
      sample.fill(ref, blk.x0 + x, blk.y0 + y, kSubblockSize, out, x, y);
    }
  return out;
}

SampleRaster predict_block(const FramePlane& ref, const Block& blk, const MotionCandidate& cand,
                           const PredictionConfig& cfg) {
  validate_block(blk, ref.width(), ref.height());
  const SubblockField field(blk, cfg.projection, cand.plane());
  std::vector<Vector2<double>> shifts(static_cast<std::size_t>(field.subblock_count()));
  field.shifts(cand.mv(), shifts);
  return compensate(ref, blk, shifts, cfg.interpolator);
}

Distortion residual(const FramePlane& orig, const SampleRaster& pred, const Block& blk) {
  const auto o = orig.samples.block(blk.y0, blk.x0, blk.h, blk.w).cast<std::int64_t>();
  const auto diff = (o - pred.cast<std::int64_t>()).eval();
  return {diff.abs().sum(), diff.square().sum()};
}

}  // namespace mpa
