#pragma once

// Block motion compensation with 4x4 subblock processing: the motion model
// is evaluated once per subblock at its center and the resulting shift is
// shared by all 16 samples of the subblock.

#include "mpa/frame.hpp"
#include "mpa/geometry.hpp"
#include "mpa/interpolation.hpp"
#include "mpa/motion_model.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mpa {

inline constexpr int kSubblockSize = 4;

struct Block {
  int x0 = 0;
  int y0 = 0;
  int w = 16;
  int h = 16;

  friend bool operator==(const Block&, const Block&) = default;
};

bool is_valid_block_size(int n);

/// Throws std::invalid_argument unless the block has a legal size and lies
/// inside the frame.
void validate_block(const Block& blk, int frame_width, int frame_height);

struct PredictionConfig {
  ProjectionConfig projection;
  Interpolator interpolator = Interpolator::Bilinear;
};

/// Per-subblock ERP displacements of a block under one model. For MPA the
/// plane coordinates of the subblock centers are computed once, so shifts for
/// many motion vectors on the same plane are cheap.
class SubblockField {
 public:
  SubblockField(const Block& blk, const ProjectionConfig& cfg, std::optional<PlaneKind> plane);

  const Block& block() const { return block_; }
  int subblock_count() const { return static_cast<int>(centers_.size()); }

  /// Continuous center of subblock k (raster order).
  const ImageCoord& center(int k) const { return centers_[k]; }

  /// shift = model(center) - center, with the horizontal component taken on
  /// the ERP circle. Subblocks whose center is unpredictable get a zero shift.
  void shifts(const MotionVector& mv, std::span<Vector2<double>> out) const;

 private:
  Block block_;
  ProjectionConfig cfg_;
  std::optional<MotionPlane> plane_;
  std::vector<ImageCoord> centers_;
  std::vector<std::optional<PlaneCoord>> plane_centers_;
};

/// Samples the reference at (x, y) + shift of the owning subblock for every
/// pixel of the block. Output is h x w.
SampleRaster compensate(const FramePlane& ref, const Block& blk, std::span<const Vector2<double>> shifts,
                        Interpolator interpolator);

/// Predicted block for a candidate.
SampleRaster predict_block(const FramePlane& ref, const Block& blk, const MotionCandidate& cand,
                           const PredictionConfig& cfg);

struct Distortion {
  std::int64_t sad = 0;
  std::int64_t sse = 0;
};

/// SAD / SSE between the block of `orig` at blk and a predicted raster.
Distortion residual(const FramePlane& orig, const SampleRaster& pred, const Block& blk);

}  // namespace mpa
