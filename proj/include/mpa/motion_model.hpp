#pragma once

// Translational and motion-plane-adaptive (MPA) motion models as coordinate
// transforms on ERP images. Motion vectors are integers in quarter-pel units
// of the model's native coordinate system: ERP pixels for the translational
// model, motion plane pixels for MPA.

#include "mpa/geometry.hpp"

#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>

namespace mpa {

inline constexpr int kQuarterPel = 4;

struct MotionVector {
  int tx = 0;
  int ty = 0;

  friend bool operator==(const MotionVector&, const MotionVector&) = default;
  friend MotionVector operator+(MotionVector a, MotionVector b) { return {a.tx + b.tx, a.ty + b.ty}; }

  int l1() const { return std::abs(tx) + std::abs(ty); }

  template <typename Scalar = double>
  Vector2<Scalar> in_pixels() const {
    return {Scalar(tx) / Scalar(kQuarterPel), Scalar(ty) / Scalar(kQuarterPel)};
  }
};

enum class ModelKind { Translational, Mpa };

inline const char* to_string(ModelKind kind) { return kind == ModelKind::Mpa ? "mpa" : "translational"; }

/// A model plus its parameters. `plane` is set exactly when model == Mpa.
class MotionCandidate {
 public:
  static MotionCandidate translational(MotionVector mv) { return MotionCandidate(ModelKind::Translational, mv, {}); }
  static MotionCandidate mpa(MotionVector mv, PlaneKind plane) { return MotionCandidate(ModelKind::Mpa, mv, plane); }

  MotionCandidate() = default;

  ModelKind model() const { return model_; }
  const MotionVector& mv() const { return mv_; }
  std::optional<PlaneKind> plane() const { return plane_; }

  MotionCandidate with_mv(MotionVector mv) const { return MotionCandidate(model_, mv, plane_); }

  friend bool operator==(const MotionCandidate&, const MotionCandidate&) = default;

 private:
  MotionCandidate(ModelKind model, MotionVector mv, std::optional<PlaneKind> plane)
      : model_(model), mv_(mv), plane_(plane) {}

  ModelKind model_ = ModelKind::Translational;
  MotionVector mv_{};
  std::optional<PlaneKind> plane_{};
};

/// p + t with the ERP horizontal wrap.
template <typename Derived, typename Scalar = typename Derived::Scalar>
ImageCoordT<Scalar> apply_translational(const Eigen::MatrixBase<Derived>& p, const MotionVector& mv,
                                        const ProjectionConfigT<Scalar>& cfg) {
  ImageCoordT<Scalar> out = p + mv.in_pixels<Scalar>();
  out.x() = wrap_u(out.x(), cfg.width);
  return out;
}

/// Moves a point that has already been projected onto the motion plane.
/// Translation on the plane never changes the side tag.
template <typename Scalar>
ImageCoordT<Scalar> apply_mpa_on_plane(const PlaneCoordT<Scalar>& p_p, const MotionVector& mv,
                                       const MotionPlaneT<Scalar>& plane, const ProjectionConfigT<Scalar>& cfg) {
  PlaneCoordT<Scalar> moved = p_p;
  moved.uv += mv.in_pixels<Scalar>();
  return unreproject(moved, plane, cfg);
}

/// zeta_R^-1(zeta_R(p_o) + t). nullopt when p_o falls into the horizon band
/// of the plane, in which case the sample is unpredictable under this plane.
template <typename Derived, typename Scalar = typename Derived::Scalar>
std::optional<ImageCoordT<Scalar>> apply_mpa(const Eigen::MatrixBase<Derived>& p_o, const MotionVector& mv,
                                             const MotionPlaneT<Scalar>& plane, const ProjectionConfigT<Scalar>& cfg) {
  const auto p_p = reproject(p_o, plane, cfg);
  if (!p_p) return std::nullopt;
  return apply_mpa_on_plane(*p_p, mv, plane, cfg);
}

/// Evaluates any candidate at p. nullopt only for MPA samples in the horizon band.
template <typename Derived, typename Scalar = typename Derived::Scalar>
std::optional<ImageCoordT<Scalar>> apply_model(const Eigen::MatrixBase<Derived>& p, const MotionCandidate& cand,
                                               const ProjectionConfigT<Scalar>& cfg) {
  if (cand.model() == ModelKind::Translational) return apply_translational(p, cand.mv(), cfg);
  return apply_mpa(p, cand.mv(), motion_plane<Scalar>(*cand.plane()), cfg);
}

/// Signed horizontal distance a - b on the ERP circle, in (-width/2, width/2].
template <typename Scalar>
Scalar wrapped_du(Scalar a, Scalar b, int width) {
  Scalar d = wrap_u(a - b, width);
  if (d > Scalar(width) / 2) d -= Scalar(width);
  return d;
}

}  // namespace mpa
