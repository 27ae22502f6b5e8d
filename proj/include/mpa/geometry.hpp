#pragma once

// Mappings between equirectangular (ERP) image coordinates, the unit sphere
// and perspective motion planes.
//
// Axis convention: theta is the polar angle measured from +z, phi the
// azimuth atan2(y, x). ERP maps phi linearly onto u and theta onto v, so the
// ERP image center (u = W/2, v = H/2) is the world direction -x and the top
// row is the +z pole. A motion plane is described by a rotation R that takes
// world directions into the camera frame of a virtual perspective camera
// whose optical axis is +z.
//
// Continuous image coordinates place the center of raster sample (i, j) at
// (i + 0.5, j + 0.5).

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace mpa {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

template <typename Scalar>
using ImageCoordT = Vector2<Scalar>;
template <typename Scalar>
using SphereCoordT = Vector3<Scalar>;

using ImageCoord = ImageCoordT<double>;
using SphereCoord = SphereCoordT<double>;

class GeometryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Half-width of the band around theta = pi/2 in which the perspective
/// projection is undefined (radians).
inline constexpr double kHorizonEpsilon = 1e-6;

template <typename Scalar>
struct SphericalAngles {
  Scalar theta;  // [0, pi]
  Scalar phi;    // [0, 2 pi)
};

enum class ImageSide { Real, Virtual };

/// Point on a perspective motion plane. Real: the ray hit the image plane in
/// front of the lens (theta < pi/2). Virtual: the mirrored plane behind it.
template <typename Scalar>
struct PlaneCoordT {
  Vector2<Scalar> uv = Vector2<Scalar>::Zero();
  ImageSide side = ImageSide::Real;

  Scalar radius() const { return uv.norm(); }
};
using PlaneCoord = PlaneCoordT<double>;

enum class PlaneKind { FrontBack, LeftRight, TopBottom };

inline constexpr PlaneKind kAllPlanes[] = {PlaneKind::FrontBack, PlaneKind::LeftRight,
                                           PlaneKind::TopBottom};

inline const char* to_string(PlaneKind kind) {
  switch (kind) {
    case PlaneKind::FrontBack:
      return "front_back";
    case PlaneKind::LeftRight:
      return "left_right";
    case PlaneKind::TopBottom:
      return "top_bottom";
  }
  return "?";
}

inline std::optional<PlaneKind> plane_from_string(const std::string& name) {
  if (name == "front_back" || name == "fb") return PlaneKind::FrontBack;
  if (name == "left_right" || name == "lr") return PlaneKind::LeftRight;
  if (name == "top_bottom" || name == "tb") return PlaneKind::TopBottom;
  return std::nullopt;
}

template <typename Scalar>
struct MotionPlaneT {
  PlaneKind kind = PlaneKind::FrontBack;
  Matrix3<Scalar> rotation = Matrix3<Scalar>::Identity();
};
using MotionPlane = MotionPlaneT<double>;

template <typename Scalar>
struct ProjectionConfigT {
  int width = 0;
  int height = 0;
  Scalar focal_length = 0;  // plane pixels per unit tangent

  /// ERP raster of the given size with f = width / (2 pi), so that one plane
  /// pixel at the plane center spans the same angle as one ERP pixel on the
  /// equator.
  static ProjectionConfigT erp(int width, int height) {
    ProjectionConfigT cfg{width, height, Scalar(width) / (Scalar(2) * std::numbers::pi_v<Scalar>)};
    cfg.validate();
    return cfg;
  }

  void validate() const {
    if (width <= 0 || height <= 0) throw GeometryError("projection: raster dimensions must be positive");
    if (width != 2 * height)
      throw GeometryError("projection: ERP raster requires width = 2 * height, got " +
                          std::to_string(width) + "x" + std::to_string(height));
    if (!(focal_length > 0) || !std::isfinite(focal_length))
      throw GeometryError("projection: focal length must be positive");
  }
};
using ProjectionConfig = ProjectionConfigT<double>;

namespace detail {

template <typename Scalar>
Scalar wrap_angle(Scalar phi) {
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  phi = std::fmod(phi, two_pi);
  if (phi < 0) phi += two_pi;
  if (phi >= two_pi) phi = 0;
  return phi;
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& v, const char* what) {
  if (!v.allFinite()) throw GeometryError(std::string(what) + ": non-finite coordinate");
}

}  // namespace detail

/// Wraps a horizontal ERP coordinate into [0, width).
template <typename Scalar>
Scalar wrap_u(Scalar u, int width) {
  const Scalar w = Scalar(width);
  Scalar r = std::fmod(u, w);
  if (r < 0) r += w;
  if (r >= w) r = 0;
  return r;
}

template <typename Derived>
SphericalAngles<typename Derived::Scalar> to_angles(const Eigen::MatrixBase<Derived>& s) {
  using Scalar = typename Derived::Scalar;
  const Scalar rho_xy = std::hypot(s.x(), s.y());
  const Scalar theta = std::atan2(rho_xy, s.z());
  // Pole: azimuth is undefined; pin it to 0.
  const Scalar phi = rho_xy == Scalar(0) ? Scalar(0) : detail::wrap_angle(std::atan2(s.y(), s.x()));
  return {theta, phi};
}

template <typename Scalar>
SphereCoordT<Scalar> from_angles(const SphericalAngles<Scalar>& a) {
  const Scalar st = std::sin(a.theta);
  return {st * std::cos(a.phi), st * std::sin(a.phi), std::cos(a.theta)};
}

/// Inverse equirectangular projection.
template <typename Derived, typename Scalar = typename Derived::Scalar>
SphereCoordT<Scalar> erp_to_sphere(const Eigen::MatrixBase<Derived>& p, const ProjectionConfigT<Scalar>& cfg) {
  detail::require_finite(p, "erp_to_sphere");
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  Scalar theta = pi * p.y() / Scalar(cfg.height);
  theta = std::clamp(theta, Scalar(0), pi);
  const Scalar phi = detail::wrap_angle(Scalar(2) * pi * p.x() / Scalar(cfg.width));
  return from_angles(SphericalAngles<Scalar>{theta, phi});
}

/// Equirectangular projection; u is returned in [0, width).
template <typename Derived, typename Scalar = typename Derived::Scalar>
ImageCoordT<Scalar> sphere_to_erp(const Eigen::MatrixBase<Derived>& s, const ProjectionConfigT<Scalar>& cfg) {
  detail::require_finite(s, "sphere_to_erp");
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  const auto a = to_angles(s);
  const Scalar u = wrap_u(a.phi * Scalar(cfg.width) / (Scalar(2) * pi), cfg.width);
  return {u, a.theta * Scalar(cfg.height) / pi};
}

/// Generalized perspective projection onto the real (theta < pi/2) or the
/// virtual (theta > pi/2) image plane of a camera looking along +z.
/// Returns nullopt inside the horizon band |theta - pi/2| < kHorizonEpsilon.
template <typename Derived, typename Scalar = typename Derived::Scalar>
std::optional<PlaneCoordT<Scalar>> sphere_to_perspective(const Eigen::MatrixBase<Derived>& s,
                                                         const ProjectionConfigT<Scalar>& cfg) {
  detail::require_finite(s, "sphere_to_perspective");
  constexpr Scalar half_pi = std::numbers::pi_v<Scalar> / 2;
  const auto a = to_angles(s);
  if (std::abs(a.theta - half_pi) < Scalar(kHorizonEpsilon)) return std::nullopt;

  PlaneCoordT<Scalar> out;
  Scalar r;
  if (a.theta < half_pi) {
    r = cfg.focal_length * std::tan(a.theta);
    out.side = ImageSide::Real;
  } else {
    r = cfg.focal_length * std::tan(std::numbers::pi_v<Scalar> - a.theta);
    out.side = ImageSide::Virtual;
  }
  out.uv = {r * std::cos(a.phi), r * std::sin(a.phi)};
  return out;
}

template <typename Scalar>
SphereCoordT<Scalar> perspective_to_sphere(const PlaneCoordT<Scalar>& p, const ProjectionConfigT<Scalar>& cfg) {
  detail::require_finite(p.uv, "perspective_to_sphere");
  const Scalar r = p.uv.norm();
  const Scalar incident = std::atan(r / cfg.focal_length);
  const Scalar theta = p.side == ImageSide::Real ? incident : std::numbers::pi_v<Scalar> - incident;
  const Scalar phi = r == Scalar(0) ? Scalar(0) : std::atan2(p.uv.y(), p.uv.x());
  return from_angles(SphericalAngles<Scalar>{theta, phi});
}

/// Rotation taking world directions into the camera frame of the given motion
/// plane. Camera axes are (plane u, plane v, optical axis).
///
///   FrontBack: optical axis -x (ERP center), plane v follows ERP v (down).
///   LeftRight: FrontBack composed with a 90 degree turn about the vertical
///              axis; optical axis +y (ERP u = W/4).
///   TopBottom: FrontBack composed with a 90 degree tilt about the camera u
///              axis that brings world up (+z) onto the optical axis.
template <typename Scalar = double>
MotionPlaneT<Scalar> motion_plane(PlaneKind kind) {
  Matrix3<Scalar> r;
  switch (kind) {
    case PlaneKind::FrontBack:
      r << 0, 1, 0,
           0, 0, -1,
          -1, 0, 0;
      break;
    case PlaneKind::LeftRight:
      r << 1, 0, 0,
           0, 0, -1,
           0, 1, 0;
      break;
    case PlaneKind::TopBottom:
      r << 0, 1, 0,
          -1, 0, 0,
           0, 0, 1;
      break;
  }
  return {kind, r};
}

/// ERP coordinate -> motion plane coordinate.
template <typename Derived, typename Scalar = typename Derived::Scalar>
std::optional<PlaneCoordT<Scalar>> reproject(const Eigen::MatrixBase<Derived>& p_o, const MotionPlaneT<Scalar>& plane,
                                             const ProjectionConfigT<Scalar>& cfg) {
  const SphereCoordT<Scalar> s = plane.rotation * erp_to_sphere(p_o, cfg);
  return sphere_to_perspective(s, cfg);
}

/// Motion plane coordinate -> ERP coordinate.
template <typename Scalar>
ImageCoordT<Scalar> unreproject(const PlaneCoordT<Scalar>& p_p, const MotionPlaneT<Scalar>& plane,
                                const ProjectionConfigT<Scalar>& cfg) {
  // R is orthonormal, so its inverse is its transpose.
  const SphereCoordT<Scalar> s = plane.rotation.transpose() * perspective_to_sphere(p_p, cfg);
  return sphere_to_erp(s, cfg);
}

}  // namespace mpa
