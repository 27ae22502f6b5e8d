#pragma once

// Deterministic synthetic ERP sequences with known motion.
//
//   Ground: a textured ground plane below the camera, rendered by casting
//           the ray of every ERP pixel onto it. The plane translates between
//           frames, which is exactly a translation on the top/bottom motion
//           plane. Rays above the horizon see a static sky.
//   Scroll: a spherical texture rolled horizontally by a whole number of
//           pixels per frame (pure ERP translation).
//   Static: i.i.d. noise repeated in every frame.

#include "mpa/frame.hpp"
#include "mpa/geometry.hpp"
#include "mpa/prediction.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mpa {

enum class SceneKind { Ground, Scroll, Static };

std::optional<SceneKind> scene_from_string(const std::string& name);
const char* to_string(SceneKind kind);

struct SceneSpec {
  SceneKind kind = SceneKind::Ground;
  int width = 512;
  int height = 256;
  int frames = 8;
  int bit_depth = 8;
  std::uint64_t seed = 1;

  // Ground: camera height above the plane, texture feature size and fog
  // distance in world units; velocity in top/bottom plane pixels per frame.
  double camera_height = 1.0;
  double feature_size = 0.06;
  double fog_distance = 2.5;
  Vector2<double> plane_velocity{1.5, -0.75};

  // Scroll: ERP pixels per frame.
  int scroll_px = 3;

  void validate() const;
};

/// Smooth value noise in [0, 1], three octaves, period-free.
double value_noise(double x, double y, std::uint64_t seed);
double value_noise(double x, double y, double z, std::uint64_t seed);

/// Ground texture at world position (x, y) on the plane, in [0, 1].
double ground_texture(double x, double y, const SceneSpec& spec);

/// Sky (and scroll) texture seen along direction s, in [0, 1].
double sky_texture(const SphereCoord& s, const SceneSpec& spec);

/// Maps [0, 1] to nominal video range [16, 235] scaled to the bit depth.
std::uint16_t to_sample(double unit, int bit_depth);

/// World-space displacement of the ground per frame equivalent to
/// spec.plane_velocity on the top/bottom plane.
Vector2<double> ground_world_velocity(const SceneSpec& spec);

std::vector<FramePlane> synth_sequence(const SceneSpec& spec);

/// True when the whole block looks at least 30 degrees below the horizon.
bool is_ground_block(const Block& blk, int height);

}  // namespace mpa
