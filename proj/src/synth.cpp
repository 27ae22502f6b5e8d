#include "mpa/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace mpa {
namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double lattice(std::int64_t i, std::int64_t j, std::int64_t k, std::uint64_t seed) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(i));
  h = splitmix64(h ^ static_cast<std::uint64_t>(j));
  h = splitmix64(h ^ static_cast<std::uint64_t>(k));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

double lerp(double a, double b, double t) { return a + (b - a) * t; }

double noise_octave(double x, double y, double z, std::uint64_t seed) {
  const double fx = std::floor(x), fy = std::floor(y), fz = std::floor(z);
  const auto i = static_cast<std::int64_t>(fx);
  const auto j = static_cast<std::int64_t>(fy);
  const auto k = static_cast<std::int64_t>(fz);
  const double u = fade(x - fx), v = fade(y - fy), w = fade(z - fz);

  double c[2][2][2];
  for (int dk = 0; dk < 2; ++dk)
    for (int dj = 0; dj < 2; ++dj)
      for (int di = 0; di < 2; ++di) c[dk][dj][di] = lattice(i + di, j + dj, k + dk, seed);

  const double z0 = lerp(lerp(c[0][0][0], c[0][0][1], u), lerp(c[0][1][0], c[0][1][1], u), v);
  const double z1 = lerp(lerp(c[1][0][0], c[1][0][1], u), lerp(c[1][1][0], c[1][1][1], u), v);
  return lerp(z0, z1, w);
}

double fractal(double x, double y, double z, std::uint64_t seed) {
  double sum = 0.0, amp = 1.0, norm = 0.0, freq = 1.0;
  for (int octave = 0; octave < 3; ++octave) {
    sum += amp * noise_octave(x * freq, y * freq, z * freq, seed + static_cast<std::uint64_t>(octave) * 7919ULL);
    norm += amp;
    amp *= 0.5;
    freq *= 2.0;
  }
  return sum / norm;
}

ImageCoord pixel_center(int x, int y) { return {x + 0.5, y + 0.5}; }

std::vector<FramePlane> render_ground(const SceneSpec& spec) {
  const auto cfg = ProjectionConfig::erp(spec.width, spec.height);
  const Vector2<double> vel = ground_world_velocity(spec);
  std::vector<FramePlane> frames;
  for (int k = 0; k < spec.frames; ++k) {
    FramePlane frame(spec.width, spec.height, spec.bit_depth);
    for (int y = 0; y < spec.height; ++y)
      for (int x = 0; x < spec.width; ++x) {
        const SphereCoord s = erp_to_sphere(pixel_center(x, y), cfg);
        double value;
        if (s.z() < 0.0) {
          const double t = spec.camera_height / -s.z();
          const Vector2<double> hit = t * s.head<2>();
          const double fog = std::exp(-hit.norm() / spec.fog_distance);
          const Vector2<double> q = hit - k * vel;
          value = fog * ground_texture(q.x(), q.y(), spec) + (1.0 - fog) * 0.5;
        } else {
          value = sky_texture(s, spec);
        }
        frame(x, y) = to_sample(value, spec.bit_depth);
      }
    frames.push_back(std::move(frame));
  }
  return frames;
}

std::vector<FramePlane> render_scroll(const SceneSpec& spec) {
  const auto cfg = ProjectionConfig::erp(spec.width, spec.height);
  FramePlane base(spec.width, spec.height, spec.bit_depth);
  for (int y = 0; y < spec.height; ++y)
    for (int x = 0; x < spec.width; ++x)
      base(x, y) = to_sample(sky_texture(erp_to_sphere(pixel_center(x, y), cfg), spec), spec.bit_depth);

  std::vector<FramePlane> frames;
  for (int k = 0; k < spec.frames; ++k) {
    FramePlane frame(spec.width, spec.height, spec.bit_depth);
    const int offset = k * spec.scroll_px;
    for (int y = 0; y < spec.height; ++y)
      for (int x = 0; x < spec.width; ++x) {
        int src = (x - offset) % spec.width;
        if (src < 0) src += spec.width;
        frame(x, y) = base(src, y);
      }
    frames.push_back(std::move(frame));
  }
  return frames;
}

std::vector<FramePlane> render_static(const SceneSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  FramePlane base(spec.width, spec.height, spec.bit_depth);
  for (int y = 0; y < spec.height; ++y)
    for (int x = 0; x < spec.width; ++x) base(x, y) = static_cast<std::uint16_t>(rng() >> (64 - spec.bit_depth));
  return std::vector<FramePlane>(static_cast<std::size_t>(spec.frames), base);
}

}  // namespace

std::optional<SceneKind> scene_from_string(const std::string& name) {
  if (name == "ground") return SceneKind::Ground;
  if (name == "scroll") return SceneKind::Scroll;
  if (name == "static") return SceneKind::Static;
  return std::nullopt;
}

const char* to_string(SceneKind kind) {
  switch (kind) {
    case SceneKind::Ground:
      return "ground";
    case SceneKind::Scroll:
      return "scroll";
    case SceneKind::Static:
      return "static";
  }
  return "?";
}

void SceneSpec::validate() const {
  ProjectionConfig::erp(width, height);
  if (frames < 1) throw std::invalid_argument("scene: frame count must be positive");
  if (bit_depth != 8 && bit_depth != 10) throw std::invalid_argument("scene: bit depth must be 8 or 10");
  if (!(camera_height > 0) || !(feature_size > 0) || !(fog_distance > 0))
    throw std::invalid_argument("scene: camera height, feature size and fog distance must be positive");
}

double value_noise(double x, double y, std::uint64_t seed) { return fractal(x, y, 0.0, seed); }

double value_noise(double x, double y, double z, std::uint64_t seed) { return fractal(x, y, z, seed); }

double ground_texture(double x, double y, const SceneSpec& spec) {
  return value_noise(x / spec.feature_size, y / spec.feature_size, spec.seed);
}

double sky_texture(const SphereCoord& s, const SceneSpec& spec) {
  constexpr double kScale = 10.0;
  return value_noise(kScale * s.x(), kScale * s.y(), kScale * s.z(), spec.seed ^ 0x5DEECE66DULL);
}

std::uint16_t to_sample(double unit, int bit_depth) {
  const double scale = static_cast<double>(1 << (bit_depth - 8));
  const double v = std::floor((16.0 + std::clamp(unit, 0.0, 1.0) * 219.0) * scale + 0.5);
  return static_cast<std::uint16_t>(v);
}

Vector2<double> ground_world_velocity(const SceneSpec& spec) {
  const auto cfg = ProjectionConfig::erp(spec.width, spec.height);
  const MotionPlane tb = motion_plane(PlaneKind::TopBottom);
  // A plane offset (a, b) at the ground depth corresponds to camera-frame
  // offset (a, b, 0) * h / f.
  const double scale = spec.camera_height / cfg.focal_length;
  const Vector3<double> cam(spec.plane_velocity.x() * scale, spec.plane_velocity.y() * scale, 0.0);
  return (tb.rotation.transpose() * cam).head<2>();
}

std::vector<FramePlane> synth_sequence(const SceneSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case SceneKind::Ground:
      return render_ground(spec);
    case SceneKind::Scroll:
      return render_scroll(spec);
    case SceneKind::Static:
      return render_static(spec);
  }
  throw std::invalid_argument("scene: unknown kind");
}

bool is_ground_block(const Block& blk, int height) { return 3 * blk.y0 >= 2 * height; }

}  // namespace mpa
