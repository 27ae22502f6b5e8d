#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mpa/search.hpp"
#include "mpa/synth.hpp"
#include "test_support.hpp"

#include <limits>
#include <ostream>

using namespace mpa;
using mpa::test::Rng;

namespace mpa {
std::ostream& operator<<(std::ostream& os, const MotionVector& mv) { return os << '(' << mv.tx << ", " << mv.ty << ')'; }
std::ostream& operator<<(std::ostream& os, const MotionCandidate& c) {
  const auto plane = c.plane();
  return os << to_string(c.model()) << '/' << (plane ? to_string(*plane) : "none") << c.mv();
}
}  // namespace mpa

namespace {

constexpr int W = 128;
constexpr int H = 64;
const PredictionConfig kPred{ProjectionConfig::erp(W, H), Interpolator::Bilinear};

SearchConfig config(double lambda, int range, bool refine) {
  SearchConfig s;
  s.lambda = lambda;
  s.range = range;
  s.fractional_refine = refine;
  return s;
}

// orig(x, y) = ref(x + dx, y + dy), columns wrapping, rows clamped.
FramePlane shifted(const FramePlane& ref, int dx, int dy) {
  FramePlane out(ref.width(), ref.height(), ref.bit_depth);
  for (int y = 0; y < ref.height(); ++y)
    for (int x = 0; x < ref.width(); ++x)
      out(x, y) = ref(((x + dx) % ref.width() + ref.width()) % ref.width(), std::clamp(y + dy, 0, ref.height() - 1));
  return out;
}

std::vector<FramePlane> scene(SceneKind kind, int w, int h, int frames) {
  SceneSpec spec;
  spec.kind = kind;
  spec.width = w;
  spec.height = h;
  spec.frames = frames;
  return synth_sequence(spec);
}

}  // namespace

TEST_CASE("exp-Golomb lengths") {
  CHECK(signed_exp_golomb_bits(0) == 1);
  CHECK(signed_exp_golomb_bits(1) == 3);
  CHECK(signed_exp_golomb_bits(-1) == 3);
  CHECK(signed_exp_golomb_bits(2) == 5);
  CHECK(signed_exp_golomb_bits(-3) == 5);
  CHECK(signed_exp_golomb_bits(4) == 7);
  CHECK(signed_exp_golomb_bits(-64) == 15);
}

TEST_CASE("mv_bits") {
  CHECK(mv_bits({0, 0}, ModelKind::Translational, std::nullopt) == 3);
  CHECK(mv_bits({0, 0}, ModelKind::Mpa, PlaneKind::FrontBack) == 4);
  CHECK(mv_bits({0, 0}, ModelKind::Mpa, PlaneKind::LeftRight) == 5);
  CHECK(mv_bits({0, 0}, ModelKind::Mpa, PlaneKind::TopBottom) == 5);
  CHECK(mv_bits(MotionCandidate::mpa({1, -2}, PlaneKind::TopBottom)) == 3 + 5 + 3);
}

TEST_CASE("lambda") {
  CHECK(lambda_for_qp(12) == doctest::Approx(0.85));
  CHECK(lambda_for_qp(15) == doctest::Approx(1.7));
  for (int qp = 0; qp < 51; ++qp) CHECK(lambda_for_qp(qp + 1) > lambda_for_qp(qp));
  const SearchConfig s = SearchConfig::for_qp(32, 6, false);
  CHECK(s.lambda == doctest::Approx(std::sqrt(lambda_for_qp(32))));
  CHECK(s.range == 6);
  CHECK_FALSE(s.fractional_refine);
  CHECK_THROWS(config(0.0, 4, true).validate());
  CHECK_THROWS(config(1.0, 0, true).validate());
}

TEST_CASE("search recovers a global integer shift") {
  Rng rng(41);
  const FramePlane ref = rng.noise_frame(W, H, 8);
  for (const auto [dx, dy] : {std::pair{3, -2}, std::pair{-5, 4}, std::pair{0, 1}, std::pair{7, 7}}) {
    const FramePlane orig = shifted(ref, dx, dy);
    for (const bool refine : {false, true}) {
      const PlaneSearchResult r =
          search_plane(orig, ref, {48, 24, 16, 16}, ModelKind::Translational, std::nullopt, kPred, config(4.0, 8, refine));
      CHECK(r.mv == MotionVector{4 * dx, 4 * dy});
      CHECK(r.sad == 0);
    }
  }
}

TEST_CASE("static content gives zero motion") {
  Rng rng(42);
  const FramePlane f = rng.noise_frame(W, H, 8);
  for (const PlaneKind kind : kAllPlanes) {
    const PlaneSearchResult r = search_plane(f, f, {64, 16, 16, 16}, ModelKind::Mpa, kind, kPred, config(4.0, 4, true));
    CHECK(r.mv == MotionVector{});
    CHECK(r.sad == 0);
  }
  const RDDecision d = decide(f, f, {64, 16, 16, 16}, kPred, config(4.0, 4, true));
  CHECK(d.best == MotionCandidate::translational({}));
  CHECK(d.distortion == 0);
  CHECK(d.bits == 3);
  CHECK(d.per_candidate_log.size() == 4);
}

TEST_CASE("integer search is optimal over the grid") {
  Rng rng(43);
  const auto seq = scene(SceneKind::Ground, W, H, 2);
  const int range = 3;
  const SearchConfig scfg = config(2.5, range, false);
  for (int trial = 0; trial < 6; ++trial) {
    const Block blk{8 * rng.integer(0, W / 8 - 2), 8 * rng.integer(0, H / 8 - 2), 16, 16};
    const PlaneKind kind = kAllPlanes[trial % 3];
    const ModelKind model = trial < 3 ? ModelKind::Mpa : ModelKind::Translational;
    const auto plane = model == ModelKind::Mpa ? std::optional(kind) : std::nullopt;
    const PlaneSearchResult r = search_plane(seq[1], seq[0], blk, model, plane, kPred, scfg);

    double best = std::numeric_limits<double>::infinity();
    MotionVector arg;
    for (int ty = -range; ty <= range; ++ty)
      for (int tx = -range; tx <= range; ++tx) {
        const MotionVector mv{4 * tx, 4 * ty};
        const MotionCandidate cand =
            plane ? MotionCandidate::mpa(mv, *plane) : MotionCandidate::translational(mv);
        const double cost = static_cast<double>(residual(seq[1], predict_block(seq[0], blk, cand, kPred), blk).sad) +
                            scfg.lambda * mv_bits(cand);
        if (cost < best || (cost == best && mv.l1() < arg.l1())) best = cost, arg = mv;
      }
    CHECK(r.cost == best);
    CHECK(r.mv == arg);
  }
}

TEST_CASE("fractional refinement never loses to the integer optimum") {
  const auto seq = scene(SceneKind::Ground, W, H, 2);
  for (const Block blk : {Block{0, 48, 16, 16}, Block{64, 40, 16, 16}, Block{96, 8, 16, 16}}) {
    const auto coarse = search_plane(seq[1], seq[0], blk, ModelKind::Mpa, PlaneKind::TopBottom, kPred, config(2, 4, false));
    const auto fine = search_plane(seq[1], seq[0], blk, ModelKind::Mpa, PlaneKind::TopBottom, kPred, config(2, 4, true));
    CHECK(fine.cost <= coarse.cost);
    CHECK(std::abs(fine.mv.tx - coarse.mv.tx) <= 3);
    CHECK(std::abs(fine.mv.ty - coarse.mv.ty) <= 3);
  }
}

TEST_CASE("raising lambda never raises the chosen bits") {
  const auto seq = scene(SceneKind::Ground, W, H, 2);
  const double lambdas[] = {0.0625, 0.25, 1, 2, 4, 8, 16, 64, 256};
  for (const Block blk : {Block{0, 48, 16, 16}, Block{32, 40, 16, 16}, Block{64, 0, 16, 16}, Block{112, 24, 16, 16}}) {
    double previous = std::numeric_limits<double>::infinity();
    for (const double lambda : lambdas) {
      const RDDecision d = decide(seq[1], seq[0], blk, kPred, config(lambda, 3, false));
      REQUIRE(d.bits <= previous);
      REQUIRE(d.cost == doctest::Approx(d.distortion + lambda * d.bits));
      previous = d.bits;
    }
  }
}

TEST_CASE("decide_blocks is independent of the thread count") {
  const auto seq = scene(SceneKind::Ground, W, H, 2);
  std::vector<Block> blocks;
  for (int y = 0; y < H; y += 16)
    for (int x = 0; x < W; x += 16) blocks.push_back({x, y, 16, 16});
  const SearchConfig scfg = config(3, 3, true);
  const auto one = decide_blocks(seq[1], seq[0], blocks, kPred, scfg, {}, 1);
  const auto four = decide_blocks(seq[1], seq[0], blocks, kPred, scfg, {}, 4);
  REQUIRE(one.size() == blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    CHECK(one[i].best == four[i].best);
    CHECK(one[i].cost == four[i].cost);
    CHECK(one[i].per_candidate_log.size() == four[i].per_candidate_log.size());
  }
}

TEST_CASE("model set selection") {
  Rng rng(44);
  const FramePlane f = rng.noise_frame(W, H, 8);
  const RDDecision t = decide(f, f, {0, 0, 8, 8}, kPred, config(1, 2, false), ModelSet::translational_only());
  CHECK(t.per_candidate_log.size() == 1);
  const RDDecision m = decide(f, f, {0, 0, 8, 8}, kPred, config(1, 2, false), {false, true, {PlaneKind::TopBottom}});
  REQUIRE(m.per_candidate_log.size() == 1);
  CHECK(m.best.plane() == PlaneKind::TopBottom);
  CHECK_THROWS(decide(f, f, {0, 0, 8, 8}, kPred, config(1, 2, false), {false, true, {}}));
  CHECK_THROWS(search_plane(f, f, {0, 0, 8, 8}, ModelKind::Mpa, std::nullopt, kPred, config(1, 2, false)));
}

TEST_CASE("pure ERP scrolling is won by translation") {
  const auto seq = scene(SceneKind::Scroll, 256, 128, 2);
  const PredictionConfig pcfg{ProjectionConfig::erp(256, 128), Interpolator::Bilinear};
  const SearchConfig scfg = SearchConfig::for_qp(32, 4);
  for (int y = 0; y < 128; y += 32)
    for (int x = 0; x < 256; x += 48) {
      const RDDecision d = decide(seq[1], seq[0], {x, y, 16, 16}, pcfg, scfg);
      CHECK(d.best.model() == ModelKind::Translational);
      CHECK(d.distortion == 0);
    }
}

TEST_CASE("ground-plane motion near the pole is won by the top/bottom plane") {
  const auto seq = scene(SceneKind::Ground, 512, 256, 2);
  const PredictionConfig pcfg{ProjectionConfig::erp(512, 256), Interpolator::Bilinear};
  const SearchConfig scfg = SearchConfig::for_qp(32);
  int ground = 0, not_worse = 0;
  for (int y = 0; y < 256; y += 16)
    for (int x = 0; x < 512; x += 16) {
      const Block blk{x, y, 16, 16};
      if (!is_ground_block(blk, 256)) continue;
      const auto t = search_plane(seq[1], seq[0], blk, ModelKind::Translational, std::nullopt, pcfg, scfg);
      const auto m = search_plane(seq[1], seq[0], blk, ModelKind::Mpa, PlaneKind::TopBottom, pcfg, scfg);
      ++ground;
      not_worse += m.sad <= t.sad ? 1 : 0;
      if (y == 224) {
        // about 68 degrees south; the rendered plane motion is -4 * (1.5, -0.75) qpel
        const RDDecision d = decide(seq[1], seq[0], blk, pcfg, scfg);
        CHECK(d.best.plane() == PlaneKind::TopBottom);
        CHECK(std::abs(d.best.mv().tx + 6) <= 1);
        CHECK(std::abs(d.best.mv().ty - 3) <= 1);
      }
    }
  const double share = static_cast<double>(not_worse) / ground;
  MESSAGE("top/bottom SAD <= translational SAD on " << not_worse << " / " << ground << " ground blocks");
  CHECK(share >= 0.6);
  // Regression value measured on this scene: 157 / 160.
  CHECK(not_worse >= 157);
}
