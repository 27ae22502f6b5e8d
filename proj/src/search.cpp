#include "mpa/search.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace mpa {

double lambda_for_qp(int qp) { return 0.85 * std::pow(2.0, (qp - 12) / 3.0); }

SearchConfig SearchConfig::for_qp(int qp, int range, bool fractional_refine) {
  SearchConfig s;
  s.range = range;
  s.qp = qp;
  s.lambda = std::sqrt(lambda_for_qp(qp));
  s.fractional_refine = fractional_refine;
  return s;
}

void SearchConfig::validate() const {
  if (range < 1) throw std::invalid_argument("search: range must be >= 1");
  if (!(lambda > 0) || !std::isfinite(lambda)) throw std::invalid_argument("search: lambda must be > 0");
}

void ModelSet::validate() const {
  if (!translational && !(mpa && !planes.empty()))
    throw std::invalid_argument("search: model set enables no candidate");
}

int signed_exp_golomb_bits(int v) {
  // se(v) maps v > 0 to 2v - 1 and v <= 0 to -2v, then codes ue(k): 2 * floor(log2(k + 1)) + 1 bits.
  const auto k = static_cast<std::uint64_t>(v > 0 ? 2LL * v - 1 : -2LL * v);
  return 2 * (std::bit_width(k + 1) - 1) + 1;
}

int model_flag_bits(ModelKind model, std::optional<PlaneKind> plane) {
  if (model == ModelKind::Translational) return 1;
  return plane == PlaneKind::FrontBack ? 2 : 3;
}

double mv_bits(const MotionVector& mv, ModelKind model, std::optional<PlaneKind> plane) {
  return signed_exp_golomb_bits(mv.tx) + signed_exp_golomb_bits(mv.ty) + model_flag_bits(model, plane);
}

namespace {

class PlaneSearcher {
 public:
  PlaneSearcher(const FramePlane& orig, const FramePlane& ref, const Block& blk, ModelKind model,
                std::optional<PlaneKind> plane, const PredictionConfig& cfg, const SearchConfig& scfg)
      : orig_(orig),
        ref_(ref),
        blk_(blk),
        model_(model),
        plane_(model == ModelKind::Mpa ? plane : std::nullopt),
        cfg_(cfg),
        scfg_(scfg),
        field_(blk, cfg.projection, plane_),
        shifts_(static_cast<std::size_t>(field_.subblock_count())) {}

  PlaneSearchResult evaluate(const MotionVector& mv) {
    field_.shifts(mv, shifts_);
    const SampleRaster pred = compensate(ref_, blk_, shifts_, cfg_.interpolator);
    PlaneSearchResult r;
    r.mv = mv;
    r.sad = residual(orig_, pred, blk_).sad;
    r.bits = mv_bits(mv, model_, plane_);
    r.cost = static_cast<double>(r.sad) + scfg_.lambda * r.bits;
    return r;
  }

  static bool better(const PlaneSearchResult& a, const PlaneSearchResult& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.mv.l1() < b.mv.l1();
  }

  PlaneSearchResult run() {
    const int r = scfg_.range;
    PlaneSearchResult best = evaluate({-r * kQuarterPel, -r * kQuarterPel});
    for (int ty = -r; ty <= r; ++ty)
      for (int tx = -r; tx <= r; ++tx) {
        if (tx == -r && ty == -r) continue;
        const PlaneSearchResult c = evaluate({tx * kQuarterPel, ty * kQuarterPel});
        if (better(c, best)) best = c;
      }

    if (scfg_.fractional_refine) {
      const int bound = r * kQuarterPel;
      for (const int step : {2, 1}) {
        const MotionVector center = best.mv;
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const MotionVector mv{center.tx + dx * step, center.ty + dy * step};
            if (std::abs(mv.tx) > bound || std::abs(mv.ty) > bound) continue;
            const PlaneSearchResult c = evaluate(mv);
            if (better(c, best)) best = c;
          }
      }
    }
    return best;
  }

 private:
  const FramePlane& orig_;
  const FramePlane& ref_;
  Block blk_;
  ModelKind model_;
  std::optional<PlaneKind> plane_;
  const PredictionConfig& cfg_;
  const SearchConfig& scfg_;
  SubblockField field_;
  std::vector<Vector2<double>> shifts_;
};

}  // namespace

PlaneSearchResult search_plane(const FramePlane& orig, const FramePlane& ref, const Block& blk, ModelKind model,
                               std::optional<PlaneKind> plane, const PredictionConfig& cfg,
                               const SearchConfig& scfg) {
  scfg.validate();
  if (!orig.same_format(ref)) throw std::invalid_argument("search: original and reference differ in format");
  validate_block(blk, orig.width(), orig.height());
  if (model == ModelKind::Mpa && !plane) throw std::invalid_argument("search: MPA requires a motion plane");
  return PlaneSearcher(orig, ref, blk, model, plane, cfg, scfg).run();
}

RDDecision decide(const FramePlane& orig, const FramePlane& ref, const Block& blk, const PredictionConfig& cfg,
                  const SearchConfig& scfg, const ModelSet& models) {
  models.validate();

  std::vector<MotionCandidate> kinds;
  if (models.translational) kinds.push_back(MotionCandidate::translational({}));
  if (models.mpa)
    for (const PlaneKind p : kAllPlanes)
      if (std::find(models.planes.begin(), models.planes.end(), p) != models.planes.end())
        kinds.push_back(MotionCandidate::mpa({}, p));

  RDDecision out;
  bool have = false;
  for (const MotionCandidate& kind : kinds) {
    const PlaneSearchResult r = search_plane(orig, ref, blk, kind.model(), kind.plane(), cfg, scfg);
    const MotionCandidate cand = kind.with_mv(r.mv);
    out.per_candidate_log.push_back({cand, r.cost});
    if (!have || r.cost < out.cost || (r.cost == out.cost && r.bits < out.bits)) {
      out.best = cand;
      out.cost = r.cost;
      out.distortion = static_cast<double>(r.sad);
      out.bits = r.bits;
      have = true;
    }
  }
  return out;
}

std::vector<RDDecision> decide_blocks(const FramePlane& orig, const FramePlane& ref, std::span<const Block> blocks,
                                      const PredictionConfig& cfg, const SearchConfig& scfg, const ModelSet& models,
                                      int threads) {
  std::vector<RDDecision> out(blocks.size());
  detail::parallel_for(static_cast<int>(blocks.size()), threads, [&](int i) {
    out[static_cast<std::size_t>(i)] = decide(orig, ref, blocks[static_cast<std::size_t>(i)], cfg, scfg, models);
  });
  return out;
}

}  // namespace mpa
