#pragma once

// Encoder-side motion estimation: exhaustive integer search per model and
// plane, optional half/quarter-pel refinement, and rate-distortion selection
// among the translational model and the MPA motion planes.

#include "mpa/frame.hpp"
#include "mpa/motion_model.hpp"
#include "mpa/prediction.hpp"

#include <optional>
#include <span>
#include <vector>

namespace mpa {

/// 0.85 * 2^((qp - 12) / 3): the usual mode-decision multiplier of hybrid
/// codecs, defined for SSE distortion.
double lambda_for_qp(int qp);

struct SearchConfig {
  int range = 8;           // integer-pel radius, native model units
  double lambda = 1.0;     // multiplier on bits, SAD domain
  bool fractional_refine = true;
  int qp = 32;

  /// SAD-domain multiplier sqrt(lambda_for_qp(qp)).
  static SearchConfig for_qp(int qp, int range = 8, bool fractional_refine = true);

  void validate() const;
};

/// Length of the signed exp-Golomb code se(v).
int signed_exp_golomb_bits(int v);

/// Flag bits of the plane signaling tree: MPA on/off, then front/back or
/// not, then left/right vs top/bottom.
int model_flag_bits(ModelKind model, std::optional<PlaneKind> plane);

/// Rate proxy of a candidate: se(tx) + se(ty) + flag bits.
double mv_bits(const MotionVector& mv, ModelKind model, std::optional<PlaneKind> plane);
inline double mv_bits(const MotionCandidate& c) { return mv_bits(c.mv(), c.model(), c.plane()); }

struct PlaneSearchResult {
  MotionVector mv;
  double cost = 0;
  std::int64_t sad = 0;
  double bits = 0;
};

/// Best motion vector for one model (and plane when model == Mpa) by
/// SAD + lambda * bits. Ties go to the smaller |tx| + |ty|, then to the
/// first candidate in raster order.
PlaneSearchResult search_plane(const FramePlane& orig, const FramePlane& ref, const Block& blk, ModelKind model,
                               std::optional<PlaneKind> plane, const PredictionConfig& cfg,
                               const SearchConfig& scfg);

struct CandidateCost {
  MotionCandidate candidate;
  double cost = 0;
};

struct RDDecision {
  MotionCandidate best;
  double cost = 0;
  double distortion = 0;
  double bits = 0;
  std::vector<CandidateCost> per_candidate_log;
};

/// Which candidates decide() evaluates.
struct ModelSet {
  bool translational = true;
  bool mpa = true;
  std::vector<PlaneKind> planes{PlaneKind::FrontBack, PlaneKind::LeftRight, PlaneKind::TopBottom};

  static ModelSet translational_only() { return {true, false, {}}; }
  void validate() const;
};

/// Searches every enabled model/plane and keeps the cheapest. Equal costs go
/// to fewer bits, then to the earlier candidate (translational, front/back,
/// left/right, top/bottom).
RDDecision decide(const FramePlane& orig, const FramePlane& ref, const Block& blk, const PredictionConfig& cfg,
                  const SearchConfig& scfg, const ModelSet& models = {});

/// decide() for a set of blocks on up to `threads` workers (0: hardware
/// concurrency). Results are in block order and independent of `threads`.
std::vector<RDDecision> decide_blocks(const FramePlane& orig, const FramePlane& ref, std::span<const Block> blocks,
                                      const PredictionConfig& cfg, const SearchConfig& scfg,
                                      const ModelSet& models = {}, int threads = 0);

}  // namespace mpa
