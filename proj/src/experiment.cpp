#include "mpa/experiment.hpp"

#include "mpa/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mpa {
namespace {

std::vector<Block> block_grid(int width, int height, int size) {
  std::vector<Block> blocks;
  for (int y = 0; y < height; y += size)
    for (int x = 0; x < width; x += size) blocks.push_back({x, y, size, size});
  return blocks;
}

void paste(FramePlane& frame, const Block& blk, const SampleRaster& pred) {
  frame.samples.block(blk.y0, blk.x0, blk.h, blk.w) = pred;
}

double weighted_sse(const FramePlane& orig, const SampleRaster& pred, const Block& blk,
                    const std::vector<double>& weights) {
  const auto o = orig.samples.block(blk.y0, blk.x0, blk.h, blk.w).cast<double>();
  const Eigen::ArrayXd rows = (o - pred.cast<double>()).square().rowwise().sum();
  double acc = 0.0;
  for (int y = 0; y < blk.h; ++y) acc += weights[static_cast<std::size_t>(blk.y0 + y)] * rows(y);
  return acc;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

nlohmann::json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

nlohmann::json json_optional(const std::optional<double>& v) {
  return v ? json_number(*v) : nlohmann::json(nullptr);
}

const char* interpolator_name(Interpolator i) { return i == Interpolator::Cubic ? "cubic" : "bilinear"; }

}  // namespace

void ExperimentConfig::validate() const {
  if (!is_valid_block_size(block_size)) throw std::invalid_argument("experiment: block size must be 8, 16, 32 or 64");
  if (search_range < 1) throw std::invalid_argument("experiment: search range must be >= 1");
  if (qps.empty()) throw std::invalid_argument("experiment: at least one qp required");
  models.validate();
}

ExperimentReport run_experiment(const std::vector<FramePlane>& sequence, const ExperimentConfig& cfg) {
  cfg.validate();
  if (sequence.size() < 2) throw std::invalid_argument("experiment: at least 2 frames required");
  const FramePlane& first = sequence.front();
  for (const FramePlane& f : sequence)
    if (!f.same_format(first)) throw std::invalid_argument("experiment: frames differ in format");
  if (first.width() % cfg.block_size != 0 || first.height() % cfg.block_size != 0)
    throw std::invalid_argument("experiment: frame dimensions must be multiples of the block size");

  ExperimentReport report;
  report.width = first.width();
  report.height = first.height();
  report.bit_depth = first.bit_depth;
  report.frame_count = static_cast<int>(sequence.size());
  report.config = cfg;

  const PredictionConfig pcfg{ProjectionConfig::erp(report.width, report.height), cfg.interpolator};
  const std::vector<Block> blocks = block_grid(report.width, report.height, cfg.block_size);
  const std::vector<double> weights = erp_row_weights(report.height);
  const bool with_baseline = cfg.models.translational && cfg.models.mpa && !cfg.models.planes.empty();

  for (const int qp : cfg.qps) {
    const SearchConfig scfg = SearchConfig::for_qp(qp, cfg.search_range, cfg.fractional_refine);
    for (std::size_t k = 1; k < sequence.size(); ++k) {
      const FramePlane& ref = sequence[k - 1];
      const FramePlane& orig = sequence[k];
      const std::vector<RDDecision> decisions =
          decide_blocks(orig, ref, blocks, pcfg, scfg, cfg.models, cfg.threads);

      FramePlane predicted(report.width, report.height, report.bit_depth);
      FramePlane baseline(report.width, report.height, report.bit_depth);
      std::int64_t baseline_sad = 0;

      for (std::size_t b = 0; b < blocks.size(); ++b) {
        const Block& blk = blocks[b];
        const RDDecision& d = decisions[b];
        const SampleRaster pred = predict_block(ref, blk, d.best, pcfg);
        const Distortion dist = residual(orig, pred, blk);
        paste(predicted, blk, pred);

        BlockRecord rec;
        rec.qp = qp;
        rec.frame = static_cast<int>(k);
        rec.block = static_cast<int>(b);
        rec.x0 = blk.x0;
        rec.y0 = blk.y0;
        rec.candidate = d.best;
        rec.sad = dist.sad;
        rec.sse = dist.sse;
        rec.ws_sse = weighted_sse(orig, pred, blk, weights);
        rec.bits = d.bits;
        rec.cost = d.cost;
        report.records.push_back(rec);

        if (with_baseline) {
          // The translational entry of the log is exactly the translational-only decision.
          const MotionCandidate& trans = d.per_candidate_log.front().candidate;
          const SampleRaster bpred = trans == d.best ? pred : predict_block(ref, blk, trans, pcfg);
          baseline_sad += residual(orig, bpred, blk).sad;
          paste(baseline, blk, bpred);
        }
      }

      FrameAggregate agg = aggregate_records(report, qp, static_cast<int>(k));
      agg.psnr = psnr(orig, predicted);
      agg.ws_psnr = ws_psnr(orig, predicted);
      if (with_baseline) {
        agg.baseline_psnr = psnr(orig, baseline);
        agg.baseline_ws_psnr = ws_psnr(orig, baseline);
        agg.baseline_mean_sad = static_cast<double>(baseline_sad) / static_cast<double>(blocks.size());
      }
      report.frames.push_back(agg);
      if (cfg.keep_predictions) report.predictions.push_back(std::move(predicted));
    }
  }
  return report;
}

FrameAggregate aggregate_records(const ExperimentReport& report, int qp, int frame) {
  FrameAggregate agg;
  agg.qp = qp;
  agg.frame = frame;
  double sse = 0.0, ws_sse = 0.0, sad = 0.0;
  int count = 0, mpa = 0;
  for (const BlockRecord& r : report.records) {
    if (r.qp != qp || r.frame != frame) continue;
    sse += static_cast<double>(r.sse);
    ws_sse += r.ws_sse;
    sad += static_cast<double>(r.sad);
    agg.bits += r.bits;
    mpa += r.candidate.model() == ModelKind::Mpa ? 1 : 0;
    ++count;
  }
  if (count == 0) throw std::invalid_argument("experiment: no records for the requested frame");
  agg.psnr = psnr_from_sse(sse, static_cast<double>(report.width) * report.height, report.bit_depth);
  // Row weights sum to one, so the weighted MSE divides by the width only.
  agg.ws_psnr = psnr_from_sse(ws_sse, static_cast<double>(report.width), report.bit_depth);
  agg.mpa_share = static_cast<double>(mpa) / count;
  agg.mean_sad = sad / count;
  return agg;
}

void write_csv(const ExperimentReport& report, std::ostream& out) {
  out << "qp,frame,block,x0,y0,model,plane,mv_x,mv_y,sad,sse,ws_sse,bits,cost\n";
  for (const BlockRecord& r : report.records) {
    const auto plane = r.candidate.plane();
    out << r.qp << ',' << r.frame << ',' << r.block << ',' << r.x0 << ',' << r.y0 << ','
        << to_string(r.candidate.model()) << ',' << (plane ? to_string(*plane) : "none") << ','
        << r.candidate.mv().tx << ',' << r.candidate.mv().ty << ',' << r.sad << ',' << r.sse << ','
        << format_double(r.ws_sse) << ',' << format_double(r.bits) << ',' << format_double(r.cost) << '\n';
  }
}

void write_json(const ExperimentReport& report, std::ostream& out) {
  using nlohmann::json;
  const ExperimentConfig& c = report.config;

  json planes = json::array();
  for (const PlaneKind p : c.models.planes) planes.push_back(to_string(p));
  json config = {{"block_size", c.block_size},
                 {"search_range", c.search_range},
                 {"qps", c.qps},
                 {"translational", c.models.translational},
                 {"mpa", c.models.mpa},
                 {"planes", planes},
                 {"interpolator", interpolator_name(c.interpolator)},
                 {"fractional_refine", c.fractional_refine}};

  json frames = json::array();
  for (const FrameAggregate& f : report.frames) {
    json j = {{"qp", f.qp},
              {"frame", f.frame},
              {"psnr", json_number(f.psnr)},
              {"ws_psnr", json_number(f.ws_psnr)},
              {"mpa_share", f.mpa_share},
              {"mean_sad", f.mean_sad},
              {"bits", f.bits}};
    if (f.baseline_psnr) {
      j["baseline"] = {{"psnr", json_optional(f.baseline_psnr)},
                       {"ws_psnr", json_optional(f.baseline_ws_psnr)},
                       {"mean_sad", json_optional(f.baseline_mean_sad)}};
    }
    frames.push_back(j);
  }

  json summary = json::array();
  for (const int qp : c.qps) {
    double psnr_sum = 0, ws_sum = 0, share = 0, sad = 0, bits = 0, delta = 0;
    int n = 0, planes_tb = 0, planes_fb = 0, planes_lr = 0, blocks = 0;
    bool baseline = true;
    for (const FrameAggregate& f : report.frames) {
      if (f.qp != qp) continue;
      psnr_sum += f.psnr;
      ws_sum += f.ws_psnr;
      share += f.mpa_share;
      sad += f.mean_sad;
      bits += f.bits;
      if (f.baseline_psnr) delta += f.psnr - *f.baseline_psnr;
      else baseline = false;
      ++n;
    }
    for (const BlockRecord& r : report.records) {
      if (r.qp != qp) continue;
      ++blocks;
      if (r.candidate.plane() == PlaneKind::TopBottom) ++planes_tb;
      if (r.candidate.plane() == PlaneKind::FrontBack) ++planes_fb;
      if (r.candidate.plane() == PlaneKind::LeftRight) ++planes_lr;
    }
    json s = {{"qp", qp},
              {"lambda", SearchConfig::for_qp(qp).lambda},
              {"frames", n},
              {"blocks", blocks},
              {"mean_psnr", json_number(psnr_sum / n)},
              {"mean_ws_psnr", json_number(ws_sum / n)},
              {"mpa_share", share / n},
              {"plane_counts", {{"front_back", planes_fb}, {"left_right", planes_lr}, {"top_bottom", planes_tb}}},
              {"mean_sad", sad / n},
              {"total_bits", bits}};
    if (baseline && n > 0) s["mean_psnr_delta_vs_translational"] = json_number(delta / n);
    summary.push_back(s);
  }

  const json doc = {{"width", report.width},
                    {"height", report.height},
                    {"bit_depth", report.bit_depth},
                    {"frame_count", report.frame_count},
                    {"blocks_per_frame", report.blocks_per_frame()},
                    {"config", config},
                    {"frames", frames},
                    {"summary", summary}};
  out << doc.dump(2) << '\n';
}

}  // namespace mpa
