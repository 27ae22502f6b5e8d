#pragma once

// Open-loop experiment: every frame is predicted from the previous original
// frame on a uniform block grid, each block choosing its candidate by RD
// cost. Produces per-block records and per-frame aggregates.

#include "mpa/frame.hpp"
#include "mpa/interpolation.hpp"
#include "mpa/search.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace mpa {

struct ExperimentConfig {
  int block_size = 16;
  int search_range = 8;
  std::vector<int> qps{32};
  ModelSet models;
  Interpolator interpolator = Interpolator::Bilinear;
  bool fractional_refine = true;
  bool keep_predictions = false;
  int threads = 0;  // 0: hardware concurrency

  void validate() const;
};

struct BlockRecord {
  int qp = 0;
  int frame = 0;  // index of the predicted (original) frame, >= 1
  int block = 0;  // raster index in the block grid
  int x0 = 0;
  int y0 = 0;
  MotionCandidate candidate;
  std::int64_t sad = 0;
  std::int64_t sse = 0;
  double ws_sse = 0;  // SSE with normalized ERP row weights
  double bits = 0;
  double cost = 0;
};

struct FrameAggregate {
  int qp = 0;
  int frame = 0;
  double psnr = 0;
  double ws_psnr = 0;
  double mpa_share = 0;
  double mean_sad = 0;
  double bits = 0;
  // Translational-only prediction of the same frame, present when the model
  // set contains MPA and translational candidates.
  std::optional<double> baseline_psnr;
  std::optional<double> baseline_ws_psnr;
  std::optional<double> baseline_mean_sad;
};

struct ExperimentReport {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  int frame_count = 0;
  ExperimentConfig config;
  std::vector<BlockRecord> records;       // sorted by (qp, frame, block)
  std::vector<FrameAggregate> frames;     // sorted by (qp, frame)
  std::vector<FramePlane> predictions;    // per (qp, frame) when requested

  int blocks_per_frame() const { return (width / config.block_size) * (height / config.block_size); }
};

ExperimentReport run_experiment(const std::vector<FramePlane>& sequence, const ExperimentConfig& cfg);

/// Recomputes the PSNR / WS-PSNR / share / SAD / bits fields of one frame
/// from its block records.
FrameAggregate aggregate_records(const ExperimentReport& report, int qp, int frame);

void write_csv(const ExperimentReport& report, std::ostream& out);
void write_json(const ExperimentReport& report, std::ostream& out);

}  // namespace mpa
