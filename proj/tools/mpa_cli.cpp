// mpa: command-line front end.
//
//   mpa synth   --scene ground --out scene.yuv
//   mpa run     --scene ground --qp 22 27 32 37 --out results/ground
//   mpa run     --input clip.yuv --width 1024 --height 512 --frames 8
//   mpa metrics psnr|wspsnr --width W --height H a.yuv b.yuv
//   mpa metrics bd anchor.json test.json

#include "mpa/experiment.hpp"
#include "mpa/metrics.hpp"
#include "mpa/synth.hpp"
#include "mpa/yuv_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace mpa;

namespace {

struct SourceOptions {
  std::string scene = "ground";
  std::string input;
  int width = 512;
  int height = 256;
  int bit_depth = 8;
  int frames = 8;
  std::uint64_t seed = 1;
};

void add_source_options(CLI::App* cmd, SourceOptions& o, bool with_input) {
  cmd->add_option("--width", o.width, "Frame width in pixels")->capture_default_str();
  cmd->add_option("--height", o.height, "Frame height in pixels")->capture_default_str();
  cmd->add_option("--bit-depth", o.bit_depth, "8 or 10")->check(CLI::IsMember({8, 10}))->capture_default_str();
  cmd->add_option("--frames", o.frames, "Number of frames")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--seed", o.seed, "Scene seed")->capture_default_str();
  auto* scene = cmd->add_option("--scene", o.scene, "Synthetic scene: ground, scroll, static")
                    ->check(CLI::IsMember({"ground", "scroll", "static"}))
                    ->capture_default_str();
  if (with_input) cmd->add_option("--input", o.input, "Raw YUV 4:2:0 input instead of a scene")->excludes(scene);
}

std::vector<FramePlane> load_source(const SourceOptions& o) {
  if (!o.input.empty()) return load_yuv({o.input, o.width, o.height, o.bit_depth, o.frames});
  SceneSpec spec;
  spec.kind = *scene_from_string(o.scene);
  spec.width = o.width;
  spec.height = o.height;
  spec.frames = o.frames;
  spec.bit_depth = o.bit_depth;
  spec.seed = o.seed;
  return synth_sequence(spec);
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const std::string& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ','))
      if (!part.empty()) out.push_back(part);
  }
  return out;
}

ModelSet parse_models(const std::vector<std::string>& models, const std::vector<std::string>& planes) {
  ModelSet set{false, false, {}};
  for (const std::string& m : split_list(models)) {
    if (m == "translational") set.translational = true;
    else if (m == "mpa") set.mpa = true;
    else throw CLI::ValidationError("--models", "unknown model '" + m + "' (translational, mpa)");
  }
  for (const std::string& p : split_list(planes)) {
    const auto kind = plane_from_string(p);
    if (!kind) throw CLI::ValidationError("--planes", "unknown plane '" + p + "' (fb, lr, tb)");
    if (std::find(set.planes.begin(), set.planes.end(), *kind) == set.planes.end()) set.planes.push_back(*kind);
  }
  return set;
}

std::string format_db(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

int frames_in_file(const fs::path& path, int width, int height, int bit_depth) {
  const SequenceSpec probe{path, width, height, bit_depth, 1};
  probe.validate(false);
  const auto size = fs::file_size(path);
  if (size == 0 || size % probe.frame_bytes() != 0)
    throw YuvError("yuv: " + path.string() + " is not a whole number of " + std::to_string(width) + "x" +
                   std::to_string(height) + " frames");
  return static_cast<int>(size / probe.frame_bytes());
}

// Rate/quality points of a BD input: a run summary (total_bits against
// mean_psnr or mean_ws_psnr per qp) or a plain "rate,quality" text file.
std::vector<RDPoint> read_rd_points(const fs::path& path, bool weighted) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<RDPoint> points;
  if (path.extension() == ".json") {
    const auto doc = nlohmann::json::parse(in);
    for (const auto& s : doc.at("summary")) {
      const auto& q = s.at(weighted ? "mean_ws_psnr" : "mean_psnr");
      if (!q.is_number()) throw std::runtime_error(path.string() + ": lossless summary cannot enter a BD fit");
      points.push_back({s.at("total_bits").get<double>(), q.get<double>()});
    }
  } else {
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ls(line);
      RDPoint p;
      if (!(ls >> p.rate >> p.quality)) throw std::runtime_error(path.string() + ": bad line '" + line + "'");
      points.push_back(p);
    }
  }
  std::sort(points.begin(), points.end(), [](const RDPoint& a, const RDPoint& b) { return a.quality < b.quality; });
  return points;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Motion-plane-adaptive motion modeling for ERP video"};
  app.require_subcommand(1);

  // synth
  SourceOptions synth_src;
  std::string synth_out = "scene.yuv";
  auto* synth = app.add_subcommand("synth", "Render a synthetic ERP sequence to raw YUV 4:2:0");
  add_source_options(synth, synth_src, false);
  synth->add_option("--out", synth_out, "Output file")->capture_default_str();

  // run
  SourceOptions run_src;
  ExperimentConfig cfg;
  std::vector<std::string> models{"translational,mpa"};
  std::vector<std::string> planes{"fb,lr,tb"};
  std::string interp = "bilinear";
  std::string out_prefix = "mpa_run";
  std::string dump_pred;
  bool no_frac = false;
  auto* run = app.add_subcommand("run", "Predict every frame from its predecessor and report per block");
  add_source_options(run, run_src, true);
  run->add_option("--block-size", cfg.block_size, "Block size: 8, 16, 32 or 64")
      ->check(CLI::IsMember({8, 16, 32, 64}))
      ->capture_default_str();
  run->add_option("--search-range", cfg.search_range, "Integer search radius")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run->add_option("--qp", cfg.qps, "One or more QPs; each sets lambda")->capture_default_str();
  run->add_option("--models", models, "Comma list of translational, mpa")->capture_default_str();
  run->add_option("--planes", planes, "Comma list of fb, lr, tb")->capture_default_str();
  run->add_option("--interp", interp, "bilinear or cubic")
      ->check(CLI::IsMember({"bilinear", "cubic"}))
      ->capture_default_str();
  run->add_flag("--no-frac", no_frac, "Skip half/quarter-pel refinement");
  run->add_option("--threads", cfg.threads, "Worker threads, 0 for all cores")->capture_default_str();
  run->add_option("--out", out_prefix, "Writes <out>.csv and <out>.json")->capture_default_str();
  run->add_option("--dump-pred", dump_pred, "Write predicted frames (raw YUV 4:2:0, gray chroma); one file per qp");

  // metrics
  auto* metrics = app.add_subcommand("metrics", "Quality and rate comparisons between files");
  metrics->require_subcommand(1);
  int m_width = 512, m_height = 256, m_bit_depth = 8;
  std::string file_a, file_b;
  std::vector<CLI::App*> quality_cmds;
  for (const auto& [name, help] : {std::pair{"psnr", "Per-frame PSNR of two raw YUV files"},
                                   std::pair{"wspsnr", "Per-frame WS-PSNR of two raw ERP YUV files"}}) {
    auto* cmd = metrics->add_subcommand(name, help);
    cmd->add_option("--width", m_width)->capture_default_str();
    cmd->add_option("--height", m_height)->capture_default_str();
    cmd->add_option("--bit-depth", m_bit_depth)->check(CLI::IsMember({8, 10}))->capture_default_str();
    cmd->add_option("a", file_a, "Reference file")->required()->check(CLI::ExistingFile);
    cmd->add_option("b", file_b, "Test file")->required()->check(CLI::ExistingFile);
    quality_cmds.push_back(cmd);
  }
  bool bd_weighted = false;
  auto* bd = metrics->add_subcommand("bd", "BD-rate of a test curve against an anchor curve");
  bd->add_option("anchor", file_a, "Run JSON or rate,quality text file")->required()->check(CLI::ExistingFile);
  bd->add_option("test", file_b, "Run JSON or rate,quality text file")->required()->check(CLI::ExistingFile);
  bd->add_flag("--ws", bd_weighted, "Use WS-PSNR from run summaries");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      const auto frames = load_source(synth_src);
      ensure_parent(synth_out);
      save_yuv(synth_out, frames);
      std::cout << "wrote " << frames.size() << " frames to " << synth_out << '\n';
      return 0;
    }

    if (*run) {
      cfg.models = parse_models(models, planes);
      cfg.interpolator = interp == "cubic" ? Interpolator::Cubic : Interpolator::Bilinear;
      cfg.fractional_refine = !no_frac;
      cfg.keep_predictions = !dump_pred.empty();
      const auto sequence = load_source(run_src);
      const ExperimentReport report = run_experiment(sequence, cfg);

      const fs::path csv_path = out_prefix + ".csv", json_path = out_prefix + ".json";
      ensure_parent(csv_path);
      std::ofstream csv(csv_path, std::ios::binary), json(json_path, std::ios::binary);
      write_csv(report, csv);
      write_json(report, json);
      if (!csv || !json) throw std::runtime_error("cannot write " + out_prefix + ".{csv,json}");
      if (!dump_pred.empty()) {
        // One file per qp aligned with the source: frame 0 has no reference
        // and is copied through.
        const std::size_t per_qp = sequence.size() - 1;
        for (std::size_t q = 0; q < cfg.qps.size(); ++q) {
          fs::path path = dump_pred;
          if (cfg.qps.size() > 1)
            path.replace_filename(path.stem().string() + "_qp" + std::to_string(cfg.qps[q]) + path.extension().string());
          std::vector<FramePlane> frames{sequence.front()};
          for (std::size_t k = 0; k < per_qp; ++k) frames.push_back(report.predictions[q * per_qp + k]);
          ensure_parent(path);
          save_yuv(path, frames);
        }
      }

      for (const int qp : cfg.qps) {
        double p = 0, base = 0, share = 0;
        int n = 0;
        bool baseline = true;
        for (const FrameAggregate& f : report.frames) {
          if (f.qp != qp) continue;
          p += f.psnr;
          share += f.mpa_share;
          if (f.baseline_psnr) base += *f.baseline_psnr;
          else baseline = false;
          ++n;
        }
        std::cout << "qp " << qp << ": psnr " << format_db(p / n) << " dB";
        if (baseline) std::cout << " (translational-only " << format_db(base / n) << " dB)";
        std::cout << ", mpa share " << std::fixed << std::setprecision(3) << share / n << '\n';
      }
      std::cout << "wrote " << csv_path.string() << " and " << json_path.string() << '\n';
      return 0;
    }

    if (*bd) {
      const double delta = bd_rate(read_rd_points(file_a, bd_weighted), read_rd_points(file_b, bd_weighted));
      std::cout << std::fixed << std::setprecision(4) << delta << '\n';
      return 0;
    }

    for (CLI::App* cmd : quality_cmds) {
      if (!*cmd) continue;
      const bool weighted = cmd->get_name() == "wspsnr";
      const int n = frames_in_file(file_a, m_width, m_height, m_bit_depth);
      if (frames_in_file(file_b, m_width, m_height, m_bit_depth) != n)
        throw std::runtime_error("files hold different frame counts");
      const auto a = load_yuv({file_a, m_width, m_height, m_bit_depth, n}, weighted);
      const auto b = load_yuv({file_b, m_width, m_height, m_bit_depth, n}, weighted);
      double sum = 0;
      for (int k = 0; k < n; ++k) {
        const double v = weighted ? ws_psnr(a[k], b[k]) : psnr(a[k], b[k]);
        sum += v;
        std::cout << "frame " << k << ' ' << format_db(v) << '\n';
      }
      std::cout << "mean " << format_db(sum / n) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "mpa: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
