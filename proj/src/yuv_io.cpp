#include "mpa/yuv_io.hpp"

#include <fstream>
#include <string>

namespace mpa {
namespace {

int bytes_per_sample(int bit_depth) { return bit_depth > 8 ? 2 : 1; }

std::uintmax_t chroma_bytes(int width, int height, int bit_depth) {
  return 2ULL * static_cast<std::uintmax_t>(width / 2) * static_cast<std::uintmax_t>(height / 2) *
         static_cast<std::uintmax_t>(bytes_per_sample(bit_depth));
}

}  // namespace

std::uintmax_t SequenceSpec::frame_bytes() const {
  const auto luma = static_cast<std::uintmax_t>(width) * static_cast<std::uintmax_t>(height) *
                    static_cast<std::uintmax_t>(bytes_per_sample(bit_depth));
  return luma + chroma_bytes(width, height, bit_depth);
}

void SequenceSpec::validate(bool erp) const {
  if (width <= 0 || height <= 0 || width % 2 != 0 || height % 2 != 0)
    throw YuvError("yuv: dimensions must be positive and even for 4:2:0, got " + std::to_string(width) + "x" +
                   std::to_string(height));
  if (bit_depth != 8 && bit_depth != 10) throw YuvError("yuv: bit depth must be 8 or 10");
  if (erp && width != 2 * height) throw YuvError("yuv: ERP sequences require width = 2 * height");
  if (erp && frame_count < 2) throw YuvError("yuv: at least 2 frames required");
  if (frame_count < 1) throw YuvError("yuv: frame count must be positive");
}

std::vector<FramePlane> load_yuv(const SequenceSpec& spec, bool erp) {
  spec.validate(erp);
  std::error_code ec;
  const auto size = std::filesystem::file_size(spec.path, ec);
  if (ec) throw YuvError("yuv: cannot stat " + spec.path.string() + ": " + ec.message());
  const auto expected = spec.frame_bytes() * static_cast<std::uintmax_t>(spec.frame_count);
  if (size != expected)
    throw YuvError("yuv: size mismatch for " + spec.path.string() + ": expected " + std::to_string(expected) +
                   " bytes, found " + std::to_string(size));

  std::ifstream in(spec.path, std::ios::binary);
  if (!in) throw YuvError("yuv: cannot open " + spec.path.string());

  const int bps = bytes_per_sample(spec.bit_depth);
  const auto skip = static_cast<std::streamoff>(chroma_bytes(spec.width, spec.height, spec.bit_depth));
  std::vector<unsigned char> row(static_cast<std::size_t>(spec.width * bps));
  std::vector<FramePlane> frames;
  frames.reserve(static_cast<std::size_t>(spec.frame_count));

  for (int f = 0; f < spec.frame_count; ++f) {
    FramePlane frame(spec.width, spec.height, spec.bit_depth);
    for (int y = 0; y < spec.height; ++y) {
      if (!in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size())))
        throw YuvError("yuv: short read in frame " + std::to_string(f));
      for (int x = 0; x < spec.width; ++x) {
        const auto i = static_cast<std::size_t>(x * bps);
        frame(x, y) = bps == 1 ? row[i] : static_cast<std::uint16_t>(row[i] | (row[i + 1] << 8));
      }
    }
    in.seekg(skip, std::ios::cur);
    try {
      frame.validate();
    } catch (const std::invalid_argument& e) {
      throw YuvError("yuv: frame " + std::to_string(f) + ": " + e.what());
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

void save_yuv(const std::filesystem::path& path, const std::vector<FramePlane>& frames) {
  if (frames.empty()) throw YuvError("yuv: nothing to write");
  const FramePlane& first = frames.front();
  SequenceSpec spec{path, first.width(), first.height(), first.bit_depth, static_cast<int>(frames.size())};
  spec.validate(false);
  for (const FramePlane& frame : frames)
    if (!frame.same_format(first)) throw YuvError("yuv: frames differ in format");

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw YuvError("yuv: cannot create " + path.string());

  const int bps = bytes_per_sample(spec.bit_depth);
  std::vector<unsigned char> row(static_cast<std::size_t>(spec.width * bps));
  const auto gray = static_cast<std::uint16_t>(1 << (spec.bit_depth - 1));
  std::vector<unsigned char> chroma(static_cast<std::size_t>(chroma_bytes(spec.width, spec.height, spec.bit_depth)));
  for (std::size_t i = 0; i < chroma.size(); i += static_cast<std::size_t>(bps)) {
    chroma[i] = static_cast<unsigned char>(gray & 0xFF);
    if (bps == 2) chroma[i + 1] = static_cast<unsigned char>(gray >> 8);
  }

  for (const FramePlane& frame : frames) {
    for (int y = 0; y < spec.height; ++y) {
      for (int x = 0; x < spec.width; ++x) {
        const std::uint16_t v = frame(x, y);
        const auto i = static_cast<std::size_t>(x * bps);
        row[i] = static_cast<unsigned char>(v & 0xFF);
        if (bps == 2) row[i + 1] = static_cast<unsigned char>(v >> 8);
      }
      out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    out.write(reinterpret_cast<const char*>(chroma.data()), static_cast<std::streamsize>(chroma.size()));
  }
  if (!out) throw YuvError("yuv: write failed for " + path.string());
}

}  // namespace mpa
