#pragma once

// Raw planar YUV 4:2:0 files. Only luma is consumed; chroma planes are
// skipped on read and written as mid-gray.

#include "mpa/frame.hpp"

#include <filesystem>
#include <stdexcept>
#include <vector>

namespace mpa {

class YuvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SequenceSpec {
  std::filesystem::path path;
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  int frame_count = 0;

  /// Bytes of one 4:2:0 frame (luma + two quarter-size chroma planes).
  std::uintmax_t frame_bytes() const;

  /// Format checks shared by reader and writer. The ERP aspect and the
  /// two-frame minimum are enforced only when `erp` is set.
  void validate(bool erp = true) const;
};

/// Reads every frame of the file. 8-bit: one byte per sample; 10-bit: two
/// bytes little-endian.
std::vector<FramePlane> load_yuv(const SequenceSpec& spec, bool erp = true);

void save_yuv(const std::filesystem::path& path, const std::vector<FramePlane>& frames);

}  // namespace mpa
