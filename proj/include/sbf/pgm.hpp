#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sbf/image.hpp"

namespace sbf {

// Malformed or truncated PGM data; `offset` is the byte position at fault.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class PgmFormat { Ascii, Binary };  // P2, P5

struct PgmImage {
  Image image;
  int maxval = 255;
};

PgmImage parse_pgm(std::string_view bytes);
PgmImage load_pgm(const std::filesystem::path& path);

/// Samples are rounded half away from zero and clamped to [0, maxval].
/// Binary rasters use one byte per sample for maxval < 256, else two bytes
/// big-endian.
std::string encode_pgm(const Image& img, int maxval = 255,
                       PgmFormat format = PgmFormat::Binary);
void save_pgm(const Image& img, const std::filesystem::path& path,
              int maxval = 255, PgmFormat format = PgmFormat::Binary);

// Raw little-endian float64 samples, row-major, no header.
void save_raw_f64(const Image& img, const std::filesystem::path& path);
Image load_raw_f64(const std::filesystem::path& path, int width, int height);

}  // namespace sbf
