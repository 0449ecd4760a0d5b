#include "sbf/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

namespace sbf {
namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  bool done() const { return pos_ >= bytes_.size(); }
  unsigned char peek() const { return static_cast<unsigned char>(bytes_[pos_]); }
  unsigned char take() { return static_cast<unsigned char>(bytes_[pos_++]); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  // Skips whitespace and '#' comments running to end of line.
  void skip_separators() {
    while (!done()) {
      if (std::isspace(peek())) {
        ++pos_;
      } else if (peek() == '#') {
        while (!done() && peek() != '\n' && peek() != '\r') ++pos_;
      } else {
        break;
      }
    }
  }

  long read_int(const char* what) {
    skip_separators();
    const std::size_t start = pos_;
    if (done()) throw ParseError(std::string("unexpected end of data reading ") + what, pos_);
    if (!std::isdigit(peek())) throw ParseError(std::string("expected ") + what, pos_);
    long v = 0;
    while (!done() && std::isdigit(peek())) {
      v = v * 10 + (take() - '0');
      if (v > 1'000'000'000L) throw ParseError(std::string(what) + " is too large", start);
    }
    if (!done() && !std::isspace(peek()) && peek() != '#')
      throw ParseError(std::string("malformed ") + what, pos_);
    return v;
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

long round_half_away(double v) {
  return static_cast<long>(std::round(v));
}

}  // namespace

PgmImage parse_pgm(std::string_view bytes) {
  Cursor in(bytes);
  if (in.remaining() < 2 || bytes[0] != 'P')
    throw ParseError("missing PGM magic number", 0);
  const char kind = bytes[1];
  if (kind != '2' && kind != '5')
    throw ParseError(std::string("unsupported magic number P") + kind, 0);
  in.take();
  in.take();

  in.skip_separators();
  const std::size_t width_at = in.pos();
  const long width = in.read_int("width");
  const long height = in.read_int("height");
  in.skip_separators();
  const std::size_t maxval_at = in.pos();
  const long maxval = in.read_int("maxval");
  if (width <= 0 || height <= 0)
    throw ParseError("image dimensions must be positive", width_at);
  if (maxval < 1 || maxval > 65535)
    throw ParseError("maxval must lie in [1, 65535]", maxval_at);
  if (width * height > 1L << 28)
    throw ParseError("image is too large", width_at);

  const std::size_t count = static_cast<std::size_t>(width) * height;
  std::vector<double> samples(count);
  if (kind == '2') {
    for (std::size_t i = 0; i < count; ++i) {
      in.skip_separators();
      const std::size_t at = in.pos();
      const long v = in.read_int("sample");
      if (v > maxval) throw ParseError("sample exceeds maxval", at);
      samples[i] = static_cast<double>(v);
    }
  } else {
    // Exactly one whitespace byte separates the header from the raster.
    if (in.done() || !std::isspace(in.peek()))
      throw ParseError("expected whitespace after maxval", in.pos());
    in.take();
    const std::size_t bps = maxval < 256 ? 1 : 2;
    if (in.remaining() < count * bps)
      throw ParseError("truncated raster: need " + std::to_string(count * bps) +
                           " bytes, have " + std::to_string(in.remaining()),
                       in.pos());
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t at = in.pos();
      long v = in.take();
      if (bps == 2) v = (v << 8) | in.take();
      if (v > maxval) throw ParseError("sample exceeds maxval", at);
      samples[i] = static_cast<double>(v);
    }
  }
  return {Image(static_cast<int>(width), static_cast<int>(height), std::move(samples)),
          static_cast<int>(maxval)};
}

PgmImage load_pgm(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(file)),
                    std::istreambuf_iterator<char>());
  return parse_pgm(bytes);
}

std::string encode_pgm(const Image& img, int maxval, PgmFormat format) {
  if (img.empty()) throw InvalidParameter("cannot encode an empty image");
  if (maxval < 1 || maxval > 65535)
    throw InvalidParameter("maxval must lie in [1, 65535]");
  std::ostringstream out;
  out << (format == PgmFormat::Ascii ? "P2" : "P5") << '\n'
      << img.width() << ' ' << img.height() << '\n'
      << maxval << '\n';
  const auto quantize = [maxval](double v) {
    return std::clamp(round_half_away(v), 0L, static_cast<long>(maxval));
  };
  if (format == PgmFormat::Ascii) {
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x)
        out << (x ? " " : "") << quantize(img(x, y));
      out << '\n';
    }
  } else {
    for (double v : img.samples()) {
      const long q = quantize(v);
      if (maxval >= 256) out.put(static_cast<char>((q >> 8) & 0xff));
      out.put(static_cast<char>(q & 0xff));
    }
  }
  return out.str();
}

void save_pgm(const Image& img, const std::filesystem::path& path, int maxval,
              PgmFormat format) {
  const std::string bytes = encode_pgm(img, maxval, format);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path.string() + " for writing");
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw IoError("write failed for " + path.string());
}

void save_raw_f64(const Image& img, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path.string() + " for writing");
  for (double v : img.samples()) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    char le[8];
    for (int b = 0; b < 8; ++b) le[b] = static_cast<char>((bits >> (8 * b)) & 0xff);
    file.write(le, 8);
  }
  if (!file) throw IoError("write failed for " + path.string());
}

Image load_raw_f64(const std::filesystem::path& path, int width, int height) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path.string());
  Image img(width, height);
  for (double& v : img.samples()) {
    unsigned char le[8];
    if (!file.read(reinterpret_cast<char*>(le), 8))
      throw IoError("truncated raw image " + path.string());
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(le[b]) << (8 * b);
    std::memcpy(&v, &bits, sizeof bits);
  }
  return img;
}

}  // namespace sbf
