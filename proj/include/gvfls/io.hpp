#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

#include "gvfls/grid.hpp"

namespace gvfls {

enum class IoErrorKind {
  open_failed,
  malformed_header,
  truncated_payload,
  unsupported_magic,
  bad_magic,
  size_mismatch,
  write_failed,
};

inline const char* to_string(IoErrorKind k) {
  switch (k) {
    case IoErrorKind::open_failed: return "cannot open file";
    case IoErrorKind::malformed_header: return "malformed header";
    case IoErrorKind::truncated_payload: return "truncated payload";
    case IoErrorKind::unsupported_magic: return "unsupported magic";
    case IoErrorKind::bad_magic: return "bad magic";
    case IoErrorKind::size_mismatch: return "size mismatch between header and payload";
    case IoErrorKind::write_failed: return "write failed";
  }
  return "io error";
}

class IoError : public std::runtime_error {
 public:
  IoError(IoErrorKind kind, const std::filesystem::path& path, const std::string& detail = {})
      : std::runtime_error(std::string(to_string(kind)) + ": " + path.string() +
                           (detail.empty() ? "" : " (" + detail + ")")),
        kind_(kind) {}
  IoErrorKind kind() const { return kind_; }

 private:
  IoErrorKind kind_;
};

namespace detail {

inline std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoErrorKind::open_failed, path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void dump(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(IoErrorKind::open_failed, path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(IoErrorKind::write_failed, path);
}

/// Cursor over a PGM header: skips whitespace and '#' comments between tokens.
class PgmHeaderReader {
 public:
  PgmHeaderReader(const std::vector<unsigned char>& bytes, const std::filesystem::path& path)
      : bytes_(bytes), path_(path) {}

  unsigned long next_uint(const char* what) {
    skip_space_and_comments();
    std::size_t start = pos_;
    unsigned long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 0xFFFFFFFFul) throw IoError(IoErrorKind::malformed_header, path_, std::string(what) + " overflows");
      ++pos_;
    }
    if (pos_ == start) throw IoError(IoErrorKind::malformed_header, path_, std::string("expected ") + what);
    return value;
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  /// Binary rasters start after exactly one whitespace byte following maxval.
  void consume_single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
      throw IoError(IoErrorKind::malformed_header, path_, "missing separator before raster");
    ++pos_;
  }

  std::size_t pos() const { return pos_; }
  void seek(std::size_t p) { pos_ = p; }

 private:
  const std::vector<unsigned char>& bytes_;
  const std::filesystem::path& path_;
  std::size_t pos_ = 0;
};

inline void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

inline std::uint32_t get_u32(const unsigned char* p) {
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 | std::uint32_t(p[3]) << 24;
}

inline void put_f32(std::vector<unsigned char>& out, float f) { put_u32(out, std::bit_cast<std::uint32_t>(f)); }
inline float get_f32(const unsigned char* p) { return std::bit_cast<float>(get_u32(p)); }

}  // namespace detail

/// Reads a P2 (ASCII) or P5 (binary) graymap; intensities are rescaled to [0,1].
inline ScalarField read_pgm(const std::filesystem::path& path, double spacing = 1.0) {
  const auto bytes = detail::slurp(path);
  if (bytes.size() < 2 || bytes[0] != 'P') throw IoError(IoErrorKind::unsupported_magic, path);
  const bool binary = bytes[1] == '5';
  if (!binary && bytes[1] != '2')
    throw IoError(IoErrorKind::unsupported_magic, path, std::string("P") + char(bytes[1]));

  detail::PgmHeaderReader hdr(bytes, path);
  hdr.seek(2);
  const auto width = hdr.next_uint("width");
  const auto height = hdr.next_uint("height");
  const auto maxval = hdr.next_uint("maxval");
  if (width == 0 || height == 0) throw IoError(IoErrorKind::malformed_header, path, "zero dimension");
  if (maxval == 0 || maxval > 65535) throw IoError(IoErrorKind::malformed_header, path, "maxval out of range");

  const GridSpec grid{width, height, spacing};
  try {
    grid.validate_storage();
  } catch (const ValidationError& e) {
    throw IoError(IoErrorKind::malformed_header, path, e.what());
  }
  std::vector<double> values(grid.size());
  const double scale = 1.0 / static_cast<double>(maxval);

  if (binary) {
    hdr.consume_single_space();
    const std::size_t bps = maxval > 255 ? 2 : 1;
    const std::size_t need = grid.size() * bps;
    if (bytes.size() - hdr.pos() < need)
      throw IoError(IoErrorKind::truncated_payload, path,
                    std::to_string(bytes.size() - hdr.pos()) + " of " + std::to_string(need) + " bytes");
    const unsigned char* p = bytes.data() + hdr.pos();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      unsigned long s = bps == 2 ? (unsigned long)(p[2 * i]) << 8 | p[2 * i + 1] : p[i];
      if (s > maxval) throw IoError(IoErrorKind::malformed_header, path, "sample exceeds maxval");
      values[i] = static_cast<double>(s) * scale;
    }
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      hdr.skip_space_and_comments();
      if (hdr.pos() >= bytes.size())
        throw IoError(IoErrorKind::truncated_payload, path,
                      std::to_string(i) + " of " + std::to_string(grid.size()) + " samples");
      const auto s = hdr.next_uint("sample");
      if (s > maxval) throw IoError(IoErrorKind::malformed_header, path, "sample exceeds maxval");
      values[i] = static_cast<double>(s) * scale;
    }
  }
  return ScalarField(grid, std::move(values));
}

/// Quantizes [0,1] intensities to 8 bits (round half up, clamped).
inline unsigned char quantize8(double v) {
  const double q = std::floor(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5);
  return static_cast<unsigned char>(q);
}

/// Writes a binary P5 graymap with maxval 255.
inline void write_pgm(const ScalarField& field, const std::filesystem::path& path) {
  const std::string header =
      "P5\n" + std::to_string(field.width()) + " " + std::to_string(field.height()) + "\n255\n";
  std::vector<unsigned char> bytes(header.begin(), header.end());
  bytes.reserve(bytes.size() + field.size());
  for (double v : field.values()) bytes.push_back(quantize8(v));
  detail::dump(path, bytes);
}

/// Binary field layout: "GVF1", width u32, height u32, spacing f32, then
/// width*height f32 samples, row-major, all little-endian.
inline void write_field(const ScalarField& field, const std::filesystem::path& path) {
  std::vector<unsigned char> bytes{'G', 'V', 'F', '1'};
  bytes.reserve(16 + 4 * field.size());
  detail::put_u32(bytes, static_cast<std::uint32_t>(field.width()));
  detail::put_u32(bytes, static_cast<std::uint32_t>(field.height()));
  detail::put_f32(bytes, static_cast<float>(field.spacing()));
  for (double v : field.values()) detail::put_f32(bytes, static_cast<float>(v));
  detail::dump(path, bytes);
}

inline ScalarField read_field(const std::filesystem::path& path) {
  const auto bytes = detail::slurp(path);
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "GVF1", 4) != 0) throw IoError(IoErrorKind::bad_magic, path);
  if (bytes.size() < 16) throw IoError(IoErrorKind::size_mismatch, path, "header shorter than 16 bytes");
  const std::uint32_t width = detail::get_u32(bytes.data() + 4);
  const std::uint32_t height = detail::get_u32(bytes.data() + 8);
  const float spacing = detail::get_f32(bytes.data() + 12);
  const std::size_t n = std::size_t(width) * height;
  if (bytes.size() - 16 != 4 * n)
    throw IoError(IoErrorKind::size_mismatch, path,
                  "header declares " + std::to_string(n) + " samples, payload holds " +
                      std::to_string((bytes.size() - 16) / 4.0));
  const GridSpec grid{width, height, spacing};
  try {
    grid.validate_storage();
  } catch (const ValidationError& e) {
    throw IoError(IoErrorKind::malformed_header, path, e.what());
  }
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = detail::get_f32(bytes.data() + 16 + 4 * i);
  return ScalarField(grid, std::move(values));
}

}  // namespace gvfls
