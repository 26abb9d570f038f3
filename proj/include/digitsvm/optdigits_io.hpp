#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace digitsvm {

inline constexpr int kBitmapSide = 32;
inline constexpr int kBlockSide = 4;
inline constexpr int kGridSide = kBitmapSide / kBlockSide;
inline constexpr int kBlockFeatureCount = kGridSide * kGridSide;
inline constexpr int kMaxBlockCount = kBlockSide * kBlockSide;
inline constexpr int kNumClasses = 10;
inline constexpr double kBlockScaleDivisor = 16.0;

using FeatureVector = std::vector<double>;

// 32x32 binary digit image, row-major, 0 = off / 1 = on.
struct RawBitmap {
  std::array<std::uint8_t, kBitmapSide * kBitmapSide> pixels{};

  std::uint8_t at(int row, int col) const { return pixels[row * kBitmapSide + col]; }
  void set(int row, int col, bool on) { pixels[row * kBitmapSide + col] = on ? 1 : 0; }
  int on_count() const;

  bool operator==(const RawBitmap&) const = default;
};

// Per-block on-pixel counts, row-major 8x8, each in [0, 16].
struct BlockFeatures {
  std::array<int, kBlockFeatureCount> counts{};

  bool operator==(const BlockFeatures&) const = default;
};

enum class FeatureKind { block64, moment18 };

std::string_view to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(std::string_view name);
std::size_t feature_dimension(FeatureKind kind);

struct Sample {
  FeatureVector features;
  int label = 0;
};

struct Dataset {
  std::vector<Sample> samples;
  FeatureKind kind = FeatureKind::block64;

  std::size_t size() const { return samples.size(); }
  std::size_t dimension() const { return samples.empty() ? 0 : samples.front().features.size(); }
  std::vector<FeatureVector> features() const;
  std::vector<int> labels() const;

  // Throws std::invalid_argument when empty, ragged, mis-sized for kind, or mislabelled.
  void validate() const;
};

struct RawRecord {
  RawBitmap bitmap;
  int label = 0;
  std::size_t first_line = 0;  // 1-based line of the first bitmap row
};

struct RawFile {
  std::vector<std::string> header;
  std::vector<RawRecord> records;
};

// UCI optdigits-orig layout: optional free-text header, then records of 32
// bitmap rows followed by a label line. Throws FormatError with the offending line.
RawFile parse_raw(std::istream& in);

// UCI preprocessed layout: 64 counts in [0,16] and a label, comma separated.
// Features are stored unscaled.
Dataset parse_preprocessed(std::istream& in);

// Parses exactly 32 rows of 32 '0'/'1' characters (row index reported as line).
RawBitmap bitmap_from_rows(std::span<const std::string> rows);

// A standalone bitmap file: 32 bitmap lines, surrounding blank lines ignored.
RawBitmap parse_bitmap(std::istream& in);

BlockFeatures downsample(const RawBitmap& bitmap);

FeatureVector scale_features(const BlockFeatures& block, double divisor = kBlockScaleDivisor);

// One preprocessed-format line (no newline): "c0,...,c63,label".
std::string format_preprocessed_line(const BlockFeatures& block, int label);

// Reads a dataset from either layout (sniffed from content). Raw files become
// block64 via downsample; scaling is applied when divisor != 1.
Dataset load_block_dataset(const std::string& path, double divisor);

RawFile load_raw_file(const std::string& path);

// True when the file contains at least one 32-char bitmap row and no CSV line
// precedes it.
bool looks_like_raw(const std::string& path);

}  // namespace digitsvm
