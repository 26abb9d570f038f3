#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "digitsvm/optdigits_io.hpp"

namespace digitsvm {

// Binary image with pixel centres at integer coordinates: x = column, y = row,
// origin top-left.
class BinaryImage {
 public:
  BinaryImage() = default;
  BinaryImage(int width, int height);

  static BinaryImage from_bitmap(const RawBitmap& bitmap);
  // Rows of '0'/'1' (any other character counts as off); all rows must share a length.
  static BinaryImage from_strings(std::span<const std::string> rows);

  int width() const { return width_; }
  int height() const { return height_; }
  bool at(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x] != 0; }
  void set(int x, int y, bool on) { pixels_[static_cast<std::size_t>(y) * width_ + x] = on ? 1 : 0; }
  int on_count() const;
  bool empty() const { return on_count() == 0; }

  // 90 degrees clockwise; width and height swap.
  BinaryImage rotated90() const;
  // Left-right mirror.
  BinaryImage mirrored() const;
  // Copy placed at (dx, dy) inside a canvas of the given size; pixels falling
  // outside are dropped.
  BinaryImage shifted(int dx, int dy, int canvas_width, int canvas_height) const;

  bool operator==(const BinaryImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// Moments up to order 3. Arrays are indexed [p][q]; entries with p+q > 3 are unused.
struct RawMoments {
  std::array<std::array<double, 4>, 4> m{};
};

struct MomentSet {
  std::array<std::array<double, 4>, 4> m{};    // raw, absolute coordinates
  std::array<std::array<double, 4>, 4> mu{};   // central
  std::array<std::array<double, 4>, 4> eta{};  // normalized central, 2 <= p+q <= 3
  double centroid_x = 0.0;
  double centroid_y = 0.0;
};

using HuMoments = std::array<double, 7>;
using AffineInvariants = std::array<double, 4>;

inline constexpr std::size_t kMomentFeatureCount = 18;

struct MomentFeatures {
  HuMoments hu{};
  HuMoments hu_thinned{};
  AffineInvariants affine{};

  std::array<double, kMomentFeatureCount> concat() const;
  // The 14 moment invariants without the affine block.
  std::array<double, 14> invariant14() const;
};

RawMoments raw_moments(const BinaryImage& image);

// Throws EmptyImageError for an all-zero image.
MomentSet moments(const BinaryImage& image);

HuMoments hu_from_moments(const MomentSet& ms);
HuMoments hu_moments(const BinaryImage& image);

AffineInvariants affine_from_moments(const MomentSet& ms);
AffineInvariants affine_invariants(const BinaryImage& image);

// One-pixel-wide 8-connected skeleton. Zhang-Suen two-subiteration thinning run
// in a canonical dihedral orientation of the cropped shape, so the result
// commutes with translation, 90-degree rotation and mirroring. Components that
// would vanish keep one pixel. Idempotent.
BinaryImage thin(const BinaryImage& image);

MomentFeatures extract_moment_features(const BinaryImage& image);

// sign(v) * log(1 + |v|)
double log_compress(double v);

FeatureVector moment_feature_vector(const MomentFeatures& mf, bool log_compressed = false);

// OpenMP over bitmaps; rethrows the failure with the lowest index.
std::vector<FeatureVector> moment_features_batch(const std::vector<RawBitmap>& bitmaps,
                                                 bool log_compressed);

// Moment feature CSV: 18 reals then a label per line; line numbers in errors.
Dataset parse_moment_csv(std::istream& in);

// Raw bitmap files are featurized; moment CSV files are read as written.
// log_compressed applies log_compress to every value in either case.
Dataset load_moment_dataset(const std::string& path, bool log_compressed);

// One CSV line: 18 values with 17 significant digits, then the label.
void write_feature_csv_line(std::ostream& out, std::span<const double> values, int label);

}  // namespace digitsvm
