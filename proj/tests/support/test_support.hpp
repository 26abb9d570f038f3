#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "digitsvm/features.hpp"
#include "digitsvm/optdigits_io.hpp"

namespace digitsvm::testing {

std::string data_path(const std::string& name);

// UCI preprocessed split, unscaled (counts 0..16).
Dataset uci_split(const std::string& name);

// The first `per_class` records of each digit, in file order.
Dataset first_per_class(const Dataset& data, std::size_t per_class);

// 32x32 bitmap whose 4x4 block counts equal `block`: each block is filled in
// raster order with as many on-pixels as its count.
RawBitmap bitmap_from_blocks(const BlockFeatures& block);
BlockFeatures blocks_of(const Sample& unscaled_sample);

// Raw-format text: header lines, then each bitmap as 32 rows and a " d" label line.
std::string raw_text(const std::vector<RawBitmap>& bitmaps, const std::vector<int>& labels,
                     const std::string& header = "synthetic raw records\n");

std::string bitmap_rows_text(const RawBitmap& bitmap);
std::vector<std::string> bitmap_rows(const RawBitmap& bitmap);

// A few random thick strokes inside a side x side canvas.
BinaryImage random_glyph(std::mt19937_64& rng, int side = 16);

// Ten Gaussian blobs in 18 dimensions (a moment18 dataset), one per digit.
Dataset gaussian_clusters(std::size_t per_class, double spread, std::uint64_t seed);

struct Binary2D {
  std::vector<FeatureVector> x;
  std::vector<int> y;
};

// n points uniform in [-1, 1]^2 with random +-1 labels, both classes present.
Binary2D random_tiny(std::mt19937_64& rng, std::size_t n);

// Linearly separable: labels by side of a random line, with a clear gap.
Binary2D random_separable(std::mt19937_64& rng, std::size_t per_class, double gap);

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  std::filesystem::path path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace digitsvm::testing
