#include "test_support.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace digitsvm::testing {

std::string data_path(const std::string& name) { return std::string(DIGITSVM_DATA_DIR) + "/" + name; }

Dataset uci_split(const std::string& name) {
  std::ifstream in(data_path(name));
  if (!in) throw std::runtime_error("missing data file " + data_path(name));
  return parse_preprocessed(in);
}

Dataset first_per_class(const Dataset& data, std::size_t per_class) {
  Dataset out;
  out.kind = data.kind;
  std::array<std::size_t, kNumClasses> taken{};
  for (const auto& s : data.samples) {
    if (taken[s.label] < per_class) {
      ++taken[s.label];
      out.samples.push_back(s);
    }
  }
  return out;
}

RawBitmap bitmap_from_blocks(const BlockFeatures& block) {
  RawBitmap bitmap;
  for (int br = 0; br < kGridSide; ++br) {
    for (int bc = 0; bc < kGridSide; ++bc) {
      int left = block.counts[br * kGridSide + bc];
      for (int r = 0; r < kBlockSide && left > 0; ++r) {
        for (int c = 0; c < kBlockSide && left > 0; ++c, --left) {
          bitmap.set(br * kBlockSide + r, bc * kBlockSide + c, true);
        }
      }
    }
  }
  return bitmap;
}

BlockFeatures blocks_of(const Sample& s) {
  BlockFeatures b{};
  for (int k = 0; k < kBlockFeatureCount; ++k) b.counts[k] = static_cast<int>(s.features[k]);
  return b;
}

std::vector<std::string> bitmap_rows(const RawBitmap& bitmap) {
  std::vector<std::string> rows;
  for (int r = 0; r < kBitmapSide; ++r) {
    std::string row;
    for (int c = 0; c < kBitmapSide; ++c) row += bitmap.at(r, c) ? '1' : '0';
    rows.push_back(row);
  }
  return rows;
}

std::string bitmap_rows_text(const RawBitmap& bitmap) {
  std::string text;
  for (const auto& row : bitmap_rows(bitmap)) text += row + "\n";
  return text;
}

std::string raw_text(const std::vector<RawBitmap>& bitmaps, const std::vector<int>& labels,
                     const std::string& header) {
  std::string text = header;
  for (std::size_t i = 0; i < bitmaps.size(); ++i) {
    text += bitmap_rows_text(bitmaps[i]);
    text += " " + std::to_string(labels[i]) + "\n";
  }
  return text;
}

BinaryImage random_glyph(std::mt19937_64& rng, int side) {
  std::uniform_int_distribution<int> coord(2, side - 3);
  std::uniform_int_distribution<int> strokes(2, 4);
  std::uniform_int_distribution<int> thick(0, 1);
  BinaryImage img(side, side);
  const int count = strokes(rng);
  for (int s = 0; s < count; ++s) {
    const int x0 = coord(rng), y0 = coord(rng), x1 = coord(rng), y1 = coord(rng);
    const int t = thick(rng);
    const int steps = std::max({std::abs(x1 - x0), std::abs(y1 - y0), 1});
    for (int k = 0; k <= steps; ++k) {
      const int x = x0 + static_cast<int>(std::lround(static_cast<double>(x1 - x0) * k / steps));
      const int y = y0 + static_cast<int>(std::lround(static_cast<double>(y1 - y0) * k / steps));
      for (int dy = 0; dy <= t; ++dy) {
        for (int dx = 0; dx <= t; ++dx) img.set(x + dx, y + dy, true);
      }
    }
  }
  return img;
}

Dataset gaussian_clusters(std::size_t per_class, double spread, std::uint64_t seed) {
  const std::size_t dim = kMomentFeatureCount;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, spread);
  std::uniform_real_distribution<double> centre(-1.0, 1.0);
  std::vector<FeatureVector> centres(kNumClasses, FeatureVector(dim));
  for (auto& c : centres) {
    for (double& v : c) v = centre(rng);
  }
  Dataset data;
  data.kind = FeatureKind::moment18;
  for (std::size_t i = 0; i < per_class; ++i) {
    for (int k = 0; k < kNumClasses; ++k) {
      FeatureVector x = centres[k];
      for (double& v : x) v += noise(rng);
      data.samples.push_back({std::move(x), k});
    }
  }
  return data;
}

Binary2D random_tiny(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  Binary2D d;
  for (std::size_t i = 0; i < n; ++i) {
    d.x.push_back({u(rng), u(rng)});
    d.y.push_back(coin(rng) ? 1 : -1);
  }
  d.y[0] = 1;
  d.y[1] = -1;
  return d;
}

Binary2D random_separable(std::mt19937_64& rng, std::size_t per_class, double gap) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  const double a = angle(rng);
  const double nx = std::cos(a), ny = std::sin(a);
  const double offset = 0.3 * u(rng);
  Binary2D d;
  std::size_t pos = 0, neg = 0;
  while (pos < per_class || neg < per_class) {
    const double x = u(rng), y = u(rng);
    const double s = nx * x + ny * y - offset;
    if (s >= gap / 2 && pos < per_class) {
      d.x.push_back({x, y});
      d.y.push_back(1);
      ++pos;
    } else if (s <= -gap / 2 && neg < per_class) {
      d.x.push_back({x, y});
      d.y.push_back(-1);
      ++neg;
    }
  }
  return d;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("digitsvm-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace digitsvm::testing
