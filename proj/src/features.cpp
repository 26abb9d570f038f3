#include "digitsvm/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <exception>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "digitsvm/errors.hpp"

namespace digitsvm {

BinaryImage::BinaryImage(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw std::invalid_argument("image dimensions must be positive");
  pixels_.assign(static_cast<std::size_t>(width) * height, 0);
}

BinaryImage BinaryImage::from_bitmap(const RawBitmap& bitmap) {
  BinaryImage img(kBitmapSide, kBitmapSide);
  for (int y = 0; y < kBitmapSide; ++y) {
    for (int x = 0; x < kBitmapSide; ++x) img.set(x, y, bitmap.at(y, x) != 0);
  }
  return img;
}

BinaryImage BinaryImage::from_strings(std::span<const std::string> rows) {
  if (rows.empty()) throw std::invalid_argument("image needs at least one row");
  BinaryImage img(static_cast<int>(rows.front().size()), static_cast<int>(rows.size()));
  for (int y = 0; y < img.height(); ++y) {
    if (static_cast<int>(rows[y].size()) != img.width()) {
      throw std::invalid_argument("ragged image rows");
    }
    for (int x = 0; x < img.width(); ++x) img.set(x, y, rows[y][x] == '1');
  }
  return img;
}

int BinaryImage::on_count() const { return std::accumulate(pixels_.begin(), pixels_.end(), 0); }

BinaryImage BinaryImage::rotated90() const {
  BinaryImage out(height_, width_);
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) out.set(height_ - 1 - y, x, at(x, y));
  }
  return out;
}

BinaryImage BinaryImage::mirrored() const {
  BinaryImage out(width_, height_);
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) out.set(width_ - 1 - x, y, at(x, y));
  }
  return out;
}

BinaryImage BinaryImage::shifted(int dx, int dy, int canvas_width, int canvas_height) const {
  BinaryImage out(canvas_width, canvas_height);
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const int nx = x + dx;
      const int ny = y + dy;
      if (at(x, y) && nx >= 0 && ny >= 0 && nx < canvas_width && ny < canvas_height) {
        out.set(nx, ny, true);
      }
    }
  }
  return out;
}

std::array<double, kMomentFeatureCount> MomentFeatures::concat() const {
  std::array<double, kMomentFeatureCount> out{};
  std::copy(hu.begin(), hu.end(), out.begin());
  std::copy(hu_thinned.begin(), hu_thinned.end(), out.begin() + 7);
  std::copy(affine.begin(), affine.end(), out.begin() + 14);
  return out;
}

std::array<double, 14> MomentFeatures::invariant14() const {
  std::array<double, 14> out{};
  std::copy(hu.begin(), hu.end(), out.begin());
  std::copy(hu_thinned.begin(), hu_thinned.end(), out.begin() + 7);
  return out;
}

RawMoments raw_moments(const BinaryImage& image) {
  RawMoments rm;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (!image.at(x, y)) continue;
      double xp = 1.0;
      for (int p = 0; p <= 3; ++p) {
        double yq = 1.0;
        for (int q = 0; p + q <= 3; ++q) {
          rm.m[p][q] += xp * yq;
          yq *= y;
        }
        xp *= x;
      }
    }
  }
  return rm;
}

MomentSet moments(const BinaryImage& image) {
  // Coordinates are taken relative to the bounding-box corner before any
  // floating-point work, which makes the central moments bit-identical under
  // integer translation.
  int x0 = image.width();
  int y0 = image.height();
  double count = 0.0;
  double sum_x = 0.0;
  double sum_y = 0.0;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (!image.at(x, y)) continue;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
    }
  }
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (!image.at(x, y)) continue;
      count += 1.0;
      sum_x += x - x0;
      sum_y += y - y0;
    }
  }
  if (count == 0.0) throw EmptyImageError();

  MomentSet ms;
  ms.m = raw_moments(image).m;
  const double cx = sum_x / count;
  const double cy = sum_y / count;
  ms.centroid_x = x0 + cx;
  ms.centroid_y = y0 + cy;

  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (!image.at(x, y)) continue;
      const double dx = (x - x0) - cx;
      const double dy = (y - y0) - cy;
      double xp = 1.0;
      for (int p = 0; p <= 3; ++p) {
        double yq = 1.0;
        for (int q = 0; p + q <= 3; ++q) {
          ms.mu[p][q] += xp * yq;
          yq *= dy;
        }
        xp *= dx;
      }
    }
  }
  ms.mu[0][0] = count;
  ms.mu[1][0] = 0.0;
  ms.mu[0][1] = 0.0;

  for (int p = 0; p <= 3; ++p) {
    for (int q = 0; p + q <= 3; ++q) {
      if (p + q < 2) continue;
      ms.eta[p][q] = ms.mu[p][q] / std::pow(count, 1.0 + (p + q) / 2.0);
    }
  }
  return ms;
}

HuMoments hu_from_moments(const MomentSet& ms) {
  const auto& e = ms.eta;
  const double n20 = e[2][0], n02 = e[0][2], n11 = e[1][1];
  const double n30 = e[3][0], n03 = e[0][3], n21 = e[2][1], n12 = e[1][2];

  const double a = n30 + n12;  // recurring sums and differences
  const double b = n21 + n03;
  const double c = n30 - 3.0 * n12;
  const double d = 3.0 * n21 - n03;

  HuMoments hu{};
  hu[0] = n20 + n02;
  hu[1] = (n20 - n02) * (n20 - n02) + 4.0 * n11 * n11;
  hu[2] = c * c + d * d;
  hu[3] = a * a + b * b;
  hu[4] = c * a * (a * a - 3.0 * b * b) + d * b * (3.0 * a * a - b * b);
  hu[5] = (n20 - n02) * (a * a - b * b) + 4.0 * n11 * a * b;
  hu[6] = d * a * (a * a - 3.0 * b * b) - c * b * (3.0 * a * a - b * b);
  return hu;
}

HuMoments hu_moments(const BinaryImage& image) { return hu_from_moments(moments(image)); }

AffineInvariants affine_from_moments(const MomentSet& ms) {
  const auto& u = ms.mu;
  const double m00 = u[0][0];
  const double u20 = u[2][0], u02 = u[0][2], u11 = u[1][1];
  const double u30 = u[3][0], u03 = u[0][3], u21 = u[2][1], u12 = u[1][2];

  AffineInvariants inv{};
  inv[0] = (u20 * u02 - u11 * u11) / std::pow(m00, 4);

  inv[1] = (u30 * u30 * u03 * u03 - 6.0 * u30 * u21 * u12 * u03 + 4.0 * u30 * u12 * u12 * u12 +
            4.0 * u21 * u21 * u21 * u03 - 3.0 * u21 * u21 * u12 * u12) /
           std::pow(m00, 10);

  inv[2] = (u20 * (u21 * u03 - u12 * u12) - u11 * (u30 * u03 - u21 * u12) +
            u02 * (u30 * u12 - u21 * u21)) /
           std::pow(m00, 7);

  const double u20_2 = u20 * u20, u02_2 = u02 * u02, u11_2 = u11 * u11;
  inv[3] = (u20_2 * u20 * u03 * u03 - 6.0 * u20_2 * u11 * u12 * u03 -
            6.0 * u20_2 * u02 * u21 * u03 + 9.0 * u20_2 * u02 * u12 * u12 +
            12.0 * u20 * u11_2 * u21 * u03 + 6.0 * u20 * u11 * u02 * u30 * u03 -
            18.0 * u20 * u11 * u02 * u21 * u12 - 8.0 * u11_2 * u11 * u30 * u03 -
            6.0 * u20 * u02_2 * u30 * u12 + 9.0 * u20 * u02_2 * u21 * u21 +
            12.0 * u11_2 * u02 * u30 * u12 - 6.0 * u11 * u02_2 * u30 * u21 +
            u02_2 * u02 * u30 * u30) /
           std::pow(m00, 11);
  return inv;
}

AffineInvariants affine_invariants(const BinaryImage& image) {
  return affine_from_moments(moments(image));
}

MomentFeatures extract_moment_features(const BinaryImage& image) {
  const MomentSet ms = moments(image);
  MomentFeatures mf;
  mf.hu = hu_from_moments(ms);
  mf.hu_thinned = hu_moments(thin(image));
  mf.affine = affine_from_moments(ms);
  return mf;
}

double log_compress(double v) { return std::copysign(std::log1p(std::abs(v)), v); }

FeatureVector moment_feature_vector(const MomentFeatures& mf, bool log_compressed) {
  const auto all = mf.concat();
  FeatureVector out(all.begin(), all.end());
  if (log_compressed) {
    for (double& v : out) v = log_compress(v);
  }
  return out;
}

std::vector<FeatureVector> moment_features_batch(const std::vector<RawBitmap>& bitmaps,
                                                 bool log_compressed) {
  std::vector<FeatureVector> out(bitmaps.size());
  std::vector<std::exception_ptr> errors(bitmaps.size());
  const auto n = static_cast<std::ptrdiff_t>(bitmaps.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = moment_feature_vector(
          extract_moment_features(BinaryImage::from_bitmap(bitmaps[i])), log_compressed);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

void write_feature_csv_line(std::ostream& out, std::span<const double> values, int label) {
  std::ostringstream line;
  line.precision(17);
  for (double v : values) line << v << ',';
  line << label << '\n';
  out << line.str();
}

Dataset parse_moment_csv(std::istream& in) {
  Dataset data;
  data.kind = FeatureKind::moment18;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != kMomentFeatureCount + 1) {
      throw FormatError(line_no, "expected 19 fields, got " + std::to_string(fields.size()));
    }
    Sample sample;
    for (std::size_t k = 0; k <= kMomentFeatureCount; ++k) {
      std::string_view f = fields[k];
      while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
      while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.remove_suffix(1);
      const char* end = f.data() + f.size();
      if (k < kMomentFeatureCount) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(f.data(), end, v);
        if (f.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
          throw FormatError(line_no, "field " + std::to_string(k + 1) + " is not a finite number");
        }
        sample.features.push_back(v);
      } else {
        int label = -1;
        auto [ptr, ec] = std::from_chars(f.data(), end, label);
        if (f.empty() || ec != std::errc{} || ptr != end || label < 0 || label >= kNumClasses) {
          throw FormatError(line_no, "label must be a digit 0-9");
        }
        sample.label = label;
      }
    }
    data.samples.push_back(std::move(sample));
  }
  return data;
}

Dataset load_moment_dataset(const std::string& path, bool log_compressed) {
  Dataset data;
  data.kind = FeatureKind::moment18;
  if (looks_like_raw(path)) {
    const RawFile raw = load_raw_file(path);
    std::vector<RawBitmap> bitmaps;
    for (const auto& rec : raw.records) bitmaps.push_back(rec.bitmap);
    auto features = moment_features_batch(bitmaps, log_compressed);
    for (std::size_t i = 0; i < features.size(); ++i) {
      data.samples.push_back({std::move(features[i]), raw.records[i].label});
    }
    return data;
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  data = parse_moment_csv(in);
  if (log_compressed) {
    for (auto& s : data.samples) {
      for (double& v : s.features) v = log_compress(v);
    }
  }
  return data;
}

}  // namespace digitsvm
