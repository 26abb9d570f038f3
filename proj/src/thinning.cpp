#include <algorithm>
#include <array>
#include <optional>
#include <vector>

#include "digitsvm/features.hpp"

namespace digitsvm {

namespace {

struct Cropped {
  BinaryImage image;
  int x0 = 0;
  int y0 = 0;
};

std::optional<Cropped> crop(const BinaryImage& img) {
  int x0 = img.width(), y0 = img.height(), x1 = -1, y1 = -1;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!img.at(x, y)) continue;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
  if (x1 < 0) return std::nullopt;
  Cropped c{BinaryImage(x1 - x0 + 1, y1 - y0 + 1), x0, y0};
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) c.image.set(x - x0, y - y0, img.at(x, y));
  }
  return c;
}

// k in [0, 8): k % 4 clockwise quarter turns, followed by a mirror when k >= 4.
BinaryImage dihedral(const BinaryImage& img, int k) {
  BinaryImage out = img;
  for (int r = 0; r < k % 4; ++r) out = out.rotated90();
  if (k >= 4) out = out.mirrored();
  return out;
}

BinaryImage inverse_dihedral(const BinaryImage& img, int k) {
  BinaryImage out = k >= 4 ? img.mirrored() : img;
  for (int r = 0; r < (4 - k % 4) % 4; ++r) out = out.rotated90();
  return out;
}

std::vector<std::uint8_t> shape_key(const BinaryImage& img) {
  std::vector<std::uint8_t> key;
  key.reserve(static_cast<std::size_t>(img.width()) * img.height() + 8);
  // Height and width first so differently shaped candidates order consistently.
  for (int v : {img.height(), img.width()}) {
    for (int s = 24; s >= 0; s -= 8) key.push_back(static_cast<std::uint8_t>((v >> s) & 0xff));
  }
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) key.push_back(img.at(x, y) ? 1 : 0);
  }
  return key;
}

int canonical_transform(const BinaryImage& img) {
  int best = 0;
  auto best_key = shape_key(img);
  for (int k = 1; k < 8; ++k) {
    auto key = shape_key(dihedral(img, k));
    if (key < best_key) {
      best_key = std::move(key);
      best = k;
    }
  }
  return best;
}

// 8-connected component label per pixel (-1 for background).
std::vector<int> label_components(const BinaryImage& img, int& count) {
  const int w = img.width(), h = img.height();
  std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
  std::vector<std::pair<int, int>> stack;
  count = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!img.at(x, y) || label[y * w + x] >= 0) continue;
      label[y * w + x] = count;
      stack.push_back({x, y});
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx, ny = cy + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            if (!img.at(nx, ny) || label[ny * w + nx] >= 0) continue;
            label[ny * w + nx] = count;
            stack.push_back({nx, ny});
          }
        }
      }
      ++count;
    }
  }
  return label;
}

// One Zhang-Suen subiteration on an image with a clear one-pixel border.
bool zhang_suen_subiteration(BinaryImage& img, bool first) {
  const int w = img.width(), h = img.height();
  std::vector<std::uint8_t> mark(static_cast<std::size_t>(w) * h, 0);
  bool any = false;
  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      if (!img.at(x, y)) continue;
      // P2..P9 clockwise from north.
      const std::array<int, 8> p = {img.at(x, y - 1),     img.at(x + 1, y - 1), img.at(x + 1, y),
                                    img.at(x + 1, y + 1), img.at(x, y + 1),     img.at(x - 1, y + 1),
                                    img.at(x - 1, y),     img.at(x - 1, y - 1)};
      int b = 0, a = 0;
      for (int i = 0; i < 8; ++i) {
        b += p[i];
        if (p[i] == 0 && p[(i + 1) % 8] == 1) ++a;
      }
      if (b < 2 || b > 6 || a != 1) continue;
      const int n = p[0], e = p[2], s = p[4], wv = p[6];
      const bool cond = first ? (n * e * s == 0 && e * s * wv == 0)
                              : (n * e * wv == 0 && n * s * wv == 0);
      if (cond) {
        mark[y * w + x] = 1;
        any = true;
      }
    }
  }
  if (!any) return false;

  int components = 0;
  const auto label = label_components(img, components);
  std::vector<int> survivors(components, 0);
  std::vector<int> first_pixel(components, -1);
  for (int i = 0; i < w * h; ++i) {
    if (label[i] < 0) continue;
    if (first_pixel[label[i]] < 0) first_pixel[label[i]] = i;
    if (!mark[i]) ++survivors[label[i]];
  }
  for (int c = 0; c < components; ++c) {
    if (survivors[c] == 0) mark[first_pixel[c]] = 0;
  }

  bool changed = false;
  for (int i = 0; i < w * h; ++i) {
    if (mark[i]) {
      img.set(i % w, i / w, false);
      changed = true;
    }
  }
  return changed;
}

BinaryImage zhang_suen(const BinaryImage& img) {
  BinaryImage work = img.shifted(1, 1, img.width() + 2, img.height() + 2);
  while (true) {
    const bool a = zhang_suen_subiteration(work, true);
    const bool b = zhang_suen_subiteration(work, false);
    if (!a && !b) break;
  }
  BinaryImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) out.set(x, y, work.at(x + 1, y + 1));
  }
  return out;
}

}  // namespace

BinaryImage thin(const BinaryImage& image) {
  auto cropped = crop(image);
  if (!cropped) return image;

  int x0 = cropped->x0, y0 = cropped->y0;
  BinaryImage shape = std::move(cropped->image);
  while (true) {
    const int k = canonical_transform(shape);
    BinaryImage next = inverse_dihedral(zhang_suen(dihedral(shape, k)), k);
    if (next == shape) break;
    auto again = crop(next);
    x0 += again->x0;
    y0 += again->y0;
    shape = std::move(again->image);
  }
  return shape.shifted(x0, y0, image.width(), image.height());
}

}  // namespace digitsvm
