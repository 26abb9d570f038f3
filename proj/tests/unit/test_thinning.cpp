#include <doctest.h>

#include "digitsvm/features.hpp"
#include "test_support.hpp"

using namespace digitsvm;
using namespace digitsvm::testing;

namespace {

// Textbook two-subiteration Zhang-Suen, no orientation handling.
BinaryImage plain_zhang_suen(BinaryImage img) {
  const int w = img.width(), h = img.height();
  auto px = [&](int x, int y) { return (x < 0 || y < 0 || x >= w || y >= h) ? 0 : int(img.at(x, y)); };
  bool changed = true;
  while (changed) {
    changed = false;
    for (int step = 0; step < 2; ++step) {
      std::vector<std::pair<int, int>> del;
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (!img.at(x, y)) continue;
          const int p2 = px(x, y - 1), p3 = px(x + 1, y - 1), p4 = px(x + 1, y), p5 = px(x + 1, y + 1);
          const int p6 = px(x, y + 1), p7 = px(x - 1, y + 1), p8 = px(x - 1, y), p9 = px(x - 1, y - 1);
          const int b = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9;
          const int a = (!p2 && p3) + (!p3 && p4) + (!p4 && p5) + (!p5 && p6) + (!p6 && p7) +
                        (!p7 && p8) + (!p8 && p9) + (!p9 && p2);
          const bool c = step == 0 ? (p2 * p4 * p6 == 0 && p4 * p6 * p8 == 0)
                                   : (p2 * p4 * p8 == 0 && p2 * p6 * p8 == 0);
          if (b >= 2 && b <= 6 && a == 1 && c) del.push_back({x, y});
        }
      }
      for (auto [x, y] : del) img.set(x, y, false);
      if (!del.empty()) changed = true;
    }
  }
  return img;
}

int components(const BinaryImage& img) {
  std::vector<int> seen(img.width() * img.height(), 0);
  int count = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!img.at(x, y) || seen[y * img.width() + x]) continue;
      ++count;
      std::vector<std::pair<int, int>> stack{{x, y}};
      seen[y * img.width() + x] = 1;
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx, ny = cy + dy;
            if (nx < 0 || ny < 0 || nx >= img.width() || ny >= img.height()) continue;
            if (!img.at(nx, ny) || seen[ny * img.width() + nx]) continue;
            seen[ny * img.width() + nx] = 1;
            stack.push_back({nx, ny});
          }
        }
      }
    }
  }
  return count;
}

bool has_full_2x2(const BinaryImage& img) {
  for (int y = 0; y + 1 < img.height(); ++y) {
    for (int x = 0; x + 1 < img.width(); ++x) {
      if (img.at(x, y) && img.at(x + 1, y) && img.at(x, y + 1) && img.at(x + 1, y + 1)) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("a 3x10 bar thins to a 7-pixel segment of its middle row") {
  BinaryImage bar(12, 5);
  for (int y = 1; y <= 3; ++y) {
    for (int x = 1; x <= 10; ++x) bar.set(x, y, true);
  }
  const BinaryImage t = thin(bar);
  BinaryImage expected(12, 5);
  for (int x = 2; x <= 8; ++x) expected.set(x, 2, true);
  CHECK(t == expected);
  CHECK(plain_zhang_suen(bar) == expected);
}

TEST_CASE("thinning is idempotent and keeps connectivity") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const BinaryImage g = random_glyph(rng);
    const BinaryImage t = thin(g);
    CHECK(thin(t) == t);
    CHECK(components(t) == components(g));
    CHECK_FALSE(has_full_2x2(t));
    for (int y = 0; y < g.height(); ++y) {
      for (int x = 0; x < g.width(); ++x) {
        if (t.at(x, y)) CHECK(g.at(x, y));
      }
    }
  }
}

TEST_CASE("thinning commutes with translation, rotation and mirroring") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 40; ++trial) {
    const BinaryImage g = random_glyph(rng);
    const BinaryImage t = thin(g);
    CHECK(thin(g.rotated90()) == t.rotated90());
    CHECK(thin(g.mirrored()) == t.mirrored());
    CHECK(thin(g.shifted(4, 9, 30, 30)) == t.shifted(4, 9, 30, 30));
  }
}

TEST_CASE("small shapes never vanish") {
  BinaryImage dot(3, 3);
  dot.set(1, 1, true);
  CHECK(thin(dot) == dot);
  BinaryImage square(4, 4);
  for (int y = 1; y <= 2; ++y) {
    for (int x = 1; x <= 2; ++x) square.set(x, y, true);
  }
  const BinaryImage t = thin(square);
  CHECK(t.on_count() >= 1);
  CHECK(thin(t) == t);
  CHECK(thin(BinaryImage(5, 5)).empty());
}
