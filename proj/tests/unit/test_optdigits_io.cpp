#include <doctest.h>

#include <fstream>
#include <numeric>
#include <sstream>

#include "digitsvm/errors.hpp"
#include "digitsvm/optdigits_io.hpp"
#include "test_support.hpp"

using namespace digitsvm;
using namespace digitsvm::testing;

namespace {

std::size_t error_line(const std::string& text, bool raw) {
  std::istringstream in(text);
  try {
    if (raw) {
      parse_raw(in);
    } else {
      parse_preprocessed(in);
    }
  } catch (const FormatError& e) {
    return e.line();
  }
  return 0;
}

std::string csv_line(int fill, int label, int fields = 64) {
  std::string s;
  for (int k = 0; k < fields; ++k) s += std::to_string(fill) + ",";
  return s + std::to_string(label);
}

// Independent 4x4 block count.
int count_block(const RawBitmap& b, int br, int bc) {
  int n = 0;
  for (int r = br * 4; r < br * 4 + 4; ++r) {
    for (int c = bc * 4; c < bc * 4 + 4; ++c) n += b.at(r, c);
  }
  return n;
}

}  // namespace

TEST_CASE("preprocessed lines parse into unscaled counts and labels") {
  std::istringstream in(csv_line(3, 7) + "\r\n\n" + csv_line(16, 0) + "\n");
  const Dataset d = parse_preprocessed(in);
  REQUIRE(d.size() == 2);
  CHECK(d.kind == FeatureKind::block64);
  CHECK(d.dimension() == 64);
  CHECK(d.samples[0].label == 7);
  CHECK(d.samples[0].features[10] == 3.0);
  CHECK(d.samples[1].features[63] == 16.0);
  CHECK(d.samples[1].label == 0);
}

TEST_CASE("preprocessed parse errors report the offending line") {
  const std::string good = csv_line(1, 1) + "\n";
  CHECK(error_line(good + good + csv_line(1, 1, 63) + "\n", false) == 3);
  CHECK(error_line(good + csv_line(17, 1) + "\n", false) == 2);
  CHECK(error_line(csv_line(1, 10) + "\n", false) == 1);
  CHECK(error_line(good + "\n" + good + "1,2,x\n", false) == 4);
  CHECK(error_line(csv_line(1, 1, 65) + "\n", false) == 1);
  std::istringstream in(good + "oops\n");
  CHECK_THROWS_WITH_AS(parse_preprocessed(in), doctest::Contains("line 2"), FormatError);
}

TEST_CASE("downsample counts on-pixels per 4x4 block") {
  std::mt19937_64 rng(11);
  std::bernoulli_distribution on(0.4);
  for (int trial = 0; trial < 20; ++trial) {
    RawBitmap b;
    for (int r = 0; r < 32; ++r) {
      for (int c = 0; c < 32; ++c) b.set(r, c, on(rng));
    }
    const BlockFeatures f = downsample(b);
    for (int br = 0; br < 8; ++br) {
      for (int bc = 0; bc < 8; ++bc) CHECK(f.counts[br * 8 + bc] == count_block(b, br, bc));
    }
  }
  RawBitmap single;
  single.set(5, 9, true);
  const BlockFeatures f = downsample(single);
  CHECK(f.counts[1 * 8 + 2] == 1);
  CHECK(std::accumulate(f.counts.begin(), f.counts.end(), 0) == 1);
}

TEST_CASE("scaling divides every count") {
  BlockFeatures b{};
  b.counts[0] = 16;
  b.counts[5] = 4;
  const auto x = scale_features(b);
  CHECK(x[0] == 1.0);
  CHECK(x[5] == 0.25);
  CHECK(scale_features(b, 1.0)[5] == 4.0);
}

TEST_CASE("raw records parse with header, blank separators and labels") {
  RawBitmap a, b;
  a.set(0, 0, true);
  b.set(31, 31, true);
  std::string text = raw_text({a, b}, {4, 9}, "header one\nheader two\n");
  std::istringstream in(text);
  const RawFile f = parse_raw(in);
  CHECK(f.header.size() == 2);
  REQUIRE(f.records.size() == 2);
  CHECK(f.records[0].bitmap == a);
  CHECK(f.records[0].label == 4);
  CHECK(f.records[0].first_line == 3);
  CHECK(f.records[1].bitmap == b);
  CHECK(f.records[1].label == 9);
  CHECK(f.records[1].first_line == 36);
}

TEST_CASE("raw parse errors report the offending line") {
  RawBitmap a;
  const std::string one = raw_text({a}, {1}, "");
  std::string bad_char = one + one;
  bad_char[one.size() + 5] = '2';  // first row of record 2, line 34
  CHECK(error_line(bad_char, true) == 34);

  std::string short_row = one;
  short_row.erase(33 * 4, 1);  // line 5 loses a character
  CHECK(error_line(short_row, true) == 5);

  const std::string truncated = one.substr(0, 33 * 20);
  CHECK(error_line(truncated, true) == 21);

  std::string bad_label = one;
  bad_label.replace(bad_label.size() - 3, 3, " x\n");
  CHECK(error_line(bad_label, true) == 33);

  const std::string missing_label = one.substr(0, 33 * 32);
  CHECK(error_line(missing_label, true) == 33);
}

TEST_CASE("preprocessed line format matches the published file text") {
  std::ifstream in(data_path("optdigits.tra"));
  std::string line;
  int checked = 0;
  while (checked < 300 && std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream one(line);
    const Dataset d = parse_preprocessed(one);
    CHECK(format_preprocessed_line(blocks_of(d.samples[0]), d.samples[0].label) == line);
    ++checked;
  }
  CHECK(checked == 300);
}

TEST_CASE("published splits load with expected sizes and every digit") {
  const Dataset train = uci_split("optdigits.tra");
  const Dataset test = uci_split("optdigits.tes");
  CHECK(train.size() == 3823);
  CHECK(test.size() == 1797);
  std::array<int, 10> seen{};
  for (const auto& s : test.samples) ++seen[s.label];
  for (int k = 0; k < 10; ++k) CHECK(seen[k] > 150);
}

TEST_CASE("block dataset loader accepts raw and csv layouts with one scaling") {
  TempDir dir;
  const Dataset train = first_per_class(uci_split("optdigits.tra"), 3);
  std::vector<RawBitmap> bitmaps;
  std::vector<int> labels;
  std::string csv;
  for (const auto& s : train.samples) {
    bitmaps.push_back(bitmap_from_blocks(blocks_of(s)));
    labels.push_back(s.label);
    csv += format_preprocessed_line(blocks_of(s), s.label) + "\n";
  }
  write_file(dir.file("a.raw"), raw_text(bitmaps, labels));
  write_file(dir.file("a.csv"), csv);
  CHECK(looks_like_raw(dir.file("a.raw")));
  CHECK_FALSE(looks_like_raw(dir.file("a.csv")));
  const Dataset from_raw = load_block_dataset(dir.file("a.raw"), 16.0);
  const Dataset from_csv = load_block_dataset(dir.file("a.csv"), 16.0);
  REQUIRE(from_raw.size() == train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    CHECK(from_raw.samples[i].features == from_csv.samples[i].features);
    CHECK(from_raw.samples[i].label == train.samples[i].label);
    CHECK(from_csv.samples[i].features[20] == train.samples[i].features[20] / 16.0);
  }
  CHECK_THROWS(load_block_dataset(dir.file("missing.csv"), 16.0));
}

TEST_CASE("single bitmap parsing needs exactly 32 rows") {
  RawBitmap b;
  b.set(3, 4, true);
  std::istringstream ok(bitmap_rows_text(b));
  CHECK(parse_bitmap(ok) == b);
  const auto rows = bitmap_rows(b);
  std::vector<std::string> short_rows(rows.begin(), rows.end() - 1);
  CHECK_THROWS_AS(bitmap_from_rows(short_rows), FormatError);
  auto bad = rows;
  bad[7][0] = 'x';
  CHECK_THROWS_WITH_AS(bitmap_from_rows(bad), doctest::Contains("line 8"), FormatError);
}

TEST_CASE("dataset validation rejects wrong dimension and labels") {
  Dataset d;
  d.samples.push_back({FeatureVector(63, 0.0), 1});
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  d.samples[0].features.resize(64);
  d.samples[0].label = 11;
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  CHECK_THROWS_AS(Dataset{}.validate(), std::invalid_argument);
  CHECK(feature_kind_from_string("moment18") == FeatureKind::moment18);
  CHECK_THROWS(feature_kind_from_string("pixels"));
}
