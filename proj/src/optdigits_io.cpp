#include "digitsvm/optdigits_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "digitsvm/errors.hpp"

namespace digitsvm {

namespace {

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

bool is_bitmap_row(std::string_view line) {
  return line.size() == kBitmapSide &&
         std::all_of(line.begin(), line.end(), [](char c) { return c == '0' || c == '1'; });
}

void check_bitmap_row(std::string_view line, std::size_t line_no) {
  if (line.size() != kBitmapSide) {
    throw FormatError(line_no, "bitmap row has " + std::to_string(line.size()) +
                                   " characters, expected 32");
  }
  for (char c : line) {
    if (c != '0' && c != '1') {
      throw FormatError(line_no, std::string("invalid bitmap character '") + c + "'");
    }
  }
}

bool parse_int(std::string_view s, int& out) {
  s = trim(s);
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

int parse_label(std::string_view line, std::size_t line_no) {
  int label = 0;
  if (!parse_int(line, label)) {
    throw FormatError(line_no, "expected a digit label, got '" + std::string(line) + "'");
  }
  if (label < 0 || label >= kNumClasses) {
    throw FormatError(line_no, "label " + std::to_string(label) + " outside 0-9");
  }
  return label;
}

}  // namespace

int RawBitmap::on_count() const { return std::accumulate(pixels.begin(), pixels.end(), 0); }

std::string_view to_string(FeatureKind kind) {
  return kind == FeatureKind::block64 ? "block64" : "moment18";
}

FeatureKind feature_kind_from_string(std::string_view name) {
  if (name == "block64") return FeatureKind::block64;
  if (name == "moment18") return FeatureKind::moment18;
  throw std::invalid_argument("unknown feature kind '" + std::string(name) + "'");
}

std::size_t feature_dimension(FeatureKind kind) {
  return kind == FeatureKind::block64 ? kBlockFeatureCount : 18;
}

std::vector<FeatureVector> Dataset::features() const {
  std::vector<FeatureVector> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.features);
  return out;
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.label);
  return out;
}

void Dataset::validate() const {
  if (samples.empty()) throw std::invalid_argument("dataset is empty");
  const std::size_t dim = feature_dimension(kind);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].features.size() != dim) {
      throw std::invalid_argument("sample " + std::to_string(i) + " has " +
                                  std::to_string(samples[i].features.size()) +
                                  " features, expected " + std::to_string(dim));
    }
    if (samples[i].label < 0 || samples[i].label >= kNumClasses) {
      throw std::invalid_argument("sample " + std::to_string(i) + " has label " +
                                  std::to_string(samples[i].label));
    }
  }
}

RawFile parse_raw(std::istream& in) {
  RawFile file;
  std::string line;
  std::size_t line_no = 0;
  bool in_header = true;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view row = strip_cr(line);

    if (in_header) {
      if (!is_bitmap_row(row)) {
        file.header.emplace_back(row);
        continue;
      }
      in_header = false;
    } else if (trim(row).empty()) {
      continue;  // blank separator between records
    }

    RawRecord record;
    record.first_line = line_no;
    for (int r = 0; r < kBitmapSide; ++r) {
      if (r > 0) {
        if (!std::getline(in, line)) {
          throw FormatError(line_no + 1, "truncated record: expected bitmap row " +
                                             std::to_string(r + 1) + " of 32");
        }
        ++line_no;
        row = strip_cr(line);
      }
      check_bitmap_row(row, line_no);
      for (int c = 0; c < kBitmapSide; ++c) record.bitmap.set(r, c, row[c] == '1');
    }
    if (!std::getline(in, line)) {
      throw FormatError(line_no + 1, "truncated record: missing label line");
    }
    ++line_no;
    record.label = parse_label(strip_cr(line), line_no);
    file.records.push_back(record);
  }
  return file;
}

Dataset parse_preprocessed(std::istream& in) {
  Dataset data;
  data.kind = FeatureKind::block64;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = strip_cr(line);
    if (trim(row).empty()) continue;

    Sample sample;
    sample.features.reserve(kBlockFeatureCount);
    std::size_t field = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = row.find(',', start);
      const std::string_view token =
          row.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      ++field;
      if (field > kBlockFeatureCount + 1) {
        throw FormatError(line_no, "too many fields, expected 65");
      }
      int value = 0;
      if (!parse_int(token, value)) {
        throw FormatError(line_no, "field " + std::to_string(field) + " is not an integer: '" +
                                       std::string(token) + "'");
      }
      if (field <= kBlockFeatureCount) {
        if (value < 0 || value > kMaxBlockCount) {
          throw FormatError(line_no, "field " + std::to_string(field) + " value " +
                                         std::to_string(value) + " outside 0-16");
        }
        sample.features.push_back(value);
      } else {
        if (value < 0 || value >= kNumClasses) {
          throw FormatError(line_no, "label " + std::to_string(value) + " outside 0-9");
        }
        sample.label = value;
      }
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (field != kBlockFeatureCount + 1) {
      throw FormatError(line_no, "expected 65 fields, got " + std::to_string(field));
    }
    data.samples.push_back(std::move(sample));
  }
  return data;
}

RawBitmap bitmap_from_rows(std::span<const std::string> rows) {
  if (rows.size() != kBitmapSide) {
    throw FormatError(rows.size() + 1, "expected 32 bitmap rows, got " + std::to_string(rows.size()));
  }
  RawBitmap bitmap;
  for (int r = 0; r < kBitmapSide; ++r) {
    const std::string_view row = strip_cr(rows[r]);
    check_bitmap_row(row, r + 1);
    for (int c = 0; c < kBitmapSide; ++c) bitmap.set(r, c, row[c] == '1');
  }
  return bitmap;
}

RawBitmap parse_bitmap(std::istream& in) {
  std::vector<std::string> rows;
  std::vector<std::size_t> line_numbers;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(strip_cr(line)).empty()) continue;
    rows.emplace_back(strip_cr(line));
    line_numbers.push_back(line_no);
  }
  if (rows.size() != kBitmapSide) {
    throw FormatError(line_no, "expected 32 bitmap rows, got " + std::to_string(rows.size()));
  }
  RawBitmap bitmap;
  for (int r = 0; r < kBitmapSide; ++r) {
    check_bitmap_row(rows[r], line_numbers[r]);
    for (int c = 0; c < kBitmapSide; ++c) bitmap.set(r, c, rows[r][c] == '1');
  }
  return bitmap;
}

BlockFeatures downsample(const RawBitmap& bitmap) {
  BlockFeatures block;
  for (int r = 0; r < kBitmapSide; ++r) {
    for (int c = 0; c < kBitmapSide; ++c) {
      block.counts[(r / kBlockSide) * kGridSide + c / kBlockSide] += bitmap.at(r, c);
    }
  }
  return block;
}

FeatureVector scale_features(const BlockFeatures& block, double divisor) {
  FeatureVector out(kBlockFeatureCount);
  for (int i = 0; i < kBlockFeatureCount; ++i) out[i] = block.counts[i] / divisor;
  return out;
}

std::string format_preprocessed_line(const BlockFeatures& block, int label) {
  std::string out;
  out.reserve(3 * kBlockFeatureCount + 2);
  for (int v : block.counts) {
    out += std::to_string(v);
    out += ',';
  }
  out += std::to_string(label);
  return out;
}

RawFile load_raw_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_raw(in);
}

bool looks_like_raw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view row = strip_cr(line);
    if (is_bitmap_row(row)) return true;
    if (row.find(',') != std::string_view::npos) return false;
  }
  return false;
}

Dataset load_block_dataset(const std::string& path, double divisor) {
  Dataset data;
  if (looks_like_raw(path)) {
    const RawFile raw = load_raw_file(path);
    data.kind = FeatureKind::block64;
    data.samples.reserve(raw.records.size());
    for (const auto& rec : raw.records) {
      data.samples.push_back({scale_features(downsample(rec.bitmap), divisor), rec.label});
    }
    return data;
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  data = parse_preprocessed(in);
  if (divisor != 1.0) {
    for (auto& s : data.samples) {
      for (double& v : s.features) v /= divisor;
    }
  }
  return data;
}

}  // namespace digitsvm
