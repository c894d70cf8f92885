// dataset_io.cc

// Copyright 2026  The CORAL Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "coral/dataset_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "coral/error.h"

namespace coral {

int Dataset::num_classes() const {
  if (!labels || labels->empty()) return 0;
  int top = 0;
  for (int32_t y : *labels) top = std::max(top, static_cast<int>(y));
  return top + 1;
}

void ValidateDataset(const Dataset &ds) {
  if (!ds.labels) return;
  if (static_cast<Eigen::Index>(ds.labels->size()) != ds.features.rows())
    throw InvalidInput("label count does not match row count");
  const int k = ds.num_classes();
  std::vector<bool> seen(k, false);
  for (int32_t y : *ds.labels) {
    if (y < 0) throw InvalidInput("negative class label");
    seen[y] = true;
  }
  for (int c = 0; c < k; ++c)
    if (!seen[c])
      throw InvalidInput("class labels are not contiguous from 0 (missing " +
                         std::to_string(c) + ")");
}

namespace {

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string &path, const std::string &bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InvalidInput("write failed for " + path);
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> SplitCells(std::string_view line) {
  std::vector<std::string_view> cells;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    cells.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

double ParseDouble(std::string_view cell, long line) {
  double v = 0.0;
  const char *b = cell.data(), *e = cell.data() + cell.size();
  if (!cell.empty() && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (cell.empty() || ec != std::errc() || ptr != e)
    throw FormatError("non-numeric cell '" + std::string(cell) + "'", line);
  if (!std::isfinite(v))
    throw FormatError("non-finite value '" + std::string(cell) + "'", line);
  return v;
}

int32_t ParseLabel(std::string_view cell, long line) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() ||
      v < 0 || v > INT32_MAX)
    throw FormatError("invalid class label '" + std::string(cell) + "'", line);
  return static_cast<int32_t>(v);
}

void PutU32(std::string &out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint32_t GetU32(const unsigned char *p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

bool EndsWith(const std::string &s, const std::string &suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

Dataset ParseCsv(const std::string &text, const CsvOptions &opts) {
  std::vector<double> values;
  Labels labels;
  long cols = -1, rows = 0, line_no = 0;
  bool header_done = !opts.has_header;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = Trim(raw);
    if (line.empty()) continue;
    if (!header_done) {
      header_done = true;
      continue;
    }
    std::vector<std::string_view> cells = SplitCells(line);
    long width = static_cast<long>(cells.size());
    if (opts.has_labels) {
      if (width < 2)
        throw FormatError("missing label column (need features and a label)",
                          line_no);
      --width;
    }
    if (cols < 0) {
      cols = width;
    } else if (width != cols) {
      throw FormatError("ragged row: expected " + std::to_string(cols) +
                            " feature columns, found " + std::to_string(width),
                        line_no);
    }
    for (long j = 0; j < width; ++j) values.push_back(ParseDouble(cells[j], line_no));
    if (opts.has_labels) labels.push_back(ParseLabel(cells.back(), line_no));
    ++rows;
  }
  if (rows == 0) throw FormatError("no data rows");
  Matrix m(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) m(i, j) = values[i * cols + j];
  Dataset ds{FeatureMatrix(std::move(m)), std::nullopt, ""};
  if (opts.has_labels) ds.labels = std::move(labels);
  ValidateDataset(ds);
  return ds;
}

Dataset LoadCsv(const std::string &path, const CsvOptions &opts) {
  Dataset ds = ParseCsv(ReadFile(path), opts);
  ds.domain_name = path;
  return ds;
}

std::string FormatCsv(const Dataset &ds, bool write_header) {
  std::string out;
  char buf[64];
  const Matrix &m = ds.features.data();
  if (write_header) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += "f" + std::to_string(j);
    }
    if (ds.labels) out += ",label";
    out += '\n';
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out += buf;
    }
    if (ds.labels) out += ',' + std::to_string((*ds.labels)[i]);
    out += '\n';
  }
  return out;
}

void SaveCsv(const Dataset &ds, const std::string &path, bool write_header) {
  WriteFile(path, FormatCsv(ds, write_header));
}

std::string FormatBin(const Dataset &ds) {
  ValidateDataset(ds);
  const Matrix &m = ds.features.data();
  if (m.rows() > UINT32_MAX || m.cols() > UINT32_MAX)
    throw InvalidInput("dataset too large for the binary format");
  std::string out = "CORF";
  PutU32(out, 1);
  PutU32(out, static_cast<uint32_t>(m.rows()));
  PutU32(out, static_cast<uint32_t>(m.cols()));
  out.push_back(ds.labels ? 1 : 0);
  out.append(3, '\0');
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      uint64_t bits;
      double v = m(i, j);
      std::memcpy(&bits, &v, 8);
      for (int b = 0; b < 8; ++b)
        out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
    }
  }
  if (ds.labels)
    for (int32_t y : *ds.labels) PutU32(out, static_cast<uint32_t>(y));
  return out;
}

Dataset ParseBin(const std::string &bytes) {
  const auto *p = reinterpret_cast<const unsigned char *>(bytes.data());
  const size_t size = bytes.size();
  if (size < 20) throw FormatError("binary header truncated");
  if (std::memcmp(p, "CORF", 4) != 0) throw FormatError("bad magic bytes");
  uint32_t version = GetU32(p + 4);
  if (version != 1)
    throw FormatError("unsupported format version " + std::to_string(version));
  uint64_t rows = GetU32(p + 8), cols = GetU32(p + 12);
  uint8_t has_labels = p[16];
  if (has_labels > 1) throw FormatError("has_labels flag must be 0 or 1");
  if (p[17] || p[18] || p[19]) throw FormatError("nonzero padding bytes");
  uint64_t need = 20 + rows * cols * 8 + (has_labels ? rows * 4 : 0);
  if (size < need)
    throw FormatError("payload truncated: header declares " +
                      std::to_string(rows) + "x" + std::to_string(cols) +
                      " but file has " + std::to_string(size) + " bytes");
  if (size > need) throw FormatError("trailing bytes after payload");
  if (rows == 0 || cols == 0) throw FormatError("empty matrix");
  Matrix m(rows, cols);
  const unsigned char *q = p + 20;
  for (uint64_t i = 0; i < rows; ++i) {
    for (uint64_t j = 0; j < cols; ++j, q += 8) {
      uint64_t bits = 0;
      for (int b = 0; b < 8; ++b) bits |= static_cast<uint64_t>(q[b]) << (8 * b);
      double v;
      std::memcpy(&v, &bits, 8);
      if (!std::isfinite(v)) throw FormatError("non-finite value in payload");
      m(i, j) = v;
    }
  }
  Dataset ds{FeatureMatrix(std::move(m)), std::nullopt, ""};
  if (has_labels) {
    Labels labels(rows);
    for (uint64_t i = 0; i < rows; ++i, q += 4) {
      uint32_t y = GetU32(q);
      if (y > INT32_MAX) throw FormatError("label out of range");
      labels[i] = static_cast<int32_t>(y);
    }
    ds.labels = std::move(labels);
  }
  ValidateDataset(ds);
  return ds;
}

Dataset LoadBin(const std::string &path) {
  Dataset ds = ParseBin(ReadFile(path));
  ds.domain_name = path;
  return ds;
}

void SaveBin(const Dataset &ds, const std::string &path) {
  WriteFile(path, FormatBin(ds));
}

Dataset LoadDataset(const std::string &path, const CsvOptions &opts) {
  return EndsWith(path, ".bin") ? LoadBin(path) : LoadCsv(path, opts);
}

void SaveDataset(const Dataset &ds, const std::string &path,
                 bool write_header) {
  if (EndsWith(path, ".bin"))
    SaveBin(ds, path);
  else
    SaveCsv(ds, path, write_header);
}

}  // namespace coral
