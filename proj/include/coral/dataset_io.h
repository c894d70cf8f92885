// coral/dataset_io.h

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

#ifndef CORAL_DATASET_IO_H_
#define CORAL_DATASET_IO_H_

#include <optional>
#include <string>

#include "coral/types.h"

namespace coral {

struct Dataset {
  FeatureMatrix features;
  std::optional<Labels> labels;
  std::string domain_name;

  int num_classes() const;
};

/// Throws InvalidInput unless labels (if any) match the row count and use
/// every class index in [0, K) for some K >= 1.
void ValidateDataset(const Dataset &ds);

struct CsvOptions {
  bool has_header = false;
  bool has_labels = false;
};

/// Comma-separated rows of decimal numbers, optionally with one header line
/// and a trailing integer label column.  Blank lines are skipped.  Errors
/// raise FormatError carrying the 1-based line number.
Dataset LoadCsv(const std::string &path, const CsvOptions &opts);
Dataset ParseCsv(const std::string &text, const CsvOptions &opts);
void SaveCsv(const Dataset &ds, const std::string &path,
             bool write_header = false);
std::string FormatCsv(const Dataset &ds, bool write_header = false);

/// Little-endian binary layout:
///   "CORF" | u32 version = 1 | u32 rows | u32 cols | u8 has_labels | 3 x 0
///   | rows*cols f64 row-major | rows x u32 labels (if has_labels)
Dataset LoadBin(const std::string &path);
Dataset ParseBin(const std::string &bytes);
void SaveBin(const Dataset &ds, const std::string &path);
std::string FormatBin(const Dataset &ds);

/// Picks the binary format for a ".bin" suffix and CSV otherwise.
Dataset LoadDataset(const std::string &path, const CsvOptions &opts);
void SaveDataset(const Dataset &ds, const std::string &path,
                 bool write_header = false);

}  // namespace coral

#endif  // CORAL_DATASET_IO_H_
