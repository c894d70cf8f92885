// coral/types.h

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

#ifndef CORAL_TYPES_H_
#define CORAL_TYPES_H_

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace coral {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Labels = std::vector<int32_t>;

/// n x d block of feature rows.  Construction validates shape and
/// finiteness, so every FeatureMatrix in circulation is usable.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(Matrix data);

  const Matrix &data() const { return data_; }
  Eigen::Index rows() const { return data_.rows(); }
  Eigen::Index cols() const { return data_.cols(); }
  bool empty() const { return data_.size() == 0; }

 private:
  Matrix data_;
};

struct DomainStats {
  Vector mean;
  Matrix cov;
  Eigen::Index n = 0;
};

/// Eigenvalues in descending order; column i of vectors pairs with values(i).
struct SymmetricEigen {
  Vector values;
  Matrix vectors;
};

}  // namespace coral

#endif  // CORAL_TYPES_H_
