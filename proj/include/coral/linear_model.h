// coral/linear_model.h

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

#ifndef CORAL_LINEAR_MODEL_H_
#define CORAL_LINEAR_MODEL_H_

#include "coral/types.h"

namespace coral {

/// One weight row per class plus a per-class bias.  Class scores for a
/// feature row x are W x' + b.
struct LinearModel {
  Matrix weights;  // K x d
  Vector bias;     // K
  double c = 0.0;  // regularization constant used in training

  Eigen::Index num_classes() const { return weights.rows(); }
  Eigen::Index dim() const { return weights.cols(); }
};

}  // namespace coral

#endif  // CORAL_LINEAR_MODEL_H_
