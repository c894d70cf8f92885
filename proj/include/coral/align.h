// coral/align.h

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

#ifndef CORAL_ALIGN_H_
#define CORAL_ALIGN_H_

#include <utility>

#include "coral/linear_model.h"
#include "coral/types.h"

namespace coral {

enum class FitMode { kRegularized, kAnalytical };

/// Alignment map applied on the right of source feature rows: D_S * a.
struct CoralTransform {
  Matrix a;
  FitMode mode = FitMode::kRegularized;
  double lambda = 1.0;  // regularized mode only
  int rank_used = 0;    // analytical mode only
  Eigen::Index source_dim = 0;
};

/// a = (C_S + lambda I)^{-1/2} (C_T + lambda I)^{1/2}.  Only the
/// covariances enter, so the transform ignores domain means.
/// lambda <= 0 is rejected; use FitAnalytical for the unregularized map.
CoralTransform FitRegularized(const FeatureMatrix &source,
                              const FeatureMatrix &target, double lambda = 1.0);

/// Closed-form minimizer of ||a' C_S a - C_T||_F:
///   a = U_S S_S^{+1/2} U_S' U_T[1:r] S_T[1:r]^{1/2} U_T[1:r]'
/// with r = min(rank C_S, rank C_T).
CoralTransform FitAnalytical(const FeatureMatrix &source,
                             const FeatureMatrix &target,
                             double rank_tol = 1e-10);
CoralTransform FitAnalyticalFromCovariances(const Matrix &cov_source,
                                            const Matrix &cov_target,
                                            double rank_tol = 1e-10);

FeatureMatrix ApplyToFeatures(const CoralTransform &t, const FeatureMatrix &d);

/// Moves a linear classifier into the unaligned feature space: each class
/// weight w becomes a w, so x (a w) == (x a) w.  Biases are untouched.
LinearModel ApplyToWeights(const CoralTransform &t, const LinearModel &model);

/// Negative-control baseline: each domain multiplied by its own
/// (C + I)^{-1/2}.
std::pair<FeatureMatrix, FeatureMatrix> WhitenBothBaseline(
    const FeatureMatrix &source, const FeatureMatrix &target);

/// ||cov(d) - c||_F^2.
double CovarianceDistanceSq(const FeatureMatrix &d, const Matrix &c);

}  // namespace coral

#endif  // CORAL_ALIGN_H_
