// coral/lda.h

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

#ifndef CORAL_LDA_H_
#define CORAL_LDA_H_

#include <optional>
#include <string>
#include <vector>

#include "coral/types.h"

namespace coral {

struct LdaInputs {
  Vector mu_pos;
  Vector mu_neg;
  Matrix cov_source;
  std::optional<Matrix> cov_target;
  double lambda = 1.0;
};

enum class LdaMode { kPlain, kCoral };

struct LdaModel {
  Vector w;
  LdaMode mode = LdaMode::kPlain;
  std::string provenance;
};

/// w = (C_S + lambda I)^{-1} (mu_pos - mu_neg).
LdaModel FitLda(const LdaInputs &inp);

/// w = (C_T + lambda I)^{-1/2} (C_S + lambda I)^{-1/2} (mu_pos - mu_neg):
/// source-whitened weights scored on target-whitened features.
LdaModel FitCoralLda(const LdaInputs &inp);

double Score(const LdaModel &model, const Vector &u);
Vector ScoreBatch(const LdaModel &model, const FeatureMatrix &d);

/// ||C1 - C2|| / (||C1|| + ||C2||) + ||m1 - m2|| / (||m1|| + ||m2||) with
/// Frobenius and Euclidean norms; a ratio with zero denominator is 0.
double DomainDistance(const DomainStats &a, const DomainStats &b);

struct CombineResult {
  LdaModel model;
  double alpha = 0.0;
  double accuracy = 0.0;
};

/// alpha * w_source + (1 - alpha) * w_target with alpha picked from `grid`
/// by accuracy on `validation` (labels 1 positive, 0 negative, score >
/// threshold means positive).  Ties go to the larger alpha.
CombineResult SemiSupervisedCombine(const LdaModel &w_source,
                                    const LdaModel &w_target,
                                    const FeatureMatrix &validation,
                                    const Labels &labels,
                                    const std::vector<double> &grid,
                                    double threshold = 0.0);

}  // namespace coral

#endif  // CORAL_LDA_H_
