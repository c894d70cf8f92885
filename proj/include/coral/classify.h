// coral/classify.h

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

#ifndef CORAL_CLASSIFY_H_
#define CORAL_CLASSIFY_H_

#include <cstdint>
#include <vector>

#include "coral/linear_model.h"
#include "coral/types.h"

namespace coral {

struct SvmOptions {
  double c = 1.0;
  int epochs = 20;
  uint64_t seed = 0;
  int num_classes = 0;  // 0: one more than the largest label
};

/// One-vs-rest linear SVM trained by stochastic subgradient descent with
/// step 1/(lambda t), lambda = 1/(C n), and projection onto the ball of
/// radius 1/sqrt(lambda).  The bias is an extra constant-1 feature and is
/// regularized with the weights.  After every epoch a class whose
/// objective went up is rolled back to its previous parameters, so the
/// per-class objective never increases.  If `epoch_objective` is given it
/// receives the summed objective after each epoch.
LinearModel TrainSvm(const FeatureMatrix &d, const Labels &labels,
                     const SvmOptions &opts,
                     std::vector<double> *epoch_objective = nullptr);
LinearModel TrainSvm(const FeatureMatrix &d, const Labels &labels, double c,
                     int epochs, uint64_t seed);

/// Sum over classes of (lambda/2)(|w|^2 + b^2) + mean hinge, lambda = 1/(C n).
double SvmObjective(const LinearModel &model, const FeatureMatrix &d,
                    const Labels &labels);

Matrix Scores(const LinearModel &model, const FeatureMatrix &d);

/// Argmax class per row; ties go to the lowest class index.
Labels Predict(const LinearModel &model, const FeatureMatrix &d);

struct CvResult {
  double best_c = 0.0;
  std::vector<double> grid;      // ascending
  std::vector<double> accuracy;  // mean held-out accuracy per grid value
};

/// k-fold model selection on the source domain.  Ties go to the smaller C.
CvResult CrossValidate(const FeatureMatrix &d, const Labels &labels,
                       std::vector<double> grid, int folds, uint64_t seed,
                       int epochs = 20);
double CrossValidateC(const FeatureMatrix &d, const Labels &labels,
                      const std::vector<double> &grid, int folds,
                      uint64_t seed, int epochs = 20);

const std::vector<double> &DefaultCGrid();

double Accuracy(const Labels &pred, const Labels &truth);

}  // namespace coral

#endif  // CORAL_CLASSIFY_H_
