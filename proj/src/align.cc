// align.cc

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

#include "coral/align.h"

#include <cmath>

#include "coral/error.h"
#include "coral/linalg.h"

namespace coral {

namespace {

void CheckSameDim(const FeatureMatrix &s, const FeatureMatrix &t) {
  if (s.cols() != t.cols())
    throw InvalidInput("source and target feature dimensions differ");
}

}  // namespace

CoralTransform FitRegularized(const FeatureMatrix &source,
                              const FeatureMatrix &target, double lambda) {
  CheckSameDim(source, target);
  if (!(lambda > 0))
    throw InvalidInput(
        "regularized CORAL needs lambda > 0; use the analytical fit for "
        "lambda = 0");
  CoralTransform t;
  t.mode = FitMode::kRegularized;
  t.lambda = lambda;
  t.source_dim = source.cols();
  Matrix whiten = linalg::RidgeCovariancePower(source.data(), lambda, -0.5);
  Matrix recolor = linalg::RidgeCovariancePower(target.data(), lambda, 0.5);
  t.a.noalias() = whiten * recolor;
  linalg::RequireFinite(t.a, "CORAL transform");
  return t;
}

CoralTransform FitAnalyticalFromCovariances(const Matrix &cov_source,
                                            const Matrix &cov_target,
                                            double rank_tol) {
  if (cov_source.rows() != cov_target.rows())
    throw InvalidInput("source and target covariance dimensions differ");
  SymmetricEigen es = linalg::SymEigen(cov_source);
  SymmetricEigen et = linalg::SymEigen(cov_target);
  linalg::PseudoInvSqrtResult pinv = linalg::PseudoInvSqrt(es, rank_tol);
  int r = std::min(pinv.rank, linalg::NumericalRank(et, rank_tol));
  Matrix ut = et.vectors.leftCols(r);
  Vector st(r);
  for (int i = 0; i < r; ++i) st(i) = std::sqrt(et.values(i));
  CoralTransform t;
  t.mode = FitMode::kAnalytical;
  t.lambda = 0.0;
  t.rank_used = r;
  t.source_dim = cov_source.rows();
  t.a.noalias() = pinv.matrix * (ut * st.asDiagonal() * ut.transpose());
  linalg::RequireFinite(t.a, "CORAL transform");
  return t;
}

CoralTransform FitAnalytical(const FeatureMatrix &source,
                             const FeatureMatrix &target, double rank_tol) {
  CheckSameDim(source, target);
  return FitAnalyticalFromCovariances(linalg::Covariance(source.data()),
                                      linalg::Covariance(target.data()),
                                      rank_tol);
}

FeatureMatrix ApplyToFeatures(const CoralTransform &t, const FeatureMatrix &d) {
  if (d.cols() != t.source_dim || t.a.rows() != t.source_dim)
    throw InvalidInput("feature dimension does not match the transform");
  Matrix out;
  out.noalias() = d.data() * t.a;
  return FeatureMatrix(std::move(out));
}

LinearModel ApplyToWeights(const CoralTransform &t, const LinearModel &model) {
  if (model.dim() != t.source_dim || t.a.rows() != t.source_dim)
    throw InvalidInput("model dimension does not match the transform");
  LinearModel out = model;
  out.weights.noalias() = model.weights * t.a.transpose();
  return out;
}

std::pair<FeatureMatrix, FeatureMatrix> WhitenBothBaseline(
    const FeatureMatrix &source, const FeatureMatrix &target) {
  CheckSameDim(source, target);
  Matrix ws = linalg::RidgeCovariancePower(source.data(), 1.0, -0.5);
  Matrix wt = linalg::RidgeCovariancePower(target.data(), 1.0, -0.5);
  return {FeatureMatrix(source.data() * ws), FeatureMatrix(target.data() * wt)};
}

double CovarianceDistanceSq(const FeatureMatrix &d, const Matrix &c) {
  return linalg::FrobeniusDistanceSq(linalg::Covariance(d.data()), c);
}

}  // namespace coral
