// coral/linalg.h

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

#ifndef CORAL_LINALG_H_
#define CORAL_LINALG_H_

#include "coral/types.h"

namespace coral {
namespace linalg {

/// Throws NumericalError(kNonFinite) naming `what` if any entry is NaN/Inf.
void RequireFinite(const Matrix &m, const char *what);

/// Column means and the unbiased covariance
///   C = (D'D - (1'D)'(1'D)/n) / (n-1),
/// evaluated on data shifted by its first row so that large offsets do
/// not cancel catastrophically.  n == 1 yields the zero matrix.
DomainStats MeanAndCovariance(const FeatureMatrix &d);
DomainStats MeanAndCovariance(const Matrix &d);
Matrix Covariance(const Matrix &d);

/// Eigendecomposition of a symmetric matrix, eigenvalues descending.
/// Each eigenvector is sign-normalized so its largest-magnitude entry is
/// positive.  Asymmetry above 1e-9 (relative to max(1, max|m|)) throws
/// InvalidInput.
SymmetricEigen SymEigen(const Matrix &m);

/// V diag(max(lambda_i, floor)^p) V'.  floor <= 0 selects the default
/// 1e-12 * lambda_max.  Eigenvalues below -1e-6 * lambda_max throw
/// NumericalError(kNotPsd).
Matrix SymPower(const Matrix &m, double p, double floor = 0.0);
Matrix SymPower(const SymmetricEigen &eig, double p, double floor = 0.0);

struct PseudoInvSqrtResult {
  Matrix matrix;
  int rank = 0;
};

/// Moore-Penrose inverse square root: eigenvalues <= rank_tol * lambda_max
/// map to zero.  The zero matrix gives the zero matrix with rank 0.
PseudoInvSqrtResult PseudoInvSqrt(const Matrix &m, double rank_tol = 1e-10);
PseudoInvSqrtResult PseudoInvSqrt(const SymmetricEigen &eig,
                                  double rank_tol = 1e-10);

/// Number of eigenvalues above rank_tol * lambda_max.
int NumericalRank(const SymmetricEigen &eig, double rank_tol = 1e-10);

double FrobeniusDistanceSq(const Matrix &a, const Matrix &b);

struct StandardizeResult {
  FeatureMatrix data;
  Vector means;
  Vector stds;
};

/// Zero-mean, unit sample-std columns.  Columns whose std is negligible
/// relative to their mean are centered to exactly zero and get std 1.
StandardizeResult Standardize(const FeatureMatrix &d);

/// (C + lambda I)^p for the sample covariance C of the rows of d.
/// When n <= d the covariance has rank at most n-1 and the power is
/// assembled from the n x n Gram matrix of the centered rows instead of a
/// d x d eigendecomposition.
Matrix RidgeCovariancePower(const Matrix &d, double lambda, double p);
Matrix RidgeCovariancePowerPrimal(const Matrix &d, double lambda, double p);
Matrix RidgeCovariancePowerGram(const Matrix &d, double lambda, double p);

}  // namespace linalg
}  // namespace coral

#endif  // CORAL_LINALG_H_
