// linalg.cc

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

#include "coral/linalg.h"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "coral/error.h"

namespace coral {

FeatureMatrix::FeatureMatrix(Matrix data) : data_(std::move(data)) {
  if (data_.rows() < 1 || data_.cols() < 1)
    throw InvalidInput("feature matrix must have at least one row and column");
  if (!data_.allFinite())
    throw InvalidInput("feature matrix contains non-finite entries");
}

namespace linalg {

void RequireFinite(const Matrix &m, const char *what) {
  if (!m.allFinite())
    throw NumericalError(NumericalErrorKind::kNonFinite,
                         std::string(what) + " has non-finite entries");
}

DomainStats MeanAndCovariance(const Matrix &d) {
  if (d.rows() < 1 || d.cols() < 1)
    throw InvalidInput("covariance needs at least one row and column");
  if (!d.allFinite()) throw InvalidInput("non-finite entries in data");
  const Eigen::Index n = d.rows(), dim = d.cols();
  DomainStats out;
  out.n = n;
  Eigen::RowVectorXd shift = d.row(0);
  Matrix x = d.rowwise() - shift;
  Eigen::RowVectorXd s = x.colwise().sum();
  out.mean = (s / static_cast<double>(n) + shift).transpose();
  out.cov = Matrix::Zero(dim, dim);
  if (n == 1) return out;
  out.cov.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
  out.cov.selfadjointView<Eigen::Lower>().rankUpdate(
      s.transpose(), -1.0 / static_cast<double>(n));
  out.cov.triangularView<Eigen::StrictlyUpper>() =
      out.cov.transpose().triangularView<Eigen::StrictlyUpper>();
  out.cov /= static_cast<double>(n - 1);
  return out;
}

DomainStats MeanAndCovariance(const FeatureMatrix &d) {
  return MeanAndCovariance(d.data());
}

Matrix Covariance(const Matrix &d) { return MeanAndCovariance(d).cov; }

SymmetricEigen SymEigen(const Matrix &m) {
  if (m.rows() != m.cols()) throw InvalidInput("matrix is not square");
  RequireFinite(m, "eigen input");
  const Eigen::Index n = m.rows();
  SymmetricEigen out;
  if (n == 0) return out;
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw InvalidInput("matrix is not symmetric");
  Matrix a = 0.5 * (m + m.transpose());
  Vector w(n);
  lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L',
                                   static_cast<lapack_int>(n), a.data(),
                                   static_cast<lapack_int>(n), w.data());
  if (info != 0)
    throw NumericalError(NumericalErrorKind::kNonFinite,
                         "dsyevd failed with info " + std::to_string(info));
  out.values = w.reverse();
  out.vectors = a.rowwise().reverse();
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::Index arg;
    out.vectors.col(j).cwiseAbs().maxCoeff(&arg);
    if (out.vectors(arg, j) < 0) out.vectors.col(j) *= -1.0;
  }
  return out;
}

namespace {

void CheckPsd(const Vector &values) {
  if (values.size() == 0) return;
  double top = values(0), bottom = values(values.size() - 1);
  if (bottom < -1e-6 * std::abs(top) || (top <= 0 && bottom < 0))
    throw NumericalError(NumericalErrorKind::kNotPsd,
                         "matrix is not positive semidefinite (min eigenvalue " +
                             std::to_string(bottom) + ")");
}

Matrix Reassemble(const Matrix &v, const Vector &f) {
  Matrix out = v * f.asDiagonal() * v.transpose();
  return 0.5 * (out + out.transpose());
}

}  // namespace

Matrix SymPower(const SymmetricEigen &eig, double p, double floor) {
  CheckPsd(eig.values);
  const Eigen::Index n = eig.values.size();
  double top = n > 0 ? eig.values(0) : 0.0;
  if (floor <= 0) {
    if (top <= 0) {
      if (p > 0) return Matrix::Zero(n, n);
      throw NumericalError(NumericalErrorKind::kNotInvertible,
                           "negative power of the zero matrix");
    }
    floor = 1e-12 * top;
  }
  Vector f(n);
  for (Eigen::Index i = 0; i < n; ++i)
    f(i) = std::pow(std::max(eig.values(i), floor), p);
  return Reassemble(eig.vectors, f);
}

Matrix SymPower(const Matrix &m, double p, double floor) {
  return SymPower(SymEigen(m), p, floor);
}

int NumericalRank(const SymmetricEigen &eig, double rank_tol) {
  if (eig.values.size() == 0 || eig.values(0) <= 0) return 0;
  double cut = rank_tol * eig.values(0);
  int r = 0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) > cut) ++r;
  return r;
}

PseudoInvSqrtResult PseudoInvSqrt(const SymmetricEigen &eig, double rank_tol) {
  CheckPsd(eig.values);
  const Eigen::Index n = eig.values.size();
  PseudoInvSqrtResult out;
  out.rank = NumericalRank(eig, rank_tol);
  Vector f = Vector::Zero(n);
  for (int i = 0; i < out.rank; ++i) f(i) = 1.0 / std::sqrt(eig.values(i));
  out.matrix = Reassemble(eig.vectors, f);
  return out;
}

PseudoInvSqrtResult PseudoInvSqrt(const Matrix &m, double rank_tol) {
  return PseudoInvSqrt(SymEigen(m), rank_tol);
}

double FrobeniusDistanceSq(const Matrix &a, const Matrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InvalidInput("Frobenius distance of matrices with different shapes");
  return (a - b).squaredNorm();
}

StandardizeResult Standardize(const FeatureMatrix &d) {
  const Eigen::Index n = d.rows(), dim = d.cols();
  if (n < 2) throw InvalidInput("standardize needs at least two rows");
  StandardizeResult out;
  out.means = d.data().colwise().mean().transpose();
  Matrix x = d.data().rowwise() - out.means.transpose();
  out.stds.resize(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    double sd = std::sqrt(x.col(j).squaredNorm() / static_cast<double>(n - 1));
    if (sd <= 1e-12 * std::abs(out.means(j)) || sd == 0.0) {
      out.stds(j) = 1.0;
      x.col(j).setZero();
    } else {
      out.stds(j) = sd;
      x.col(j) /= sd;
    }
  }
  out.data = FeatureMatrix(std::move(x));
  return out;
}

Matrix RidgeCovariancePowerPrimal(const Matrix &d, double lambda, double p) {
  if (lambda <= 0) throw InvalidInput("ridge must be positive");
  SymmetricEigen eig = SymEigen(Covariance(d));
  CheckPsd(eig.values);
  Vector f(eig.values.size());
  for (Eigen::Index i = 0; i < f.size(); ++i)
    f(i) = std::pow(std::max(eig.values(i), 0.0) + lambda, p);
  return Reassemble(eig.vectors, f);
}

Matrix RidgeCovariancePowerGram(const Matrix &d, double lambda, double p) {
  if (lambda <= 0) throw InvalidInput("ridge must be positive");
  if (!d.allFinite()) throw InvalidInput("non-finite entries in data");
  const Eigen::Index n = d.rows(), dim = d.cols();
  const double base = std::pow(lambda, p);
  Matrix out = Matrix::Identity(dim, dim) * base;
  if (n < 2) return out;
  Eigen::RowVectorXd mean = d.colwise().mean();
  Matrix xc = d.rowwise() - mean;
  Matrix g = Matrix::Zero(n, n);
  g.selfadjointView<Eigen::Lower>().rankUpdate(xc, 1.0 / (n - 1.0));
  g.triangularView<Eigen::StrictlyUpper>() =
      g.transpose().triangularView<Eigen::StrictlyUpper>();
  SymmetricEigen eig = SymEigen(g);
  CheckPsd(eig.values);
  if (eig.values(0) <= 0) return out;
  const double cut = 1e-12 * eig.values(0);
  Eigen::Index r = 0;
  while (r < n && eig.values(r) > cut) ++r;
  // Columns of xc' q_i / sqrt((n-1) mu_i) are orthonormal eigenvectors of
  // the covariance with eigenvalue mu_i.
  Vector inv(r), coef(r);
  for (Eigen::Index i = 0; i < r; ++i) {
    inv(i) = 1.0 / std::sqrt((n - 1.0) * eig.values(i));
    coef(i) = std::pow(eig.values(i) + lambda, p) - base;
  }
  Matrix v = xc.transpose() * eig.vectors.leftCols(r) * inv.asDiagonal();
  Matrix vc = v * coef.asDiagonal();
  out.noalias() += vc * v.transpose();
  return 0.5 * (out + out.transpose());
}

Matrix RidgeCovariancePower(const Matrix &d, double lambda, double p) {
  if (d.rows() <= d.cols()) return RidgeCovariancePowerGram(d, lambda, p);
  return RidgeCovariancePowerPrimal(d, lambda, p);
}

}  // namespace linalg
}  // namespace coral
