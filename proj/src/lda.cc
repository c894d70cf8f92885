// lda.cc

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

#include "coral/lda.h"

#include <cmath>

#include "coral/error.h"
#include "coral/linalg.h"

namespace coral {

namespace {

void CheckInputs(const LdaInputs &inp) {
  const Eigen::Index d = inp.mu_pos.size();
  if (d == 0 || inp.mu_neg.size() != d || inp.cov_source.rows() != d ||
      inp.cov_source.cols() != d)
    throw InvalidInput("LDA inputs have inconsistent dimensions");
  if (inp.cov_target &&
      (inp.cov_target->rows() != d || inp.cov_target->cols() != d))
    throw InvalidInput("target covariance has the wrong dimension");
  if (inp.lambda < 0) throw InvalidInput("LDA regularizer must be >= 0");
}

Matrix Ridge(const Matrix &c, double lambda) {
  return c + lambda * Matrix::Identity(c.rows(), c.cols());
}

}  // namespace

LdaModel FitLda(const LdaInputs &inp) {
  CheckInputs(inp);
  Matrix c = Ridge(inp.cov_source, inp.lambda);
  linalg::RequireFinite(c, "LDA covariance");
  Eigen::LDLT<Matrix> ldlt(c);
  Vector pivots = ldlt.vectorD().cwiseAbs();
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      pivots.minCoeff() <= 1e-14 * pivots.maxCoeff())
    throw NumericalError(NumericalErrorKind::kNotInvertible,
                         "LDA covariance is singular; use lambda > 0");
  LdaModel m;
  m.w = ldlt.solve(inp.mu_pos - inp.mu_neg);
  m.mode = LdaMode::kPlain;
  m.provenance = "source";
  linalg::RequireFinite(m.w, "LDA weights");
  return m;
}

LdaModel FitCoralLda(const LdaInputs &inp) {
  CheckInputs(inp);
  if (!inp.cov_target)
    throw InvalidInput("CORAL-LDA needs a target covariance");
  Matrix ws = linalg::SymPower(Ridge(inp.cov_source, inp.lambda), -0.5);
  Matrix wt = linalg::SymPower(Ridge(*inp.cov_target, inp.lambda), -0.5);
  LdaModel m;
  m.w = wt.transpose() * (ws * (inp.mu_pos - inp.mu_neg));
  m.mode = LdaMode::kCoral;
  m.provenance = "source+target";
  linalg::RequireFinite(m.w, "CORAL-LDA weights");
  return m;
}

double Score(const LdaModel &model, const Vector &u) {
  if (u.size() != model.w.size())
    throw InvalidInput("score input has the wrong dimension");
  return model.w.dot(u);
}

Vector ScoreBatch(const LdaModel &model, const FeatureMatrix &d) {
  if (d.cols() != model.w.size())
    throw InvalidInput("score input has the wrong dimension");
  return d.data() * model.w;
}

double DomainDistance(const DomainStats &a, const DomainStats &b) {
  if (a.mean.size() != b.mean.size() || a.cov.rows() != b.cov.rows() ||
      a.cov.cols() != b.cov.cols())
    throw InvalidInput("domain statistics have different dimensions");
  auto ratio = [](double num, double den) { return den > 0 ? num / den : 0.0; };
  return ratio((a.cov - b.cov).norm(), a.cov.norm() + b.cov.norm()) +
         ratio((a.mean - b.mean).norm(), a.mean.norm() + b.mean.norm());
}

CombineResult SemiSupervisedCombine(const LdaModel &w_source,
                                    const LdaModel &w_target,
                                    const FeatureMatrix &validation,
                                    const Labels &labels,
                                    const std::vector<double> &grid,
                                    double threshold) {
  if (grid.empty()) throw InvalidInput("empty alpha grid");
  if (w_source.w.size() != w_target.w.size() ||
      w_source.w.size() != validation.cols())
    throw InvalidInput("combined models have different dimensions");
  if (static_cast<Eigen::Index>(labels.size()) != validation.rows())
    throw InvalidInput("label count does not match validation rows");
  bool pos = false, neg = false;
  for (int32_t y : labels) {
    if (y != 0 && y != 1) throw InvalidInput("validation labels must be 0/1");
    (y == 1 ? pos : neg) = true;
  }
  if (!pos || !neg) throw InvalidInput("validation set needs both classes");
  for (double a : grid)
    if (a < 0 || a > 1) throw InvalidInput("alpha grid must lie in [0, 1]");

  Vector ss = validation.data() * w_source.w;
  Vector st = validation.data() * w_target.w;
  CombineResult best;
  bool have = false;
  for (double a : grid) {
    Vector s = a * ss + (1.0 - a) * st;
    long hit = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      hit += (s(i) > threshold) == (labels[i] == 1);
    double acc = static_cast<double>(hit) / static_cast<double>(s.size());
    if (!have || acc > best.accuracy ||
        (acc == best.accuracy && a > best.alpha)) {
      best.alpha = a;
      best.accuracy = acc;
      have = true;
    }
  }
  best.model.w = best.alpha * w_source.w + (1.0 - best.alpha) * w_target.w;
  best.model.mode = w_source.mode;
  best.model.provenance = "combined";
  return best;
}

}  // namespace coral
