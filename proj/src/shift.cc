// shift.cc

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

#include "coral/shift.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "coral/error.h"

namespace coral {

namespace {

Matrix HaarOrthogonal(int n, std::mt19937_64 &rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix z(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) z(i, j) = g(rng);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  Matrix r = qr.matrixQR();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  return q;
}

// Unit-norm rows forming a regular simplex centred at the origin, k x (k-1).
Matrix Simplex(int k) {
  Matrix e = Matrix::Identity(k, k) - Matrix::Constant(k, k, 1.0 / k);
  Eigen::JacobiSVD<Matrix> svd(e, Eigen::ComputeFullV);
  Matrix p = e * svd.matrixV().leftCols(k - 1);
  for (int i = 0; i < k; ++i) p.row(i).normalize();
  return p;
}

int LatentDim(const ShiftSpec &spec) {
  return spec.latent_dim > 0 ? spec.latent_dim : spec.d;
}

Vector Scales(const ShiftSpec &spec) {
  const int m = LatentDim(spec);
  Vector s(m);
  if (!spec.scales.empty()) {
    for (int i = 0; i < m; ++i) s(i) = spec.scales[i];
    return s;
  }
  const double a = spec.anisotropy;
  for (int i = 0; i < m; ++i)
    s(i) = m == 1 ? a : a * std::pow(1.0 / (a * a), static_cast<double>(i) / (m - 1));
  return s;
}

Labels BalancedLabels(int n, int k, std::mt19937_64 &rng) {
  Labels y(n);
  for (int i = 0; i < n; ++i) y[i] = i % k;
  std::shuffle(y.begin(), y.end(), rng);
  return y;
}

}  // namespace

void ValidateShiftSpec(const ShiftSpec &spec) {
  if (spec.d < 1) throw InvalidInput("shift spec: d must be >= 1");
  if (spec.k < 2) throw InvalidInput("shift spec: need at least 2 classes");
  if (spec.n_source < 2 * spec.k || spec.n_target < 2 * spec.k)
    throw InvalidInput("shift spec: each domain needs at least 2K examples");
  const int m = LatentDim(spec);
  if (m > spec.d) throw InvalidInput("shift spec: latent_dim exceeds d");
  if (m < spec.k - 1)
    throw InvalidInput("shift spec: latent_dim must be at least K-1");
  if (!spec.scales.empty()) {
    if (static_cast<int>(spec.scales.size()) != m)
      throw InvalidInput("shift spec: scales must have latent_dim entries");
    for (double s : spec.scales)
      if (!(s > 0)) throw InvalidInput("shift spec: scales must be positive");
  }
  if (!spec.source_scales.empty()) {
    if (static_cast<int>(spec.source_scales.size()) != m)
      throw InvalidInput("shift spec: source_scales must have latent_dim entries");
    for (double s : spec.source_scales)
      if (!(s > 0)) throw InvalidInput("shift spec: scales must be positive");
  }
  if (!(spec.anisotropy > 0))
    throw InvalidInput("shift spec: anisotropy must be positive");
  if (!spec.mean_shift.empty() && static_cast<int>(spec.mean_shift.size()) != spec.d)
    throw InvalidInput("shift spec: mean_shift must have d entries");
  if (static_cast<int>(spec.rotation_angles.size()) > m / 2)
    throw InvalidInput("shift spec: too many rotation angles for latent_dim");
  if (spec.noise_std < 0 || spec.class_shift < 0 || spec.separation < 0)
    throw InvalidInput("shift spec: noise, shift and separation must be >= 0");
}

Matrix RandomRotation(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  return HaarOrthogonal(n, rng);
}

Matrix GivensRotation(int n, const std::vector<double> &angles) {
  Matrix r = Matrix::Identity(n, n);
  for (size_t p = 0; p < angles.size(); ++p) {
    const int i = static_cast<int>(2 * p), j = i + 1;
    if (j >= n) throw InvalidInput("rotation angle plane exceeds dimension");
    const double c = std::cos(angles[p]), s = std::sin(angles[p]);
    r(i, i) = c;
    r(i, j) = -s;
    r(j, i) = s;
    r(j, j) = c;
  }
  return r;
}

ShiftData GenerateShift(const ShiftSpec &spec, int extra_targets) {
  ValidateShiftSpec(spec);
  if (extra_targets < 0) throw InvalidInput("negative extra target count");
  const int m = LatentDim(spec), d = spec.d, k = spec.k;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> g(0.0, 1.0);

  ShiftData out;
  out.class_means = Matrix::Zero(k, m);
  out.class_means.leftCols(k - 1) = spec.separation * Simplex(k);
  if (m == d) {
    out.mixing = Matrix::Identity(d, d);
  } else {
    out.mixing.resize(m, d);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < m; ++i) out.mixing(i, j) = g(rng) / std::sqrt(m);
  }
  Vector scales = Scales(spec);
  auto rotation = [&]() {
    return spec.random_rotation ? HaarOrthogonal(m, rng)
                                : GivensRotation(m, spec.rotation_angles);
  };
  auto make_map = [&](const Matrix &r, const Vector &s) {
    return Matrix(r * s.asDiagonal() * r.transpose());
  };
  Matrix rot = rotation();
  out.target_map = make_map(rot, scales);
  out.source_map = Matrix::Identity(m, m);
  if (!spec.source_scales.empty())
    out.source_map = make_map(
        rot, Eigen::Map<const Vector>(spec.source_scales.data(), m));

  Vector shift = Vector::Zero(d);
  for (int j = 0; j < static_cast<int>(spec.mean_shift.size()); ++j)
    shift(j) = spec.mean_shift[j];

  auto draw = [&](int n, const Matrix &map, const Matrix &offsets,
                  bool is_target, const std::string &name) {
    Labels y = BalancedLabels(n, k, rng);
    Matrix z(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j)
        z(i, j) = out.class_means(y[i], j) + offsets(y[i], j) + g(rng);
    Matrix x = (z * map) * out.mixing;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) x(i, j) += spec.noise_std * g(rng);
    if (is_target) x.rowwise() += shift.transpose();
    return Dataset{FeatureMatrix(std::move(x)), std::move(y), name};
  };
  auto class_offsets = [&]() {
    Matrix o(k, m);
    for (int c = 0; c < k; ++c)
      for (int j = 0; j < m; ++j) o(c, j) = spec.class_shift * g(rng);
    return o;
  };

  Matrix target_offsets = class_offsets();
  out.source = draw(spec.n_source, out.source_map, Matrix::Zero(k, m), false,
                    "source");
  out.target = draw(spec.n_target, out.target_map, target_offsets, true, "target");
  for (int e = 0; e < extra_targets; ++e) {
    Matrix map = make_map(rotation(), scales);
    Matrix off = class_offsets();
    out.extra.push_back(
        draw(spec.n_target, map, off, true, "extra" + std::to_string(e)));
  }
  return out;
}

ShiftSpec RotatedAnisotropicSpec() {
  ShiftSpec spec;
  spec.d = 20;
  spec.k = 3;
  spec.n_source = 1000;
  spec.n_target = 1000;
  spec.latent_dim = 4;
  spec.separation = 3.0;
  spec.random_rotation = false;
  spec.rotation_angles = {0.3};
  spec.source_scales = {7.0, 1.0 / 7.0, 1.0, 1.0};
  spec.scales = {1.0, 1.0, 0.2, 0.2};
  spec.noise_std = 0.5;
  return spec;
}

ShiftSpec DeepShiftSpec() {
  ShiftSpec spec = RotatedAnisotropicSpec();
  spec.separation = 5.0;
  spec.rotation_angles = {0.5};
  spec.source_scales.clear();
  spec.scales = {6.0, 1.0 / 6.0, 1.0, 1.0};
  return spec;
}

}  // namespace coral
