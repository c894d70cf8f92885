// coral/deep.h

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

#ifndef CORAL_DEEP_H_
#define CORAL_DEEP_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "coral/types.h"

namespace coral {
namespace deep {

/// (1/(4 d^2)) ||C_S - C_T||_F^2 over the rows of two activation batches.
double CoralLoss(const Matrix &s, const Matrix &t);

/// Gradients of CoralLoss with respect to each batch:
///   dL/dS =  Sc (C_S - C_T) / (d^2 (n_S - 1))
///   dL/dT = -Tc (C_S - C_T) / (d^2 (n_T - 1))
/// where Sc, Tc are the mean-centered batches.
std::pair<Matrix, Matrix> CoralLossGrad(const Matrix &s, const Matrix &t);

double JointLoss(double class_loss, const std::vector<double> &coral_losses,
                 const std::vector<double> &weights);

/// Worst error over every coordinate of both batches between the analytic
/// gradient and central differences of the loss (evaluated in long double).
/// Error is |a - n| / max(|a|, |n|), or the plain |a - n| when both
/// magnitudes are at most 1e-8.
double FiniteDiffCheck(const Matrix &s, const Matrix &t, double step);

enum class Activation { kRelu, kIdentity };

struct Layer {
  Matrix w;  // in x out
  Vector b;  // out
  Activation act = Activation::kIdentity;
};

struct Network {
  std::vector<Layer> layers;
  Eigen::Index input_dim() const { return layers.front().w.rows(); }
  Eigen::Index output_dim() const { return layers.back().w.cols(); }
};

/// Fully connected net: ReLU on every layer but the last, which is linear.
/// Weights of `coral_layer` (the last layer when negative) are drawn from
/// N(0, coral_init_std), all others from N(0, other_init_std); biases are 0.
Network MakeNetwork(const std::vector<int> &widths, uint64_t seed,
                    double coral_init_std = 0.005,
                    double other_init_std = 0.05, int coral_layer = -1);

struct ForwardPass {
  Matrix logits;
  std::vector<Matrix> activations;  // [0] = input, [l + 1] = output of layer l
  std::vector<Matrix> pre;          // pre-activation of layer l
};

ForwardPass Forward(const Network &net, const Matrix &batch);

/// Mean softmax cross-entropy and its gradient with respect to the logits.
double SoftmaxCrossEntropy(const Matrix &logits, const Labels &labels,
                           Matrix *grad = nullptr);

Labels PredictNet(const Network &net, const Matrix &x);

enum class LossBalance { kFixed, kAuto };

struct TrainConfig {
  std::vector<double> coral_weights = {1.0};  // one per entry of coral_layers
  std::vector<int> coral_layers = {-1};       // negative counts from the end
  double class_weight = 1.0;
  double learning_rate = 0.01;
  double momentum = 0.0;
  int batch_size = 64;
  int iterations = 1000;
  uint64_t seed = 0;
  double init_std = 0.005;
  double other_init_std = 0.05;
  LossBalance balance = LossBalance::kFixed;
};

struct LossReport {
  std::vector<double> class_loss;
  std::vector<std::vector<double>> coral_loss;  // [layer][iteration]
  std::vector<std::vector<double>> coral_weight;
  std::vector<double> source_acc;
  std::vector<double> target_acc;  // empty when no target labels are given
  std::vector<double> final_coral_distance;  // per CORAL layer, full data
};

struct TrainResult {
  Network net;
  LossReport report;
};

/// Mini-batch SGD on class_weight * cross-entropy(source batch) plus
/// sum_i lambda_i * CoralLoss(source batch, target batch) at each CORAL
/// layer.  Source and target batches come from independent random streams
/// derived from cfg.seed.  Target labels, if given, are used for reporting
/// only.  In auto balance mode each lambda_i is rescaled once per epoch
/// by the ratio of the epoch's mean classification loss to its mean
/// weighted CORAL loss, clipped to [0.5, 2].
TrainResult TrainJoint(Network net, const Matrix &source,
                       const Labels &source_labels, const Matrix &target,
                       const TrainConfig &cfg,
                       const Labels *target_labels = nullptr);

/// Classifier-only training with the same sampling and update rule and
/// no CORAL computation at all.
TrainResult TrainSourceOnly(Network net, const Matrix &source,
                            const Labels &source_labels, const Matrix &target,
                            const TrainConfig &cfg,
                            const Labels *target_labels = nullptr);

}  // namespace deep
}  // namespace coral

#endif  // CORAL_DEEP_H_
