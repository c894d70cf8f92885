// deep.cc

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

#include "coral/deep.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "coral/error.h"
#include "coral/linalg.h"

namespace coral {
namespace deep {

namespace {

void CheckBatches(const Matrix &s, const Matrix &t) {
  if (s.cols() != t.cols() || s.cols() < 1)
    throw InvalidInput("CORAL batches have different widths");
  if (s.rows() < 2 || t.rows() < 2)
    throw InvalidInput("CORAL batches need at least two rows");
  if (!s.allFinite() || !t.allFinite())
    throw InvalidInput("CORAL batch has non-finite entries");
}

using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

LMatrix CovLong(const LMatrix &x) {
  const Eigen::Index n = x.rows();
  Eigen::Matrix<long double, 1, Eigen::Dynamic> mean = x.colwise().mean();
  LMatrix xc = x.rowwise() - mean;
  return (xc.transpose() * xc) / static_cast<long double>(n - 1);
}

long double LossLong(const LMatrix &s, const LMatrix &t) {
  const long double d = static_cast<long double>(s.cols());
  return (CovLong(s) - CovLong(t)).squaredNorm() / (4.0L * d * d);
}

}  // namespace

double CoralLoss(const Matrix &s, const Matrix &t) {
  CheckBatches(s, t);
  const double d = static_cast<double>(s.cols());
  return linalg::FrobeniusDistanceSq(linalg::Covariance(s),
                                     linalg::Covariance(t)) /
         (4.0 * d * d);
}

std::pair<Matrix, Matrix> CoralLossGrad(const Matrix &s, const Matrix &t) {
  CheckBatches(s, t);
  const double d = static_cast<double>(s.cols());
  Matrix diff = linalg::Covariance(s) - linalg::Covariance(t);
  Matrix sc = s.rowwise() - s.colwise().mean();
  Matrix tc = t.rowwise() - t.colwise().mean();
  Matrix gs = sc * diff / (d * d * static_cast<double>(s.rows() - 1));
  Matrix gt = -(tc * diff) / (d * d * static_cast<double>(t.rows() - 1));
  return {std::move(gs), std::move(gt)};
}

double JointLoss(double class_loss, const std::vector<double> &coral_losses,
                 const std::vector<double> &weights) {
  if (coral_losses.size() != weights.size())
    throw InvalidInput("CORAL loss and weight lists differ in length");
  double total = class_loss;
  for (size_t i = 0; i < weights.size(); ++i)
    total += weights[i] * coral_losses[i];
  return total;
}

double FiniteDiffCheck(const Matrix &s, const Matrix &t, double step) {
  CheckBatches(s, t);
  if (!(step > 0)) throw InvalidInput("finite-difference step must be > 0");
  auto [gs, gt] = CoralLossGrad(s, t);
  LMatrix ls = s.cast<long double>(), lt = t.cast<long double>();
  const long double h = step;
  double worst = 0.0;
  auto visit = [&](LMatrix &x, const Matrix &g) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const long double keep = x(i, j);
        x(i, j) = keep + h;
        long double up = LossLong(ls, lt);
        x(i, j) = keep - h;
        long double down = LossLong(ls, lt);
        x(i, j) = keep;
        double numeric = static_cast<double>((up - down) / (2.0L * h));
        double analytic = g(i, j);
        double den = std::max(std::abs(analytic), std::abs(numeric));
        double err = std::abs(analytic - numeric);
        worst = std::max(worst, den > 1e-8 ? err / den : err);
      }
    }
  };
  visit(ls, gs);
  visit(lt, gt);
  return worst;
}

Network MakeNetwork(const std::vector<int> &widths, uint64_t seed,
                    double coral_init_std, double other_init_std,
                    int coral_layer) {
  if (widths.size() < 2) throw InvalidInput("network needs at least one layer");
  for (int w : widths)
    if (w < 1) throw InvalidInput("layer widths must be positive");
  const int num_layers = static_cast<int>(widths.size()) - 1;
  if (coral_layer < 0) coral_layer += num_layers;
  std::mt19937_64 rng(seed);
  Network net;
  for (int l = 0; l < num_layers; ++l) {
    Layer layer;
    double sd = l == coral_layer ? coral_init_std : other_init_std;
    std::normal_distribution<double> g(0.0, sd);
    layer.w.resize(widths[l], widths[l + 1]);
    for (Eigen::Index j = 0; j < layer.w.cols(); ++j)
      for (Eigen::Index i = 0; i < layer.w.rows(); ++i) layer.w(i, j) = g(rng);
    layer.b = Vector::Zero(widths[l + 1]);
    layer.act = l + 1 < num_layers ? Activation::kRelu : Activation::kIdentity;
    net.layers.push_back(std::move(layer));
  }
  return net;
}

ForwardPass Forward(const Network &net, const Matrix &batch) {
  if (net.layers.empty()) throw InvalidInput("empty network");
  if (batch.cols() != net.input_dim())
    throw InvalidInput("batch width does not match the network input");
  ForwardPass out;
  out.activations.push_back(batch);
  for (size_t l = 0; l < net.layers.size(); ++l) {
    const Layer &layer = net.layers[l];
    if (l > 0 && layer.w.rows() != net.layers[l - 1].w.cols())
      throw InvalidInput("network layer dimensions do not compose");
    Matrix z = out.activations.back() * layer.w;
    z.rowwise() += layer.b.transpose();
    out.pre.push_back(z);
    if (layer.act == Activation::kRelu) z = z.cwiseMax(0.0);
    out.activations.push_back(std::move(z));
  }
  out.logits = out.activations.back();
  return out;
}

double SoftmaxCrossEntropy(const Matrix &logits, const Labels &labels,
                           Matrix *grad) {
  const Eigen::Index n = logits.rows(), k = logits.cols();
  if (static_cast<Eigen::Index>(labels.size()) != n)
    throw InvalidInput("label count does not match batch size");
  double loss = 0.0;
  if (grad) grad->resize(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (labels[i] < 0 || labels[i] >= k)
      throw InvalidInput("class label out of range");
    double top = logits.row(i).maxCoeff();
    Eigen::RowVectorXd e = (logits.row(i).array() - top).exp();
    double z = e.sum();
    loss += std::log(z) - (logits(i, labels[i]) - top);
    if (grad) {
      grad->row(i) = e / z;
      (*grad)(i, labels[i]) -= 1.0;
    }
  }
  if (grad) *grad /= static_cast<double>(n);
  return loss / static_cast<double>(n);
}

Labels PredictNet(const Network &net, const Matrix &x) {
  Matrix s = Forward(net, x).logits;
  Labels out(s.rows());
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < s.cols(); ++c)
      if (s(i, c) > s(i, best)) best = c;
    out[i] = static_cast<int32_t>(best);
  }
  return out;
}

namespace {

double NetAccuracy(const Network &net, const Matrix &x, const Labels &y) {
  Labels p = PredictNet(net, x);
  long hit = 0;
  for (size_t i = 0; i < y.size(); ++i) hit += p[i] == y[i];
  return static_cast<double>(hit) / static_cast<double>(y.size());
}

// Cycles through shuffled row indices, reshuffling after each full pass.
class BatchSampler {
 public:
  BatchSampler(Eigen::Index n, uint64_t seed) : order_(n), rng_(seed) {
    std::iota(order_.begin(), order_.end(), 0);
    std::shuffle(order_.begin(), order_.end(), rng_);
  }
  std::vector<Eigen::Index> Next(int size) {
    std::vector<Eigen::Index> out;
    out.reserve(size);
    for (int i = 0; i < size; ++i) {
      if (pos_ == order_.size()) {
        std::shuffle(order_.begin(), order_.end(), rng_);
        pos_ = 0;
      }
      out.push_back(order_[pos_++]);
    }
    return out;
  }

 private:
  std::vector<Eigen::Index> order_;
  std::mt19937_64 rng_;
  size_t pos_ = 0;
};

Matrix Gather(const Matrix &x, const std::vector<Eigen::Index> &idx) {
  Matrix out(idx.size(), x.cols());
  for (size_t i = 0; i < idx.size(); ++i) out.row(i) = x.row(idx[i]);
  return out;
}

struct Grads {
  std::vector<Matrix> w;
  std::vector<Vector> b;
};

Grads ZeroGrads(const Network &net) {
  Grads g;
  for (const Layer &l : net.layers) {
    g.w.push_back(Matrix::Zero(l.w.rows(), l.w.cols()));
    g.b.push_back(Vector::Zero(l.b.size()));
  }
  return g;
}

// out_grad[l] holds an extra gradient on the output of layer l (or is empty).
void Backward(const Network &net, const ForwardPass &fp,
              std::vector<Matrix> out_grad, Grads *g) {
  const int num_layers = static_cast<int>(net.layers.size());
  Matrix delta;
  for (int l = num_layers - 1; l >= 0; --l) {
    if (out_grad[l].size() > 0) {
      if (delta.size() == 0)
        delta = std::move(out_grad[l]);
      else
        delta += out_grad[l];
    }
    if (delta.size() == 0) continue;
    if (net.layers[l].act == Activation::kRelu)
      delta = (fp.pre[l].array() > 0).select(delta, 0.0);
    g->w[l].noalias() += fp.activations[l].transpose() * delta;
    g->b[l] += delta.colwise().sum().transpose();
    if (l > 0) delta = delta * net.layers[l].w.transpose();
  }
}

TrainResult Train(Network net, const Matrix &source, const Labels &source_labels,
                  const Matrix &target, const TrainConfig &cfg,
                  const Labels *target_labels, bool use_coral) {
  if (net.layers.empty()) throw InvalidInput("empty network");
  const int num_layers = static_cast<int>(net.layers.size());
  if (source.cols() != net.input_dim() || target.cols() != net.input_dim())
    throw InvalidInput("data width does not match the network input");
  if (static_cast<Eigen::Index>(source_labels.size()) != source.rows())
    throw InvalidInput("source label count does not match rows");
  for (int32_t y : source_labels)
    if (y < 0 || y >= net.output_dim())
      throw InvalidInput("source label out of range");
  if (target_labels &&
      static_cast<Eigen::Index>(target_labels->size()) != target.rows())
    throw InvalidInput("target label count does not match rows");
  if (cfg.batch_size < 2) throw InvalidInput("batch size must be at least 2");
  if (cfg.batch_size > source.rows() || cfg.batch_size > target.rows())
    throw InvalidInput("batch size exceeds the dataset size");
  if (cfg.iterations < 0) throw InvalidInput("negative iteration count");
  if (cfg.coral_weights.size() != cfg.coral_layers.size())
    throw InvalidInput("one CORAL weight is needed per CORAL layer");
  std::vector<int> layers;
  for (int l : cfg.coral_layers) {
    int idx = l < 0 ? l + num_layers : l;
    if (idx < 0 || idx >= num_layers)
      throw InvalidInput("CORAL layer index out of range");
    layers.push_back(idx);
  }
  std::vector<double> lambda = cfg.coral_weights;
  for (double w : lambda)
    if (w < 0) throw InvalidInput("CORAL weights must be non-negative");

  std::seed_seq seq{cfg.seed};
  std::vector<uint64_t> seeds(2);
  seq.generate(seeds.begin(), seeds.end());
  BatchSampler src_sampler(source.rows(), seeds[0]);
  BatchSampler tgt_sampler(target.rows(), seeds[1]);
  const int epoch_len = static_cast<int>(
      (source.rows() + cfg.batch_size - 1) / cfg.batch_size);

  TrainResult res;
  LossReport &rep = res.report;
  const size_t nc = layers.size();
  rep.coral_loss.assign(nc, {});
  rep.coral_weight.assign(nc, {});
  Grads velocity = ZeroGrads(net);
  double epoch_class = 0.0;
  std::vector<double> epoch_coral(nc, 0.0);

  for (int it = 0; it < cfg.iterations; ++it) {
    std::vector<Eigen::Index> si = src_sampler.Next(cfg.batch_size);
    Matrix xs = Gather(source, si);
    Labels ys(si.size());
    for (size_t i = 0; i < si.size(); ++i) ys[i] = source_labels[si[i]];

    ForwardPass fs = Forward(net, xs);
    Matrix dlogits;
    double class_loss = SoftmaxCrossEntropy(fs.logits, ys, &dlogits);
    dlogits *= cfg.class_weight;
    std::vector<Matrix> src_out(num_layers), tgt_out(num_layers);
    src_out[num_layers - 1] = dlogits;
    Grads g = ZeroGrads(net);

    if (use_coral) {
      std::vector<Eigen::Index> ti = tgt_sampler.Next(cfg.batch_size);
      ForwardPass ft = Forward(net, Gather(target, ti));
      for (size_t c = 0; c < nc; ++c) {
        const int l = layers[c];
        const Matrix &as = fs.activations[l + 1];
        const Matrix &at = ft.activations[l + 1];
        double cl = CoralLoss(as, at);
        auto [gs, gt] = CoralLossGrad(as, at);
        gs *= lambda[c];
        gt *= lambda[c];
        if (src_out[l].size() == 0)
          src_out[l] = std::move(gs);
        else
          src_out[l] += gs;
        if (tgt_out[l].size() == 0)
          tgt_out[l] = std::move(gt);
        else
          tgt_out[l] += gt;
        rep.coral_loss[c].push_back(cl);
        rep.coral_weight[c].push_back(lambda[c]);
        epoch_coral[c] += lambda[c] * cl;
      }
      Backward(net, ft, std::move(tgt_out), &g);
    }
    Backward(net, fs, std::move(src_out), &g);
    for (int l = 0; l < num_layers; ++l) {
      velocity.w[l] = cfg.momentum * velocity.w[l] - cfg.learning_rate * g.w[l];
      velocity.b[l] = cfg.momentum * velocity.b[l] - cfg.learning_rate * g.b[l];
      net.layers[l].w += velocity.w[l];
      net.layers[l].b += velocity.b[l];
    }
    if (!net.layers.back().w.allFinite())
      throw NumericalError(NumericalErrorKind::kNonFinite,
                           "training diverged; lower the learning rate");

    rep.class_loss.push_back(class_loss);
    rep.source_acc.push_back(NetAccuracy(net, source, source_labels));
    if (target_labels)
      rep.target_acc.push_back(NetAccuracy(net, target, *target_labels));

    epoch_class += class_loss;
    if (use_coral && cfg.balance == LossBalance::kAuto &&
        (it + 1) % epoch_len == 0) {
      for (size_t c = 0; c < nc; ++c) {
        if (lambda[c] > 0 && epoch_coral[c] > 0) {
          double ratio = std::clamp(epoch_class / epoch_coral[c], 0.5, 2.0);
          lambda[c] *= ratio;
        }
        epoch_coral[c] = 0.0;
      }
      epoch_class = 0.0;
    }
  }

  ForwardPass fs = Forward(net, source), ft = Forward(net, target);
  for (size_t c = 0; c < nc; ++c)
    rep.final_coral_distance.push_back(CoralLoss(
        fs.activations[layers[c] + 1], ft.activations[layers[c] + 1]));
  res.net = std::move(net);
  return res;
}

}  // namespace

TrainResult TrainJoint(Network net, const Matrix &source,
                       const Labels &source_labels, const Matrix &target,
                       const TrainConfig &cfg, const Labels *target_labels) {
  return Train(std::move(net), source, source_labels, target, cfg,
               target_labels, true);
}

TrainResult TrainSourceOnly(Network net, const Matrix &source,
                            const Labels &source_labels, const Matrix &target,
                            const TrainConfig &cfg,
                            const Labels *target_labels) {
  return Train(std::move(net), source, source_labels, target, cfg,
               target_labels, false);
}

}  // namespace deep
}  // namespace coral
