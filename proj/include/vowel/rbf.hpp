#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vowel/dataset.hpp"
#include "vowel/errors.hpp"
#include "vowel/kmeans.hpp"

namespace vowel {

/// Three-layer RBF network: Gaussian hidden units with one shared width and a
/// linear output layer with per-class bias. The optional input affine map
/// hosts z-score normalization; by default it is the identity.
struct RbfNetwork {
  Eigen::MatrixXd centers;         // M x d
  double width = 1.0;              // shared Gaussian width rho
  Eigen::MatrixXd output_weights;  // M x K
  Eigen::RowVectorXd bias;         // 1 x K
  Eigen::RowVectorXd input_offset;
  Eigen::RowVectorXd input_scale;

  int hidden_count() const { return static_cast<int>(centers.rows()); }
  int output_count() const { return static_cast<int>(bias.size()); }
};

struct WidthPolicy {
  enum class Kind { max_distance_heuristic, fixed };
  Kind kind = Kind::max_distance_heuristic;
  double value = 0.0;

  static WidthPolicy max_distance() { return {}; }
  static WidthPolicy fixed(double v) { return {Kind::fixed, v}; }
};

struct RbfConfig {
  int hidden_neurons = 15;
  std::uint64_t rng_seed = 1;
  WidthPolicy width_policy{};
  bool normalize_inputs = false;
};

struct RbfFitReport {
  double train_seconds = 0.0;
};

/// Unsupervised k-means over the training inputs; labels are ignored.
inline Eigen::MatrixXd select_centers(const Eigen::MatrixXd& inputs, int m, std::uint64_t seed) {
  if (m > inputs.rows()) throw data_error("select_centers: more centers than points");
  Rng rng(seed);
  return kmeans(inputs, m, rng).centers;
}

/// Mean of the per-feature sample standard deviations' squares; the width
/// fallback for a single hidden unit and the base of the spread ladder.
inline double pooled_input_std_dev(const Eigen::MatrixXd& inputs) {
  const Eigen::Index n = inputs.rows();
  if (n < 2) return 1.0;
  const Eigen::RowVectorXd mean = inputs.colwise().mean();
  double acc = 0.0;
  for (Eigen::Index f = 0; f < inputs.cols(); ++f) {
    acc += (inputs.col(f).array() - mean[f]).square().sum() / static_cast<double>(n - 1);
  }
  return std::sqrt(acc / static_cast<double>(inputs.cols()));
}

namespace detail {

inline Eigen::RowVectorXd standardize(const RbfNetwork& net, const Eigen::VectorXd& x) {
  Eigen::RowVectorXd z = x.transpose();
  if (net.input_offset.size() == z.size()) {
    z = (z - net.input_offset).cwiseQuotient(net.input_scale);
  }
  return z;
}

inline Eigen::MatrixXd activation_matrix(const Eigen::MatrixXd& inputs,
                                         const Eigen::MatrixXd& centers, double width) {
  const double denom = 2.0 * width * width;
  Eigen::MatrixXd phi(inputs.rows(), centers.rows());
  for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
    for (Eigen::Index j = 0; j < centers.rows(); ++j) {
      phi(i, j) = std::exp(-(inputs.row(i) - centers.row(j)).squaredNorm() / denom);
    }
  }
  return phi;
}

}  // namespace detail

/// phi_j(x) = exp(-||x - c_j||^2 / (2 rho^2)), each in (0, 1].
inline Eigen::VectorXd hidden_activations(const Eigen::VectorXd& x, const RbfNetwork& net) {
  const Eigen::RowVectorXd z = detail::standardize(net, x);
  return detail::activation_matrix(z, net.centers, net.width).row(0).transpose();
}

/// Least-squares fit of the linear output layer against 1-of-K targets
/// (+1 for the true class). Minimum-norm solution when the design is
/// rank-deficient. Returns {output_weights, bias}.
inline std::pair<Eigen::MatrixXd, Eigen::RowVectorXd> fit_output_layer(
    const Eigen::MatrixXd& inputs, const std::vector<int>& labels,
    const Eigen::MatrixXd& centers, double width) {
  const Eigen::Index n = inputs.rows();
  const Eigen::Index m = centers.rows();
  Eigen::MatrixXd design(n, m + 1);
  design.col(0).setOnes();
  design.rightCols(m) = detail::activation_matrix(inputs, centers, width);
  if (!design.allFinite()) throw numeric_error("fit_output_layer: non-finite activation");

  Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(n, kNumClasses);
  for (Eigen::Index i = 0; i < n; ++i) targets(i, labels[static_cast<std::size_t>(i)]) = 1.0;

  const Eigen::MatrixXd solution =
      design.completeOrthogonalDecomposition().solve(targets);
  return {solution.bottomRows(m), solution.row(0)};
}

struct RbfPrediction {
  int label = 0;
  Eigen::VectorXd scores;  // one per class
};

/// y_k(x) = bias_k + sum_j w_jk phi_j(x); label is the argmax with ties
/// toward the smallest class index.
inline RbfPrediction predict(const Eigen::VectorXd& x, const RbfNetwork& net) {
  const Eigen::VectorXd phi = hidden_activations(x, net);
  RbfPrediction out;
  out.scores = (net.bias + phi.transpose() * net.output_weights).transpose();
  out.label = 0;
  for (Eigen::Index k = 1; k < out.scores.size(); ++k) {
    if (out.scores[k] > out.scores[out.label]) out.label = static_cast<int>(k);
  }
  return out;
}

/// Two-stage training: k-means centers, heuristic shared width, linear
/// least-squares output layer.
inline std::pair<RbfNetwork, RbfFitReport> train_rbf(const Dataset& train, const RbfConfig& cfg) {
  if (cfg.hidden_neurons < 1) throw config_error("train_rbf: hidden_neurons must be >= 1");
  if (static_cast<std::size_t>(cfg.hidden_neurons) > train.size())
    throw data_error("train_rbf: more hidden neurons than training points");

  const auto t0 = std::chrono::steady_clock::now();
  Eigen::MatrixXd inputs = inputs_matrix(train);

  RbfNetwork net;
  if (cfg.normalize_inputs) {
    const Eigen::RowVectorXd mean = inputs.colwise().mean();
    Eigen::RowVectorXd scale(inputs.cols());
    for (Eigen::Index f = 0; f < inputs.cols(); ++f) {
      const double var = (inputs.col(f).array() - mean[f]).square().sum() /
                         static_cast<double>(inputs.rows() - 1);
      scale[f] = var > 0.0 ? std::sqrt(var) : 1.0;
    }
    net.input_offset = mean;
    net.input_scale = scale;
    inputs = (inputs.rowwise() - mean).array().rowwise() / scale.array();
  } else {
    net.input_offset = Eigen::RowVectorXd::Zero(inputs.cols());
    net.input_scale = Eigen::RowVectorXd::Ones(inputs.cols());
  }

  net.centers = select_centers(inputs, cfg.hidden_neurons, cfg.rng_seed);

  switch (cfg.width_policy.kind) {
    case WidthPolicy::Kind::fixed:
      if (!(cfg.width_policy.value > 0.0)) throw config_error("train_rbf: fixed width must be > 0");
      net.width = cfg.width_policy.value;
      break;
    case WidthPolicy::Kind::max_distance_heuristic: {
      double d_max = 0.0;
      for (Eigen::Index a = 0; a < net.centers.rows(); ++a) {
        for (Eigen::Index b = a + 1; b < net.centers.rows(); ++b) {
          d_max = std::max(d_max, (net.centers.row(a) - net.centers.row(b)).norm());
        }
      }
      net.width = d_max > 0.0 ? d_max / std::sqrt(2.0 * cfg.hidden_neurons)
                              : pooled_input_std_dev(inputs);
      break;
    }
  }

  auto [weights, bias] = fit_output_layer(inputs, labels_of(train), net.centers, net.width);
  net.output_weights = std::move(weights);
  net.bias = std::move(bias);

  RbfFitReport report;
  report.train_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(net), report};
}

}  // namespace vowel
