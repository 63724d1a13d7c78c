#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vowel/dataset.hpp"
#include "vowel/errors.hpp"
#include "vowel/rbf.hpp"

namespace vowel {

/// Hidden unit with its own center and spread.
struct TunableNeuron {
  Eigen::VectorXd center;
  double spread = 1.0;
};

/// Forward-selection RBF with a single scalar output: ordered neurons, ridge
/// weights (bias first), the GCV-selected regularization and the
/// leave-one-out error after each accepted neuron.
struct OfsRbfModel {
  std::vector<TunableNeuron> neurons;
  Eigen::VectorXd weights;  // neurons.size() + 1, bias first
  double lambda = 0.0;
  std::vector<double> loo_trace;
};

inline constexpr double kGcvLambdaMin = 1e-10;
inline constexpr double kGcvLambdaMax = 1e4;
inline constexpr int kGcvGridPoints = 200;

// ---------------------------------------------------------------------------
// Ridge regression with unpenalized bias column
// ---------------------------------------------------------------------------

/// Solves w = (A'A + lambda*I*)^-1 A't with the bias (first) column left
/// unpenalized, via least squares on the lambda-augmented system. Falls back
/// to the minimum-norm solution when the system is rank-deficient.
inline Eigen::VectorXd ridge_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                                 double lambda) {
  if (!(lambda >= 0.0)) throw config_error("ridge_fit: lambda must be >= 0");
  if (!design.allFinite()) throw numeric_error("ridge_fit: non-finite design");
  const Eigen::Index n = design.rows();
  const Eigen::Index m = design.cols();
  if (lambda == 0.0) {
    return design.completeOrthogonalDecomposition().solve(targets);
  }
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + m - 1, m);
  aug.topRows(n) = design;
  const double root = std::sqrt(lambda);
  for (Eigen::Index j = 1; j < m; ++j) aug(n + j - 1, j) = root;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + m - 1);
  rhs.head(n) = targets;
  return aug.completeOrthogonalDecomposition().solve(rhs);
}

namespace detail {

// (A'A + lambda*I*)^+ via symmetric eigendecomposition; pseudo-inverse keeps
// the rank-deficient lambda=0 case well-defined.
inline Eigen::MatrixXd penalized_normal_pinv(const Eigen::MatrixXd& design, double lambda) {
  const Eigen::Index m = design.cols();
  Eigen::MatrixXd normal = design.transpose() * design;
  for (Eigen::Index j = 1; j < m; ++j) normal(j, j) += lambda;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normal);
  if (es.info() != Eigen::Success) throw numeric_error("ridge: eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double threshold =
      std::numeric_limits<double>::epsilon() * static_cast<double>(m) * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  Eigen::VectorXd inv(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) inv[i] = ev[i] > threshold ? 1.0 / ev[i] : 0.0;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace detail

/// Mean squared leave-one-out residual in closed form, e_i / (1 - h_ii) with
/// h the ridge hat matrix. A leverage of 1 (exact-interpolation row) makes
/// the LOO error infinite.
inline double loo_error(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                        double lambda) {
  if (!(lambda >= 0.0)) throw config_error("loo_error: lambda must be >= 0");
  const Eigen::Index n = design.rows();
  const Eigen::MatrixXd pinv = detail::penalized_normal_pinv(design, lambda);
  const Eigen::MatrixXd projector = design * pinv;  // n x m
  const Eigen::VectorXd fitted = projector * (design.transpose() * targets);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = projector.row(i).dot(design.row(i));
    if (h >= 1.0 - 1e-12) return std::numeric_limits<double>::infinity();
    const double e = (targets[i] - fitted[i]) / (1.0 - h);
    acc += e * e;
  }
  return acc / static_cast<double>(n);
}

/// GCV(lambda) = n ||(I-H)t||^2 / tr(I-H)^2 for the same hat matrix.
inline double gcv_value(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                        double lambda) {
  const Eigen::Index n = design.rows();
  const Eigen::MatrixXd pinv = detail::penalized_normal_pinv(design, lambda);
  const Eigen::VectorXd fitted = design * (pinv * (design.transpose() * targets));
  const double trace_h = (pinv.cwiseProduct(design.transpose() * design)).sum();
  const double denom = static_cast<double>(n) - trace_h;
  if (denom <= 1e-12) return std::numeric_limits<double>::infinity();
  return static_cast<double>(n) * (targets - fitted).squaredNorm() / (denom * denom);
}

namespace detail {

// Geometric grid scan over [kGcvLambdaMin, kGcvLambdaMax] followed by
// golden-section refinement between the neighbors of the best grid point.
// Returns the best lambda actually evaluated, so the result never scores
// worse than the scan minimum.
template <typename F>
double scan_and_refine_lambda(F&& objective) {
  double best_lambda = kGcvLambdaMin;
  double best_value = std::numeric_limits<double>::infinity();
  const auto consider = [&](double lambda) {
    const double v = objective(lambda);
    if (v < best_value) {
      best_value = v;
      best_lambda = lambda;
    }
  };

  const double log_lo = std::log(kGcvLambdaMin);
  const double log_hi = std::log(kGcvLambdaMax);
  const double step = (log_hi - log_lo) / (kGcvGridPoints - 1);
  int best_index = 0;
  {
    double best_grid = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGcvGridPoints; ++i) {
      const double lambda = std::exp(log_lo + step * i);
      const double v = objective(lambda);
      if (v < best_grid) {
        best_grid = v;
        best_index = i;
      }
      if (v < best_value) {
        best_value = v;
        best_lambda = lambda;
      }
    }
  }

  double a = log_lo + step * std::max(best_index - 1, 0);
  double b = log_lo + step * std::min(best_index + 1, kGcvGridPoints - 1);
  constexpr double kGolden = 0.6180339887498949;
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = objective(std::exp(c));
  double fd = objective(std::exp(d));
  if (fc < best_value) { best_value = fc; best_lambda = std::exp(c); }
  if (fd < best_value) { best_value = fd; best_lambda = std::exp(d); }
  while (b - a > 1e-3) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = objective(std::exp(c));
      if (fc < best_value) { best_value = fc; best_lambda = std::exp(c); }
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = objective(std::exp(d));
      if (fd < best_value) { best_value = fd; best_lambda = std::exp(d); }
    }
  }
  return best_lambda;
}

}  // namespace detail

/// Regularization choice minimizing the GCV error over log lambda.
inline double gcv_lambda(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets) {
  return detail::scan_and_refine_lambda(
      [&](double lambda) { return gcv_value(design, targets, lambda); });
}

// ---------------------------------------------------------------------------
// Forward selection
// ---------------------------------------------------------------------------

struct ForwardSelectConfig {
  std::vector<double> candidate_spreads;
  int max_neurons = 36;
};

/// Eight spreads geometrically spaced from 0.1x to 4x the pooled input
/// standard deviation.
inline std::vector<double> default_spread_ladder(const Eigen::MatrixXd& inputs) {
  double sigma = pooled_input_std_dev(inputs);
  if (!(sigma > 0.0)) sigma = 1.0;
  const double lo = 0.1 * sigma;
  const double hi = 4.0 * sigma;
  const double ratio = std::pow(hi / lo, 1.0 / 7.0);
  std::vector<double> spreads(8);
  double s = lo;
  for (int i = 0; i < 8; ++i) {
    spreads[i] = s;
    s *= ratio;
  }
  return spreads;
}

/// [1 | Phi] design matrix for a list of tunable neurons.
inline Eigen::MatrixXd ofs_design(const Eigen::MatrixXd& inputs,
                                  const std::vector<TunableNeuron>& neurons) {
  Eigen::MatrixXd design(inputs.rows(), static_cast<Eigen::Index>(neurons.size()) + 1);
  design.col(0).setOnes();
  for (std::size_t j = 0; j < neurons.size(); ++j) {
    const double denom = 2.0 * neurons[j].spread * neurons[j].spread;
    for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
      design(i, static_cast<Eigen::Index>(j) + 1) =
          std::exp(-(inputs.row(i).transpose() - neurons[j].center).squaredNorm() / denom);
    }
  }
  return design;
}

inline double ofs_output(const Eigen::VectorXd& x, const OfsRbfModel& model) {
  double y = model.weights.size() > 0 ? model.weights[0] : 0.0;
  for (std::size_t j = 0; j < model.neurons.size(); ++j) {
    const auto& neuron = model.neurons[j];
    const double d2 = (x - neuron.center).squaredNorm();
    y += model.weights[static_cast<Eigen::Index>(j) + 1] *
         std::exp(-d2 / (2.0 * neuron.spread * neuron.spread));
  }
  return y;
}

struct CandidateScore {
  int candidate = -1;  // point index * spread count + spread index
  double lambda = 0.0;
  double loo = std::numeric_limits<double>::infinity();
};

struct ForwardSelectTrace {
  bool record_candidates = false;
  std::vector<CandidateScore> selected;                 // one per accepted neuron
  std::vector<std::vector<CandidateScore>> candidates;  // per step, when recording
};

namespace detail {

// Ridge machinery for the bias-unpenalized design [1 | X], expressed through
// the thin SVD of the centered block Xc: H(lambda) = P1 + U diag(f) U' with
// f_j = s_j^2 / (s_j^2 + lambda). Appending one candidate column updates the
// hat matrix by the exact rank-one identity
//   H_new = H + v v' / (lambda + a'v),  v = (I - H) a_c,
// which lets each candidate be scored in O(n m) without refactoring.
struct AugmentedScorer {
  const Eigen::VectorXd& spectrum_sq;  // squared singular values, size m
  const Eigen::VectorXd& beta;         // U' tc
  const Eigen::VectorXd& coeff;        // U' a_c
  double a_sqnorm;                     // ||a_c||^2
  double a_dot_t;                      // a_c' tc
  double tc_sqnorm;
  int n;

  // GCV of the augmented design as a function of lambda, O(m) per call
  double gcv(double lambda) const {
    const Eigen::Index m = spectrum_sq.size();
    double trace_f = 0.0;     // sum f_j
    double rss_old = tc_sqnorm;
    double a_quad = 0.0;      // sum f c^2
    double v_sqnorm = a_sqnorm;
    double w = a_dot_t;       // v' tc
    double q = a_dot_t;       // v' (I-H) tc
    for (Eigen::Index j = 0; j < m; ++j) {
      const double f = spectrum_sq[j] / (spectrum_sq[j] + lambda);
      const double two_f = 2.0 * f - f * f;
      trace_f += f;
      rss_old -= two_f * beta[j] * beta[j];
      a_quad += f * coeff[j] * coeff[j];
      v_sqnorm -= two_f * coeff[j] * coeff[j];
      w -= f * coeff[j] * beta[j];
      q -= two_f * coeff[j] * beta[j];
    }
    const double schur = lambda + (a_sqnorm - a_quad);
    if (!(schur > 0.0)) return std::numeric_limits<double>::infinity();
    if (v_sqnorm < 0.0) v_sqnorm = 0.0;
    if (rss_old < 0.0) rss_old = 0.0;
    double rss = rss_old - 2.0 * q * w / schur + v_sqnorm * w * w / (schur * schur);
    if (rss < 0.0) rss = 0.0;
    const double trace_residual =
        static_cast<double>(n) - 1.0 - trace_f - v_sqnorm / schur;
    if (trace_residual <= 1e-12) return std::numeric_limits<double>::infinity();
    return static_cast<double>(n) * rss / (trace_residual * trace_residual);
  }
};

}  // namespace detail

/// Greedy construction of the hidden layer over the candidate pool of every
/// (training point, spread) pair. Each candidate is scored by appending its
/// orthogonalized activation column to the current design, re-selecting
/// lambda by GCV and evaluating the closed-form LOO error; the best candidate
/// is kept while the LOO error strictly decreases. Candidate enumeration is
/// point-index major, spread-index minor; LOO ties keep the earlier
/// candidate.
inline OfsRbfModel forward_select(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
                                  const ForwardSelectConfig& cfg,
                                  ForwardSelectTrace* trace = nullptr) {
  const int n = static_cast<int>(inputs.rows());
  if (n < 2) throw data_error("forward_select: need at least 2 points");
  if (cfg.candidate_spreads.empty()) throw config_error("forward_select: empty candidate pool");
  if (cfg.max_neurons < 1) throw config_error("forward_select: max_neurons must be >= 1");
  for (double s : cfg.candidate_spreads) {
    if (!(s > 0.0)) throw config_error("forward_select: spreads must be > 0");
  }

  const int n_spreads = static_cast<int>(cfg.candidate_spreads.size());
  const int n_candidates = n * n_spreads;
  const int max_m = std::min(cfg.max_neurons, n);

  Eigen::MatrixXd dist2(n, n);
  for (int i = 0; i < n; ++i) {
    dist2(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const double d2 = (inputs.row(i) - inputs.row(j)).squaredNorm();
      dist2(i, j) = d2;
      dist2(j, i) = d2;
    }
  }

  // centered candidate activation columns; deflated in place as the basis grows
  Eigen::MatrixXd deflated(n, n_candidates);
  Eigen::VectorXd original_sqnorm(n_candidates);
  std::vector<char> active(static_cast<std::size_t>(n_candidates), 1);
  for (int p = 0; p < n; ++p) {
    for (int si = 0; si < n_spreads; ++si) {
      const int c = p * n_spreads + si;
      const double spread = cfg.candidate_spreads[static_cast<std::size_t>(si)];
      Eigen::VectorXd col = (-dist2.col(p) / (2.0 * spread * spread)).array().exp();
      col.array() -= col.mean();
      deflated.col(c) = col;
      original_sqnorm[c] = col.squaredNorm();
      if (original_sqnorm[c] <= 1e-28) active[static_cast<std::size_t>(c)] = 0;
    }
  }

  const double target_mean = targets.mean();
  const Eigen::VectorXd tc = targets.array() - target_mean;
  const double tc_sqnorm = tc.squaredNorm();

  // intercept-only model: hat matrix is the mean projector
  double current_loo = 0.0;
  {
    const double shrink = 1.0 - 1.0 / static_cast<double>(n);
    for (int i = 0; i < n; ++i) {
      const double e = tc[i] / shrink;
      current_loo += e * e;
    }
    current_loo /= static_cast<double>(n);
  }
  const Eigen::VectorXd empty_sv, empty_beta;
  double lambda_final = detail::scan_and_refine_lambda([&](double lambda) {
    return detail::SpectralRidge{empty_sv, empty_beta, tc_sqnorm, n}.gcv(lambda);
  });

  Eigen::MatrixXd basis(n, max_m);             // Q
  Eigen::MatrixXd upper = Eigen::MatrixXd::Zero(max_m, max_m);  // R
  Eigen::VectorXd basis_targets(max_m);        // Q' tc
  Eigen::MatrixXd coords = Eigen::MatrixXd::Zero(max_m, n_candidates);

  std::vector<TunableNeuron> neurons;
  std::vector<double> loo_trace;
  int m = 0;

  while (m < max_m) {
    int best_candidate = -1;
    double best_loo = std::numeric_limits<double>::infinity();
    double best_lambda = 0.0;
    if (trace && trace->record_candidates) trace->candidates.emplace_back();

    Eigen::VectorXd zext(m + 1);
    zext.head(m) = basis_targets.head(m);

    for (int c = 0; c < n_candidates; ++c) {
      if (!active[static_cast<std::size_t>(c)]) continue;
      const double delta2 = deflated.col(c).squaredNorm();
      if (delta2 <= std::max(1e-24, 1e-20 * original_sqnorm[c])) {
        active[static_cast<std::size_t>(c)] = 0;
        continue;
      }
      const double delta = std::sqrt(delta2);

      Eigen::MatrixXd block = Eigen::MatrixXd::Zero(m + 1, m + 1);
      block.topLeftCorner(m, m) = upper.topLeftCorner(m, m);
      block.col(m).head(m) = coords.col(c).head(m);
      block(m, m) = delta;
      zext[m] = deflated.col(c).dot(tc) / delta;

      const Eigen::JacobiSVD<Eigen::MatrixXd> svd(block, Eigen::ComputeFullU);
      const Eigen::VectorXd& sv = svd.singularValues();
      const Eigen::VectorXd beta = svd.matrixU().transpose() * zext;
      const detail::SpectralRidge spectral{sv, beta, tc_sqnorm, n};
      const double lambda = detail::scan_and_refine_lambda(
          [&](double l) { return spectral.gcv(l); });

      Eigen::VectorXd f(m + 1);
      for (int j = 0; j <= m; ++j) {
        const double s2 = sv[j] * sv[j];
        f[j] = s2 / (s2 + lambda);
      }
      // rows of U = [Q, q_c] * U_small
      Eigen::MatrixXd rows = basis.leftCols(m) * svd.matrixU().topRows(m);
      rows.noalias() += (deflated.col(c) / delta) * svd.matrixU().row(m);

      double loo = 0.0;
      bool saturated = false;
      const Eigen::VectorXd fb = f.cwiseProduct(beta);
      for (int i = 0; i < n; ++i) {
        double h = 1.0 / static_cast<double>(n);
        double fit = 0.0;
        for (int j = 0; j <= m; ++j) {
          const double u = rows(i, j);
          h += f[j] * u * u;
          fit += u * fb[j];
        }
        if (h >= 1.0 - 1e-12) {
          saturated = true;
          break;
        }
        const double e = (tc[i] - fit) / (1.0 - h);
        loo += e * e;
      }
      loo = saturated ? std::numeric_limits<double>::infinity()
                      : loo / static_cast<double>(n);

      if (trace && trace->record_candidates) trace->candidates.back().push_back({c, lambda, loo});
      if (loo < best_loo) {
        best_loo = loo;
        best_candidate = c;
        best_lambda = lambda;
      }
    }

    if (best_candidate < 0 || !(best_loo < current_loo)) break;

    // accept: second orthogonalization pass keeps the basis numerically clean
    Eigen::VectorXd residual = deflated.col(best_candidate);
    if (m > 0) {
      const Eigen::VectorXd correction = basis.leftCols(m).transpose() * residual;
      residual.noalias() -= basis.leftCols(m) * correction;
      coords.col(best_candidate).head(m) += correction;
    }
    const double delta = residual.norm();
    if (!(delta > 0.0)) break;
    const Eigen::VectorXd q = residual / delta;

    basis.col(m) = q;
    upper.col(m).head(m) = coords.col(best_candidate).head(m);
    upper(m, m) = delta;
    basis_targets[m] = q.dot(tc);

    const int point = best_candidate / n_spreads;
    const int spread_index = best_candidate % n_spreads;
    neurons.push_back({inputs.row(point).transpose(),
                       cfg.candidate_spreads[static_cast<std::size_t>(spread_index)]});
    loo_trace.push_back(best_loo);
    lambda_final = best_lambda;
    current_loo = best_loo;
    if (trace) trace->selected.push_back({best_candidate, best_lambda, best_loo});

    for (int c = 0; c < n_candidates; ++c) {
      if (!active[static_cast<std::size_t>(c)]) continue;
      const double coef = q.dot(deflated.col(c));
      coords(m, c) = coef;
      deflated.col(c).noalias() -= q * coef;
    }
    ++m;
  }

  OfsRbfModel model;
  model.neurons = std::move(neurons);
  model.loo_trace = std::move(loo_trace);
  model.lambda = lambda_final;
  model.weights = ridge_fit(ofs_design(inputs, model.neurons), targets, model.lambda);
  return model;
}

// ---------------------------------------------------------------------------
// One-vs-rest protocol
// ---------------------------------------------------------------------------

struct OvrModelStats {
  int class_label = 0;
  int neurons = 0;
  double lambda = 0.0;
  double train_accuracy = 0.0;  // percent
  double test_accuracy = 0.0;   // percent
  double train_seconds = 0.0;
  double test_seconds = 0.0;
};

struct OvrEnsemble {
  std::vector<OfsRbfModel> models;  // exactly kNumClasses, in class order
  std::vector<OvrModelStats> stats;
  double average_train_accuracy = 0.0;
  double average_test_accuracy = 0.0;
  double average_neurons = 0.0;
  double average_train_seconds = 0.0;
  double average_test_seconds = 0.0;
};

namespace detail {

inline double binary_accuracy(const OfsRbfModel& model, const Eigen::MatrixXd& inputs,
                              const std::vector<char>& positives) {
  int correct = 0;
  for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
    const bool predicted = ofs_output(inputs.row(i).transpose(), model) >= 0.5;
    if (predicted == static_cast<bool>(positives[static_cast<std::size_t>(i)])) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(inputs.rows());
}

}  // namespace detail

/// Trains one binary forward-selection model per class (target 1 for the
/// class, 0 for the rest) and records per-model and averaged accuracies at a
/// 0.5 output threshold.
inline OvrEnsemble train_one_vs_rest(const Dataset& train, const Dataset& test,
                                     ForwardSelectConfig cfg) {
  if (train.empty() || test.empty()) throw data_error("train_one_vs_rest: empty dataset");
  const Eigen::MatrixXd train_inputs = inputs_matrix(train);
  const Eigen::MatrixXd test_inputs = inputs_matrix(test);
  if (cfg.candidate_spreads.empty()) cfg.candidate_spreads = default_spread_ladder(train_inputs);

  OvrEnsemble ensemble;
  for (int c = 0; c < kNumClasses; ++c) {
    Eigen::VectorXd targets(train_inputs.rows());
    std::vector<char> train_pos(train.size()), test_pos(test.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
      train_pos[i] = train.points[i].label == c;
      targets[static_cast<Eigen::Index>(i)] = train_pos[i] ? 1.0 : 0.0;
    }
    for (std::size_t i = 0; i < test.size(); ++i) test_pos[i] = test.points[i].label == c;

    const auto t0 = std::chrono::steady_clock::now();
    OfsRbfModel model = forward_select(train_inputs, targets, cfg);
    const auto t1 = std::chrono::steady_clock::now();

    OvrModelStats s;
    s.class_label = c;
    s.neurons = static_cast<int>(model.neurons.size());
    s.lambda = model.lambda;
    s.train_seconds = std::chrono::duration<double>(t1 - t0).count();
    s.train_accuracy = detail::binary_accuracy(model, train_inputs, train_pos);
    const auto t2 = std::chrono::steady_clock::now();
    s.test_accuracy = detail::binary_accuracy(model, test_inputs, test_pos);
    s.test_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t2).count();

    ensemble.models.push_back(std::move(model));
    ensemble.stats.push_back(s);
  }

  for (const auto& s : ensemble.stats) {
    ensemble.average_train_accuracy += s.train_accuracy;
    ensemble.average_test_accuracy += s.test_accuracy;
    ensemble.average_neurons += s.neurons;
    ensemble.average_train_seconds += s.train_seconds;
    ensemble.average_test_seconds += s.test_seconds;
  }
  const double k = static_cast<double>(kNumClasses);
  ensemble.average_train_accuracy /= k;
  ensemble.average_test_accuracy /= k;
  ensemble.average_neurons /= k;
  ensemble.average_train_seconds /= k;
  ensemble.average_test_seconds /= k;
  return ensemble;
}

/// Derived multi-class decision: argmax of the ten binary outputs, ties
/// toward the smallest class index. Reported alongside the averaged binary
/// accuracies; the two are not commensurable metrics.
inline int ovr_classify(const Eigen::VectorXd& x, const OvrEnsemble& ensemble) {
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < ensemble.models.size(); ++c) {
    const double score = ofs_output(x, ensemble.models[c]);
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(c);
    }
  }
  return best;
}

}  // namespace vowel
