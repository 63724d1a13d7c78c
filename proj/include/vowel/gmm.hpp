#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vowel/dataset.hpp"
#include "vowel/errors.hpp"
#include "vowel/kmeans.hpp"
#include "vowel/rng.hpp"

namespace vowel {

enum class CovarianceKind { diag, full };

inline std::string to_string(CovarianceKind kind) {
  return kind == CovarianceKind::diag ? "diag" : "full";
}

inline CovarianceKind covariance_kind_from_string(const std::string& s) {
  if (s == "diag") return CovarianceKind::diag;
  if (s == "full") return CovarianceKind::full;
  throw config_error("unknown covariance kind: " + s);
}

struct GaussianComponent {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;  // symmetric positive-definite; diagonal when kind=diag
};

struct GaussianMixture {
  std::vector<GaussianComponent> components;
  Eigen::VectorXd weights;  // positive, sum to 1
  CovarianceKind kind = CovarianceKind::full;

  int component_count() const { return static_cast<int>(components.size()); }
};

struct EmConfig {
  int k = 1;
  int max_iterations = 200;
  double log_likelihood_tolerance = 1e-6;  // relative improvement threshold
  double covariance_floor = 1e-4;          // scaled by pooled per-feature variance
  std::uint64_t rng_seed = 1;
  int n_restarts = 5;
};

struct EmReport {
  int iterations = 0;
  double final_log_likelihood = -std::numeric_limits<double>::infinity();
  bool converged = false;
  std::vector<double> log_likelihood_trace;  // one entry per E-step
};

namespace detail {

// Cholesky of one component, reused across points.
struct ComponentDensity {
  Eigen::MatrixXd chol_lower;
  Eigen::VectorXd mean;
  double log_norm = 0.0;  // -(d/2) log(2 pi) - (1/2) log det

  explicit ComponentDensity(const GaussianComponent& comp) {
    const auto d = comp.mean.size();
    Eigen::LLT<Eigen::MatrixXd> llt(comp.covariance);
    if (llt.info() != Eigen::Success)
      throw numeric_error("gmm: covariance is not positive-definite");
    chol_lower = llt.matrixL();
    mean = comp.mean;
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) log_det += 2.0 * std::log(chol_lower(i, i));
    if (!std::isfinite(log_det) || log_det < -690.0)
      throw numeric_error("gmm: covariance determinant below floor");
    log_norm = -0.5 * (static_cast<double>(d) * std::log(2.0 * std::numbers::pi) + log_det);
  }

  double log_pdf(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd y =
        chol_lower.triangularView<Eigen::Lower>().solve(x - mean);
    return log_norm - 0.5 * y.squaredNorm();
  }
};

inline double logsumexp(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::exp(v[i] - m);
  return m + std::log(acc);
}

}  // namespace detail

inline double component_log_pdf(const Eigen::VectorXd& x, const GaussianComponent& comp) {
  return detail::ComponentDensity(comp).log_pdf(x);
}

/// Normalized Gaussian density N(x; mean, covariance).
inline double component_pdf(const Eigen::VectorXd& x, const GaussianComponent& comp) {
  return std::exp(component_log_pdf(x, comp));
}

inline double mixture_log_pdf(const Eigen::VectorXd& x, const GaussianMixture& gm) {
  Eigen::VectorXd lp(gm.component_count());
  for (int j = 0; j < gm.component_count(); ++j) {
    lp[j] = std::log(gm.weights[j]) + component_log_pdf(x, gm.components[j]);
  }
  return detail::logsumexp(lp);
}

/// Weighted mixture density, sum_j pi_j N(x; mu_j, Sigma_j).
inline double mixture_pdf(const Eigen::VectorXd& x, const GaussianMixture& gm) {
  return std::exp(mixture_log_pdf(x, gm));
}

/// Posterior component responsibilities, one row per point. Computed in
/// log-space with max subtraction; every row sums to 1.
inline Eigen::MatrixXd responsibilities(const Eigen::MatrixXd& points, const GaussianMixture& gm) {
  const int n = static_cast<int>(points.rows());
  const int k = gm.component_count();
  std::vector<detail::ComponentDensity> dens;
  dens.reserve(k);
  for (const auto& comp : gm.components) dens.emplace_back(comp);

  Eigen::MatrixXd gamma(n, k);
  Eigen::VectorXd lp(k);
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd x = points.row(i).transpose();
    for (int j = 0; j < k; ++j) lp[j] = std::log(gm.weights[j]) + dens[j].log_pdf(x);
    const double m = lp.maxCoeff();
    if (!std::isfinite(m))
      throw numeric_error("responsibilities: zero mixture density at point " + std::to_string(i));
    double total = 0.0;
    for (int j = 0; j < k; ++j) {
      gamma(i, j) = std::exp(lp[j] - m);
      total += gamma(i, j);
    }
    gamma.row(i) /= total;
  }
  return gamma;
}

namespace detail {

inline double mixture_log_likelihood(const Eigen::MatrixXd& points, const GaussianMixture& gm) {
  std::vector<ComponentDensity> dens;
  dens.reserve(gm.component_count());
  for (const auto& comp : gm.components) dens.emplace_back(comp);
  Eigen::VectorXd lp(gm.component_count());
  double ll = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const Eigen::VectorXd x = points.row(i).transpose();
    for (int j = 0; j < gm.component_count(); ++j)
      lp[j] = std::log(gm.weights[j]) + dens[j].log_pdf(x);
    ll += logsumexp(lp);
  }
  return ll;
}

// floor thresholds per feature: covariance_floor * pooled variance, falling
// back to the raw floor when a feature is constant
inline Eigen::VectorXd covariance_floor_levels(const Eigen::MatrixXd& points, double floor) {
  const Eigen::RowVectorXd mean = points.colwise().mean();
  Eigen::VectorXd levels(points.cols());
  for (Eigen::Index f = 0; f < points.cols(); ++f) {
    const double var =
        (points.col(f).array() - mean[f]).square().sum() / static_cast<double>(points.rows());
    levels[f] = var > 0.0 ? floor * var : floor;
  }
  return levels;
}

inline void apply_covariance_floor(Eigen::MatrixXd& cov, const Eigen::VectorXd& levels) {
  for (Eigen::Index f = 0; f < cov.rows(); ++f) {
    if (cov(f, f) < levels[f]) cov(f, f) += levels[f];
  }
}

inline GaussianMixture em_initialize(const Eigen::MatrixXd& points, int k, CovarianceKind kind,
                                     const Eigen::VectorXd& floor_levels, Rng& rng) {
  const int n = static_cast<int>(points.rows());
  const int d = static_cast<int>(points.cols());
  const auto km = kmeans(points, k, rng);

  // shared initial covariance: sample covariance of all points (n denominator)
  const Eigen::RowVectorXd mean = points.colwise().mean();
  const Eigen::MatrixXd centered = points.rowwise() - mean;
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n);
  if (kind == CovarianceKind::diag) {
    const Eigen::VectorXd diag = cov.diagonal();
    cov = diag.asDiagonal();
  }
  apply_covariance_floor(cov, floor_levels);

  GaussianMixture gm;
  gm.kind = kind;
  gm.weights.resize(k);
  std::vector<int> sizes(k, 0);
  for (int a : km.assignment) ++sizes[a];
  for (int j = 0; j < k; ++j) {
    gm.components.push_back({km.centers.row(j).transpose(), cov});
    gm.weights[j] = static_cast<double>(sizes[j]) / static_cast<double>(n);
  }
  return gm;
}

}  // namespace detail

/// Expectation-Maximization over n_restarts seeded initializations; the fit
/// with the highest final log-likelihood wins. The log-likelihood trace of
/// the returned fit is non-decreasing: if the covariance floor ever forces a
/// decrease, the previous parameters are restored and the run stops there.
inline std::pair<GaussianMixture, EmReport> em_fit(const Eigen::MatrixXd& points,
                                                   const EmConfig& cfg, CovarianceKind kind) {
  const int n = static_cast<int>(points.rows());
  const int d = static_cast<int>(points.cols());
  if (cfg.k < 1 || cfg.max_iterations < 1 || !(cfg.log_likelihood_tolerance > 0.0) ||
      !(cfg.covariance_floor > 0.0) || cfg.n_restarts < 1)
    throw config_error("em_fit: invalid configuration");
  if (n < cfg.k) throw data_error("em_fit: fewer points than mixture components");
  if (!points.allFinite()) throw data_error("em_fit: non-finite point");

  const Eigen::VectorXd floor_levels =
      detail::covariance_floor_levels(points, cfg.covariance_floor);

  GaussianMixture best;
  EmReport best_report;
  std::string last_failure;
  bool any_success = false;

  for (int restart = 0; restart < cfg.n_restarts; ++restart) {
    Rng rng(derive_seed(cfg.rng_seed, static_cast<std::uint64_t>(restart)));
    try {
      GaussianMixture gm = detail::em_initialize(points, cfg.k, kind, floor_levels, rng);
      EmReport report;
      GaussianMixture previous = gm;
      double prev_ll = -std::numeric_limits<double>::infinity();

      for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        const Eigen::MatrixXd gamma = responsibilities(points, gm);
        const double ll = detail::mixture_log_likelihood(points, gm);
        if (ll < prev_ll - 1e-8) {
          // floored M-step can no longer improve; keep the last good state
          gm = previous;
          report.converged = true;
          break;
        }
        report.log_likelihood_trace.push_back(ll);
        if (iter > 0 && ll - prev_ll < cfg.log_likelihood_tolerance * std::max(1.0, std::abs(ll))) {
          report.converged = true;
          break;
        }
        prev_ll = ll;
        previous = gm;

        // M-step
        const Eigen::VectorXd nj = gamma.colwise().sum();
        for (int j = 0; j < cfg.k; ++j) {
          if (!(nj[j] > n * 1e-300))
            throw numeric_error("em_fit: component " + std::to_string(j) + " collapsed");
          const Eigen::VectorXd mu = (gamma.col(j).transpose() * points).transpose() / nj[j];
          Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
          for (int i = 0; i < n; ++i) {
            const Eigen::VectorXd diff = points.row(i).transpose() - mu;
            cov.noalias() += gamma(i, j) * diff * diff.transpose();
          }
          cov /= nj[j];
          if (kind == CovarianceKind::diag) {
            const Eigen::VectorXd diag = cov.diagonal();
            cov = diag.asDiagonal();
          }
          detail::apply_covariance_floor(cov, floor_levels);
          gm.components[j].mean = mu;
          gm.components[j].covariance = cov;
          gm.weights[j] = nj[j] / static_cast<double>(n);
        }
      }

      report.iterations = static_cast<int>(report.log_likelihood_trace.size());
      report.final_log_likelihood = report.log_likelihood_trace.empty()
                                        ? -std::numeric_limits<double>::infinity()
                                        : report.log_likelihood_trace.back();
      if (!any_success || report.final_log_likelihood > best_report.final_log_likelihood) {
        best = std::move(gm);
        best_report = std::move(report);
        any_success = true;
      }
    } catch (const numeric_error& e) {
      last_failure = e.what();
    }
  }
  if (!any_success) throw numeric_error("em_fit: all restarts failed: " + last_failure);
  return {std::move(best), std::move(best_report)};
}

// ---------------------------------------------------------------------------
// Per-class classifier
// ---------------------------------------------------------------------------

struct GmmClassifier {
  std::vector<GaussianMixture> mixtures;  // one per class, shared kind and k
  Eigen::VectorXd priors;                 // positive, sum to 1
};

/// Fits one mixture per class on that class's points; priors are class
/// frequencies. Every class 0..9 must be present with at least k points.
inline GmmClassifier fit_classifier(const Dataset& train, const EmConfig& cfg,
                                    CovarianceKind kind) {
  const auto counts = class_counts(train);
  for (int c = 0; c < kNumClasses; ++c) {
    if (counts[c] == 0)
      throw data_error("fit_classifier: class " + std::to_string(c) + " missing from training data");
    if (counts[c] < cfg.k)
      throw data_error("fit_classifier: class " + std::to_string(c) + " has fewer points than k");
  }

  const Eigen::MatrixXd all = inputs_matrix(train);
  GmmClassifier clf;
  clf.priors.resize(kNumClasses);
  for (int c = 0; c < kNumClasses; ++c) {
    Eigen::MatrixXd pts(counts[c], all.cols());
    int r = 0;
    for (std::size_t i = 0; i < train.size(); ++i) {
      if (train.points[i].label == c) pts.row(r++) = all.row(static_cast<Eigen::Index>(i));
    }
    EmConfig class_cfg = cfg;
    class_cfg.rng_seed = derive_seed(cfg.rng_seed, 17 + static_cast<std::uint64_t>(c));
    clf.mixtures.push_back(em_fit(pts, class_cfg, kind).first);
    clf.priors[c] = static_cast<double>(counts[c]) / static_cast<double>(train.size());
  }
  return clf;
}

struct Classification {
  int label = 0;
  Eigen::VectorXd log_scores;  // log prior + log mixture density, per class
};

/// Bayes rule: argmax over classes of log prior plus mixture log-density.
/// Ties break toward the smallest class index.
inline Classification classify(const Eigen::VectorXd& x, const GmmClassifier& clf) {
  Classification out;
  out.log_scores.resize(static_cast<Eigen::Index>(clf.mixtures.size()));
  for (std::size_t c = 0; c < clf.mixtures.size(); ++c) {
    out.log_scores[static_cast<Eigen::Index>(c)] =
        std::log(clf.priors[static_cast<Eigen::Index>(c)]) + mixture_log_pdf(x, clf.mixtures[c]);
  }
  out.label = 0;
  for (Eigen::Index c = 1; c < out.log_scores.size(); ++c) {
    if (out.log_scores[c] > out.log_scores[out.label]) out.label = static_cast<int>(c);
  }
  return out;
}

}  // namespace vowel
