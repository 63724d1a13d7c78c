#pragma once

// Brute-force reference implementations used as independent oracles. These
// deliberately avoid the library's solvers: plain Gaussian elimination on
// std::vector matrices, direct density formulas, explicit refits.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracle {

using Mat = std::vector<std::vector<double>>;
using Vec = std::vector<double>;

inline Mat zeros(std::size_t r, std::size_t c) { return Mat(r, Vec(c, 0.0)); }

// Gaussian elimination with partial pivoting.
inline Vec solve(Mat a, Vec b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    if (a[col][col] == 0.0) throw std::runtime_error("oracle::solve: singular system");
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  Vec x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * x[c];
    x[i] = acc / a[i][i];
  }
  return x;
}

inline Mat invert(const Mat& a) {
  const std::size_t n = a.size();
  Mat inv = zeros(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    Vec e(n, 0.0);
    e[c] = 1.0;
    const Vec col = solve(a, e);
    for (std::size_t r = 0; r < n; ++r) inv[r][c] = col[r];
  }
  return inv;
}

// normal equations of the bias-unpenalized ridge: (A'A + lambda*I*) w = A't
inline Vec ridge_normal_equations(const Mat& design, const Vec& targets, double lambda) {
  const std::size_t n = design.size();
  const std::size_t m = design[0].size();
  Mat ata = zeros(m, m);
  Vec atb(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < m; ++r) {
      atb[r] += design[i][r] * targets[i];
      for (std::size_t c = 0; c < m; ++c) ata[r][c] += design[i][r] * design[i][c];
    }
  }
  for (std::size_t j = 1; j < m; ++j) ata[j][j] += lambda;
  return solve(ata, atb);
}

// leave-one-out by explicitly refitting n reduced systems
inline double loo_by_refits(const Mat& design, const Vec& targets, double lambda) {
  const std::size_t n = design.size();
  double acc = 0.0;
  for (std::size_t leave = 0; leave < n; ++leave) {
    Mat reduced;
    Vec reduced_t;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == leave) continue;
      reduced.push_back(design[i]);
      reduced_t.push_back(targets[i]);
    }
    const Vec w = ridge_normal_equations(reduced, reduced_t, lambda);
    double fit = 0.0;
    for (std::size_t c = 0; c < w.size(); ++c) fit += design[leave][c] * w[c];
    const double e = targets[leave] - fit;
    acc += e * e;
  }
  return acc / static_cast<double>(n);
}

// GCV via the explicit hat matrix H = A (A'A + lambda*I*)^-1 A'
inline double gcv_explicit(const Mat& design, const Vec& targets, double lambda) {
  const std::size_t n = design.size();
  const std::size_t m = design[0].size();
  Mat ata = zeros(m, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) ata[r][c] += design[i][r] * design[i][c];
  for (std::size_t j = 1; j < m; ++j) ata[j][j] += lambda;
  const Mat inv = invert(ata);

  double trace_h = 0.0;
  Vec fitted(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double hij = 0.0;
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) hij += design[i][r] * inv[r][c] * design[j][c];
      fitted[i] += hij * targets[j];
      if (i == j) trace_h += hij;
    }
  }
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) rss += (targets[i] - fitted[i]) * (targets[i] - fitted[i]);
  const double denom = static_cast<double>(n) - trace_h;
  if (denom <= 1e-12) return std::numeric_limits<double>::infinity();
  return static_cast<double>(n) * rss / (denom * denom);
}

// direct bivariate (or general-d) Gaussian density via explicit inverse
inline double gaussian_pdf(const Vec& x, const Vec& mean, const Mat& cov) {
  const std::size_t d = x.size();
  const Mat inv = invert(cov);
  double det;
  if (d == 1) {
    det = cov[0][0];
  } else if (d == 2) {
    det = cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0];
  } else {
    // LU-free determinant via cofactor expansion is impractical; reuse
    // elimination: product of pivots
    Mat a = cov;
    det = 1.0;
    for (std::size_t col = 0; col < d; ++col) {
      std::size_t pivot = col;
      for (std::size_t r = col + 1; r < d; ++r)
        if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
      if (pivot != col) {
        std::swap(a[col], a[pivot]);
        det = -det;
      }
      det *= a[col][col];
      for (std::size_t r = col + 1; r < d; ++r) {
        const double f = a[r][col] / a[col][col];
        for (std::size_t c = col; c < d; ++c) a[r][c] -= f * a[col][c];
      }
    }
  }
  double quad = 0.0;
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) quad += (x[r] - mean[r]) * inv[r][c] * (x[c] - mean[c]);
  const double norm =
      std::pow(2.0 * std::numbers::pi, -0.5 * static_cast<double>(d)) / std::sqrt(det);
  return norm * std::exp(-0.5 * quad);
}

// responsibilities by naive arithmetic (no log-space)
inline Mat responsibilities_naive(const Mat& points, const std::vector<Vec>& means,
                                  const std::vector<Mat>& covs, const Vec& weights) {
  const std::size_t n = points.size();
  const std::size_t k = weights.size();
  Mat gamma = zeros(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      gamma[i][j] = weights[j] * gaussian_pdf(points[i], means[j], covs[j]);
      total += gamma[i][j];
    }
    for (std::size_t j = 0; j < k; ++j) gamma[i][j] /= total;
  }
  return gamma;
}

// deterministic xorshift generator for oracle-side random instances
struct SplitMix {
  std::uint64_t state;
  explicit SplitMix(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

}  // namespace oracle
