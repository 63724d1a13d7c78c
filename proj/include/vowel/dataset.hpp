#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vowel/errors.hpp"
#include "vowel/rng.hpp"
#include "vowel/textio.hpp"

namespace vowel {

inline constexpr int kNumClasses = 10;

/// One 2-D formant-like observation with its vowel class (0..9).
struct LabeledPoint {
  double x1 = 0.0;
  double x2 = 0.0;
  int label = 0;
};

enum class DatasetRole { training, testing };

inline std::string to_string(DatasetRole role) {
  return role == DatasetRole::training ? "training" : "testing";
}

/// Ordered collection of observations. Point order is preserved exactly as
/// loaded; fitted models must not depend on it.
struct Dataset {
  std::vector<LabeledPoint> points;
  DatasetRole role = DatasetRole::training;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

inline std::array<int, kNumClasses> class_counts(const Dataset& ds) {
  std::array<int, kNumClasses> counts{};
  for (const auto& p : ds.points) {
    if (p.label >= 0 && p.label < kNumClasses) ++counts[p.label];
  }
  return counts;
}

/// n x 2 matrix of inputs, rows in dataset order.
inline Eigen::MatrixXd inputs_matrix(const Dataset& ds) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(ds.size()), 2);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    m(i, 0) = ds.points[i].x1;
    m(i, 1) = ds.points[i].x2;
  }
  return m;
}

inline std::vector<int> labels_of(const Dataset& ds) {
  std::vector<int> out(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) out[i] = ds.points[i].label;
  return out;
}

// ---------------------------------------------------------------------------
// CSV I/O
//
// Schema: optional header "x1,x2,label", then one "x1,x2,label" record per
// line. Labels are integers 0..9; pass shift_labels=true for files encoded
// 1..10. Malformed rows are hard errors carrying the 1-based line number.
// ---------------------------------------------------------------------------

inline Dataset load_csv(const std::filesystem::path& path, bool shift_labels = false,
                        DatasetRole role = DatasetRole::training) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open dataset file: " + path.string());

  Dataset ds;
  ds.role = role;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (line_no == 1 && text == "x1,x2,label") continue;
    const auto at = [&] { return " at line " + std::to_string(line_no) + " of " + path.string(); };
    const auto fields = split(text, ',');
    if (fields.size() != 3) throw data_error("expected 3 fields" + at());
    double x1 = 0.0;
    double x2 = 0.0;
    long label = 0;
    if (!try_parse_double(fields[0], x1) || !try_parse_double(fields[1], x2))
      throw data_error("non-numeric feature" + at());
    if (!std::isfinite(x1) || !std::isfinite(x2)) throw data_error("non-finite feature" + at());
    if (!try_parse_long(fields[2], label)) throw data_error("non-integer label" + at());
    if (shift_labels) label -= 1;
    if (label < 0 || label >= kNumClasses) throw data_error("label out of range" + at());
    ds.points.push_back({x1, x2, static_cast<int>(label)});
  }
  if (ds.empty()) throw data_error("empty dataset: " + path.string());
  return ds;
}

inline void write_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write dataset file: " + path.string());
  out << "x1,x2,label\n";
  for (const auto& p : ds.points) {
    out << fmt_g17(p.x1) << ',' << fmt_g17(p.x2) << ',' << p.label << '\n';
  }
}

// ---------------------------------------------------------------------------
// Descriptive statistics
// ---------------------------------------------------------------------------

struct FeatureSummary {
  double average = 0.0;
  double mode = 0.0;     // most frequent exact value, ties toward the smallest
  double median = 0.0;   // mean of the middle two for even n
  double std_dev = 0.0;  // sample standard deviation (n-1 denominator)
  double max = 0.0;
  double min = 0.0;
};

struct FeatureStats {
  FeatureSummary x1;
  FeatureSummary x2;
};

namespace detail {

inline FeatureSummary summarize(std::vector<double> values) {
  FeatureSummary s;
  const std::size_t n = values.size();
  std::sort(values.begin(), values.end());
  s.min = values.front();
  s.max = values.back();
  s.median = (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);

  double sum = 0.0;
  for (double v : values) sum += v;
  s.average = sum / static_cast<double>(n);

  double sq = 0.0;
  for (double v : values) sq += (v - s.average) * (v - s.average);
  s.std_dev = n > 1 ? std::sqrt(sq / static_cast<double>(n - 1)) : 0.0;

  // exact-value frequency over the sorted sequence; first maximal run wins,
  // which is the smallest value among ties
  s.mode = values.front();
  std::size_t best_run = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && values[j] == values[i]) ++j;
    if (j - i > best_run) {
      best_run = j - i;
      s.mode = values[i];
    }
    i = j;
  }
  return s;
}

}  // namespace detail

inline FeatureStats descriptive_stats(const Dataset& ds) {
  if (ds.empty()) throw data_error("descriptive_stats: empty dataset");
  std::vector<double> v1(ds.size()), v2(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    v1[i] = ds.points[i].x1;
    v2[i] = ds.points[i].x2;
  }
  return {detail::summarize(std::move(v1)), detail::summarize(std::move(v2))};
}

/// CSV with columns stat,x1,x2 in the row order Average, Mode, Median,
/// Std Dev, Max, Min.
inline void write_stats_csv(const FeatureStats& stats, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write stats file: " + path.string());
  out << "stat,x1,x2\n";
  const auto row = [&](const char* name, double a, double b) {
    out << name << ',' << fmt_fixed(a, 2) << ',' << fmt_fixed(b, 2) << '\n';
  };
  row("Average", stats.x1.average, stats.x2.average);
  row("Mode", stats.x1.mode, stats.x2.mode);
  row("Median", stats.x1.median, stats.x2.median);
  row("Std Dev", stats.x1.std_dev, stats.x2.std_dev);
  row("Max", stats.x1.max, stats.x2.max);
  row("Min", stats.x1.min, stats.x2.min);
}

// ---------------------------------------------------------------------------
// Synthetic data
// ---------------------------------------------------------------------------

struct ClassGaussian {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Identity();
  int count = 0;
};

struct SyntheticSpec {
  std::array<ClassGaussian, kNumClasses> classes;
  std::uint64_t rng_seed = 0;
};

/// Draws each class from its 2-D Gaussian, deterministically for a given
/// seed. Points are emitted in class order, then draw order.
inline Dataset synthesize(const SyntheticSpec& spec, DatasetRole role = DatasetRole::training) {
  Dataset ds;
  ds.role = role;
  for (int c = 0; c < kNumClasses; ++c) {
    const auto& g = spec.classes[c];
    const std::string who = "synthesize: class " + std::to_string(c);
    if (g.count < 1) throw data_error(who + " has non-positive count");
    const double a = g.covariance(0, 0);
    const double b = g.covariance(0, 1);
    const double b2 = g.covariance(1, 0);
    const double d = g.covariance(1, 1);
    if (std::abs(b - b2) > 1e-12 * (std::abs(b) + std::abs(b2) + 1.0))
      throw data_error(who + ": covariance not symmetric");
    if (!(a > 0.0) || !(d - (b / a) * b > 0.0))
      throw data_error(who + ": covariance not positive-definite");
    // lower Cholesky factor of the 2x2 covariance
    const double l11 = std::sqrt(a);
    const double l21 = b / l11;
    const double l22 = std::sqrt(d - l21 * l21);

    Rng rng(derive_seed(spec.rng_seed, static_cast<std::uint64_t>(c)));
    for (int i = 0; i < g.count; ++i) {
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      ds.points.push_back({g.mean.x() + l11 * z1, g.mean.y() + l21 * z1 + l22 * z2, c});
    }
  }
  return ds;
}

// ---------------------------------------------------------------------------
// Stratified split
// ---------------------------------------------------------------------------

/// Splits each class as close to train_fraction as rounding allows,
/// deterministically for a given seed. Outputs preserve the input's relative
/// point order and partition it exactly.
inline std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, double train_fraction,
                                                    std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw config_error("stratified_split: train_fraction must be in (0,1)");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < ds.size(); ++i) by_class[ds.points[i].label].push_back(i);
  std::vector<char> in_train(ds.size(), 0);
  for (auto& [label, idx] : by_class) {
    if (idx.size() < 2)
      throw data_error("stratified_split: class " + std::to_string(label) + " has fewer than 2 points");
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(label)));
    for (std::size_t i = idx.size() - 1; i > 0; --i) {
      const std::size_t j = rng.uniform_below(i + 1);
      std::swap(idx[i], idx[j]);
    }
    const auto take = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(idx.size())));
    for (std::size_t i = 0; i < take && i < idx.size(); ++i) in_train[idx[i]] = 1;
  }
  Dataset train, test;
  train.role = DatasetRole::training;
  test.role = DatasetRole::testing;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    (in_train[i] ? train : test).points.push_back(ds.points[i]);
  }
  return {std::move(train), std::move(test)};
}

// ---------------------------------------------------------------------------
// Built-in stand-in generator
//
// Ten formant-like vowel classes on the F1/F2 plane. The class layout follows
// the classic adult-vowel chart; the spread constants are calibrated so that
// a 338-point training draw reproduces the reference pooled statistics
// (average and standard deviation per feature) of the original benchmark
// tables. The generated files ship under data/ and are regenerable with the
// `synth` subcommand.
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kStandinTrainSeed = 1207;
inline constexpr std::uint64_t kStandinTestSeed = 4093;

inline SyntheticSpec standin_spec(DatasetRole role) {
  // base class means (x1, x2) before the pooled-moment calibration below
  static constexpr double kBaseMeans[kNumClasses][2] = {
      {270.0, 2390.0}, {390.0, 1990.0}, {515.0, 1840.0}, {680.0, 1620.0}, {760.0, 1090.0},
      {545.0, 840.0},  {440.0, 1020.0}, {300.0, 870.0},  {650.0, 1190.0}, {455.0, 1350.0}};
  static constexpr double kBasePooledMean[2] = {500.5, 1420.0};
  // stretch of the between-class layout and shared within-class spread,
  // chosen so pooled mean/std/median land on the reference values
  static constexpr double kTargetMean[2] = {567.82, 1533.18};
  static constexpr double kStretch[2] = {1.24, 1.32};
  static constexpr double kWithinStd[2] = {85.0, 180.0};
  static constexpr double kSpreadScale[kNumClasses] = {1.10, 0.95, 0.90, 1.05, 1.00,
                                                       0.95, 0.90, 1.05, 1.10, 1.00};
  static constexpr double kCorrelation[kNumClasses] = {0.45, 0.40, 0.35, 0.30, 0.35,
                                                       0.40, 0.30, 0.45, 0.35, 0.40};
  static constexpr int kTrainCounts[kNumClasses] = {34, 34, 34, 34, 34, 34, 34, 34, 33, 33};
  static constexpr int kTestCounts[kNumClasses] = {34, 34, 34, 33, 33, 33, 33, 33, 33, 33};

  SyntheticSpec spec;
  spec.rng_seed = role == DatasetRole::training ? kStandinTrainSeed : kStandinTestSeed;
  for (int c = 0; c < kNumClasses; ++c) {
    auto& g = spec.classes[c];
    for (int f = 0; f < 2; ++f) {
      g.mean[f] = kTargetMean[f] + kStretch[f] * (kBaseMeans[c][f] - kBasePooledMean[f]);
    }
    const double s1 = kWithinStd[0] * kSpreadScale[c];
    const double s2 = kWithinStd[1] * kSpreadScale[c];
    const double cross = kCorrelation[c] * s1 * s2;
    g.covariance << s1 * s1, cross, cross, s2 * s2;
    g.count = (role == DatasetRole::training ? kTrainCounts : kTestCounts)[c];
  }
  return spec;
}

}  // namespace vowel
