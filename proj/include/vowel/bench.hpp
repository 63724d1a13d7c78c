#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "vowel/dataset.hpp"
#include "vowel/errors.hpp"
#include "vowel/gmm.hpp"
#include "vowel/ofs_rbf.hpp"
#include "vowel/rbf.hpp"
#include "vowel/textio.hpp"

namespace vowel {

// ---------------------------------------------------------------------------
// Timing and the accuracy metric
// ---------------------------------------------------------------------------

/// Wall-clock time around the closure only (monotonic clock). Returns
/// {result, seconds}; void closures yield {true, seconds}.
template <typename F>
auto timed(F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  if constexpr (std::is_void_v<std::invoke_result_t<F&>>) {
    fn();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return std::pair<bool, double>(true, secs);
  } else {
    auto result = fn();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return std::pair<std::decay_t<decltype(result)>, double>(std::move(result), secs);
  }
}

/// (correct / total) * 100, computed as one exact integer product before the
/// final division.
inline double recognition_rate(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size()) throw data_error("recognition_rate: length mismatch");
  if (predicted.empty()) throw data_error("recognition_rate: empty input");
  long correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    if (predicted[i] == truth[i]) ++correct;
  return static_cast<double>(100 * correct) / static_cast<double>(predicted.size());
}

// ---------------------------------------------------------------------------
// Sweep configuration and results
// ---------------------------------------------------------------------------

struct SweepConfig {
  int gmm_centers_min = 1;
  int gmm_centers_max = 10;
  std::vector<CovarianceKind> covariance_kinds{CovarianceKind::diag, CovarianceKind::full};
  int rbf_neurons_min = 1;
  int rbf_neurons_max = 36;
  std::vector<std::uint64_t> seeds{1};
  std::filesystem::path train_path;
  std::filesystem::path test_path;
  std::filesystem::path out_dir;
  EmConfig em;             // k and rng_seed are overridden per run
  ForwardSelectConfig ofs;
  bool rbf_normalize_inputs = false;
};

struct RunResult {
  std::string model;
  std::string kind;  // covariance kind for gmm, empty otherwise
  int param = 0;     // centers k or hidden neurons M
  std::uint64_t seed = 0;
  double train_rate = 0.0;
  double test_rate = 0.0;
  double train_seconds = 0.0;
  double test_seconds = 0.0;
};

namespace detail {

inline void validate_sweep(const SweepConfig& cfg) {
  if (cfg.gmm_centers_min < 1 || cfg.gmm_centers_max < cfg.gmm_centers_min)
    throw config_error("sweep: bad gmm centers range");
  if (cfg.rbf_neurons_min < 1 || cfg.rbf_neurons_max < cfg.rbf_neurons_min)
    throw config_error("sweep: bad rbf neurons range");
  if (cfg.covariance_kinds.empty()) throw config_error("sweep: no covariance kinds");
  if (cfg.seeds.empty()) throw config_error("sweep: at least one seed required");
}

inline std::pair<Dataset, Dataset> load_split(const SweepConfig& cfg) {
  return {load_csv(cfg.train_path, false, DatasetRole::training),
          load_csv(cfg.test_path, false, DatasetRole::testing)};
}

// master seed -> per-run seed; run_index identifies the hyperparameter cell
inline std::uint64_t run_seed(std::uint64_t master, int run_index) {
  return master * 1000 + static_cast<std::uint64_t>(run_index);
}

template <typename Classify>
double rate_of(const Dataset& ds, Classify&& classify_point) {
  std::vector<int> predicted(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    predicted[i] = classify_point(Eigen::Vector2d(ds.points[i].x1, ds.points[i].x2));
  }
  return recognition_rate(predicted, labels_of(ds));
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write output file: " + path.string());
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// CSV emission
// ---------------------------------------------------------------------------

// Rates carry 2 decimals; timing lives in trailing *_time_s columns that
// golden-file comparisons exclude.

inline void write_gmm_results_csv(const std::vector<RunResult>& results,
                                  const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  out << "model,kind,k,seed,train_rate,test_rate,train_time_s,test_time_s\n";
  for (const auto& r : results) {
    out << r.model << ',' << r.kind << ',' << r.param << ',' << r.seed << ','
        << fmt_fixed(r.train_rate, 2) << ',' << fmt_fixed(r.test_rate, 2) << ','
        << fmt_fixed(r.train_seconds, 6) << ',' << fmt_fixed(r.test_seconds, 6) << '\n';
  }
}

inline void write_rbf_results_csv(const std::vector<RunResult>& results,
                                  const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  out << "model,M,seed,train_rate,test_rate,train_time_s,test_time_s\n";
  for (const auto& r : results) {
    out << r.model << ',' << r.param << ',' << r.seed << ',' << fmt_fixed(r.train_rate, 2) << ','
        << fmt_fixed(r.test_rate, 2) << ',' << fmt_fixed(r.train_seconds, 6) << ','
        << fmt_fixed(r.test_seconds, 6) << '\n';
  }
}

namespace detail {

struct MeanRow {
  std::string kind;
  int param = 0;
  double train_rate = 0.0;
  double test_rate = 0.0;
  double train_seconds = 0.0;
  double test_seconds = 0.0;
};

// seed-averaged rates and times per hyperparameter cell, in result order
inline std::vector<MeanRow> mean_rows(const std::vector<RunResult>& results) {
  std::vector<MeanRow> rows;
  std::map<std::pair<std::string, int>, std::size_t> index;
  std::vector<int> counts;
  for (const auto& r : results) {
    const auto key = std::make_pair(r.kind, r.param);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, rows.size()).first;
      rows.push_back({r.kind, r.param, 0.0, 0.0, 0.0, 0.0});
      counts.push_back(0);
    }
    auto& row = rows[it->second];
    row.train_rate += r.train_rate;
    row.test_rate += r.test_rate;
    row.train_seconds += r.train_seconds;
    row.test_seconds += r.test_seconds;
    ++counts[it->second];
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].train_rate /= counts[i];
    rows[i].test_rate /= counts[i];
    rows[i].train_seconds /= counts[i];
    rows[i].test_seconds /= counts[i];
  }
  return rows;
}

}  // namespace detail

inline void write_mean_results_csv(const std::vector<RunResult>& results, bool with_kind,
                                   const std::filesystem::path& path) {
  const auto rows = detail::mean_rows(results);
  auto out = detail::open_out(path);
  out << (with_kind ? "model,kind,k,mean_train_rate,mean_test_rate,mean_train_time_s,mean_test_time_s\n"
                    : "model,M,mean_train_rate,mean_test_rate,mean_train_time_s,mean_test_time_s\n");
  const std::string model = with_kind ? "gmm" : "rbf";
  for (const auto& row : rows) {
    out << model << ',';
    if (with_kind) out << row.kind << ',';
    out << row.param << ',' << fmt_fixed(row.train_rate, 2) << ',' << fmt_fixed(row.test_rate, 2)
        << ',' << fmt_fixed(row.train_seconds, 6) << ',' << fmt_fixed(row.test_seconds, 6) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

/// One run per (covariance kind, centers k, master seed), enumerated and
/// written in that sorted order. Per-run EM seeds derive from the master seed
/// as master*1000 + run_index, with run_index indexing the (kind, k) cell.
inline std::vector<RunResult> sweep_gmm(const SweepConfig& cfg) {
  detail::validate_sweep(cfg);
  const auto [train, test] = detail::load_split(cfg);

  std::vector<CovarianceKind> kinds = cfg.covariance_kinds;
  std::sort(kinds.begin(), kinds.end(),
            [](CovarianceKind a, CovarianceKind b) { return to_string(a) < to_string(b); });
  kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());
  std::vector<std::uint64_t> seeds = cfg.seeds;
  std::sort(seeds.begin(), seeds.end());

  const int n_k = cfg.gmm_centers_max - cfg.gmm_centers_min + 1;
  std::vector<RunResult> results;
  for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
    for (int k = cfg.gmm_centers_min; k <= cfg.gmm_centers_max; ++k) {
      const int run_index = static_cast<int>(ki) * n_k + (k - cfg.gmm_centers_min);
      for (const std::uint64_t master : seeds) {
        EmConfig em = cfg.em;
        em.k = k;
        em.rng_seed = detail::run_seed(master, run_index);
        auto [clf, fit_seconds] =
            timed([&] { return fit_classifier(train, em, kinds[ki]); });
        RunResult r;
        r.model = "gmm";
        r.kind = to_string(kinds[ki]);
        r.param = k;
        r.seed = master;
        r.train_seconds = fit_seconds;
        r.train_rate = detail::rate_of(
            train, [&](const Eigen::Vector2d& x) { return classify(x, clf).label; });
        auto [test_rate, test_seconds] = timed([&] {
          return detail::rate_of(
              test, [&](const Eigen::Vector2d& x) { return classify(x, clf).label; });
        });
        r.test_rate = test_rate;
        r.test_seconds = test_seconds;
        results.push_back(std::move(r));
      }
    }
  }
  if (!cfg.out_dir.empty()) {
    write_gmm_results_csv(results, cfg.out_dir / "results_gmm.csv");
    write_mean_results_csv(results, true, cfg.out_dir / "results_gmm_means.csv");
  }
  return results;
}

/// One run per (hidden neurons M, master seed); per-run seeds follow the same
/// master*1000 + run_index rule with run_index = M - M_min.
inline std::vector<RunResult> sweep_rbf(const SweepConfig& cfg) {
  detail::validate_sweep(cfg);
  const auto [train, test] = detail::load_split(cfg);
  if (static_cast<std::size_t>(cfg.rbf_neurons_max) > train.size())
    throw data_error("sweep_rbf: neuron range exceeds training size");

  std::vector<std::uint64_t> seeds = cfg.seeds;
  std::sort(seeds.begin(), seeds.end());

  std::vector<RunResult> results;
  for (int m = cfg.rbf_neurons_min; m <= cfg.rbf_neurons_max; ++m) {
    const int run_index = m - cfg.rbf_neurons_min;
    for (const std::uint64_t master : seeds) {
      RbfConfig rc;
      rc.hidden_neurons = m;
      rc.rng_seed = detail::run_seed(master, run_index);
      rc.normalize_inputs = cfg.rbf_normalize_inputs;
      auto [fit, fit_seconds] = timed([&] { return train_rbf(train, rc); });
      RunResult r;
      r.model = "rbf";
      r.param = m;
      r.seed = master;
      r.train_seconds = fit_seconds;
      r.train_rate = detail::rate_of(
          train, [&](const Eigen::Vector2d& x) { return predict(x, fit.first).label; });
      auto [test_rate, test_seconds] = timed([&] {
        return detail::rate_of(
            test, [&](const Eigen::Vector2d& x) { return predict(x, fit.first).label; });
      });
      r.test_rate = test_rate;
      r.test_seconds = test_seconds;
      results.push_back(std::move(r));
    }
  }
  if (!cfg.out_dir.empty()) {
    write_rbf_results_csv(results, cfg.out_dir / "results_rbf.csv");
    write_mean_results_csv(results, false, cfg.out_dir / "results_rbf_means.csv");
  }
  return results;
}

// ---------------------------------------------------------------------------
// One-vs-rest run
// ---------------------------------------------------------------------------

struct OfsRunSummary {
  OvrEnsemble ensemble;
  double multiclass_train_rate = 0.0;  // argmax over the ten binary outputs
  double multiclass_test_rate = 0.0;
  RunResult averaged;  // the paper-style averaged binary metric
};

inline OfsRunSummary run_ofs(const SweepConfig& cfg) {
  const auto [train, test] = detail::load_split(cfg);
  OfsRunSummary summary;
  summary.ensemble = train_one_vs_rest(train, test, cfg.ofs);

  summary.multiclass_train_rate = detail::rate_of(
      train, [&](const Eigen::Vector2d& x) { return ovr_classify(x, summary.ensemble); });
  summary.multiclass_test_rate = detail::rate_of(
      test, [&](const Eigen::Vector2d& x) { return ovr_classify(x, summary.ensemble); });

  summary.averaged.model = "ofs_rbf";
  summary.averaged.param = static_cast<int>(summary.ensemble.average_neurons + 0.5);
  summary.averaged.train_rate = summary.ensemble.average_train_accuracy;
  summary.averaged.test_rate = summary.ensemble.average_test_accuracy;
  summary.averaged.train_seconds = summary.ensemble.average_train_seconds;
  summary.averaged.test_seconds = summary.ensemble.average_test_seconds;

  if (!cfg.out_dir.empty()) {
    {
      auto out = detail::open_out(cfg.out_dir / "results_ofs.csv");
      out << "class,neurons,lambda,train_acc,test_acc\n";
      for (const auto& s : summary.ensemble.stats) {
        out << s.class_label << ',' << s.neurons << ',' << fmt_g17(s.lambda) << ','
            << fmt_fixed(s.train_accuracy, 2) << ',' << fmt_fixed(s.test_accuracy, 2) << '\n';
      }
      out << "average," << fmt_fixed(summary.ensemble.average_neurons, 2) << ",,"
          << fmt_fixed(summary.ensemble.average_train_accuracy, 2) << ','
          << fmt_fixed(summary.ensemble.average_test_accuracy, 2) << '\n';
    }
    {
      auto out = detail::open_out(cfg.out_dir / "results_ofs_summary.csv");
      out << "model,train_rate,test_rate,multiclass_train_rate,multiclass_test_rate,"
             "train_time_s,test_time_s\n";
      out << "ofs_rbf," << fmt_fixed(summary.averaged.train_rate, 2) << ','
          << fmt_fixed(summary.averaged.test_rate, 2) << ','
          << fmt_fixed(summary.multiclass_train_rate, 2) << ','
          << fmt_fixed(summary.multiclass_test_rate, 2) << ','
          << fmt_fixed(summary.averaged.train_seconds, 6) << ','
          << fmt_fixed(summary.averaged.test_seconds, 6) << '\n';
    }
  }
  return summary;
}

// ---------------------------------------------------------------------------
// Boundary grids
// ---------------------------------------------------------------------------

struct GridSpec {
  double x1_min = 198.0;
  double x1_max = 1300.0;
  double x1_step = (1300.0 - 198.0) / 199.0;
  double x2_min = 550.0;
  double x2_max = 3369.0;
  double x2_step = (3369.0 - 550.0) / 199.0;

  static GridSpec with_resolution(double x1_lo, double x1_hi, double x2_lo, double x2_hi,
                                  int n1, int n2) {
    if (!(x1_hi > x1_lo) || !(x2_hi > x2_lo) || n1 < 2 || n2 < 2)
      throw config_error("grid: ranges must have positive length and >= 2 points per axis");
    return {x1_lo, x1_hi, (x1_hi - x1_lo) / (n1 - 1), x2_lo, x2_hi, (x2_hi - x2_lo) / (n2 - 1)};
  }

  std::vector<double> axis(double lo, double hi, double step) const {
    if (!(step > 0.0) || !(hi > lo)) throw config_error("grid: bad axis");
    std::vector<double> values;
    const double limit = hi + step * 1e-9;
    for (double v = lo; v <= limit; v += step) values.push_back(v);
    return values;
  }
};

using PointScorer = std::function<std::pair<int, double>(double, double)>;

inline PointScorer scorer_of(const GmmClassifier& clf) {
  return [&clf](double x1, double x2) {
    const auto c = classify(Eigen::Vector2d(x1, x2), clf);
    return std::make_pair(c.label, c.log_scores[c.label]);
  };
}

inline PointScorer scorer_of(const RbfNetwork& net) {
  return [&net](double x1, double x2) {
    const auto p = predict(Eigen::Vector2d(x1, x2), net);
    return std::make_pair(p.label, p.scores[p.label]);
  };
}

inline PointScorer scorer_of(const OvrEnsemble& ensemble) {
  return [&ensemble](double x1, double x2) {
    const Eigen::Vector2d x(x1, x2);
    const int label = ovr_classify(x, ensemble);
    return std::make_pair(label, ofs_output(x, ensemble.models[static_cast<std::size_t>(label)]));
  };
}

/// Dense evaluation over the rectangle, row-major (x1 outer, x2 inner).
/// Emits x1,x2,label,score rows; score is the winning class's score, which
/// doubles as contour data. Returns the number of grid cells written.
inline long export_boundary_grid(const PointScorer& scorer, const GridSpec& grid,
                                 const std::filesystem::path& path) {
  const auto xs = grid.axis(grid.x1_min, grid.x1_max, grid.x1_step);
  const auto ys = grid.axis(grid.x2_min, grid.x2_max, grid.x2_step);
  auto out = detail::open_out(path);
  out << "x1,x2,label,score\n";
  long rows = 0;
  for (const double x1 : xs) {
    for (const double x2 : ys) {
      const auto [label, score] = scorer(x1, x2);
      out << fmt_g17(x1) << ',' << fmt_g17(x2) << ',' << label << ',' << fmt_g17(score) << '\n';
      ++rows;
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Model comparison
// ---------------------------------------------------------------------------

struct ModelComparison {
  std::string model;
  double train_rate = 0.0;
  double test_rate = 0.0;
  double avg_rate = 0.0;  // (train + test) / 2, the tie-resolution metric
  double train_seconds = 0.0;
  double test_seconds = 0.0;
};

inline std::vector<ModelComparison> compare_models(const RunResult& gmm_best,
                                                   const RunResult& rbf_best,
                                                   const RunResult& ofs_avg) {
  const auto row = [](const RunResult& r) {
    return ModelComparison{r.model,
                           r.train_rate,
                           r.test_rate,
                           (r.train_rate + r.test_rate) / 2.0,
                           r.train_seconds,
                           r.test_seconds};
  };
  return {row(gmm_best), row(rbf_best), row(ofs_avg)};
}

inline void write_comparison_csv(const std::vector<ModelComparison>& rows,
                                 const std::filesystem::path& path) {
  auto out = detail::open_out(path);
  out << "model,train_rate,test_rate,avg_rate,train_time_s,test_time_s\n";
  for (const auto& r : rows) {
    out << r.model << ',' << fmt_fixed(r.train_rate, 2) << ',' << fmt_fixed(r.test_rate, 2) << ','
        << fmt_fixed(r.avg_rate, 2) << ',' << fmt_fixed(r.train_seconds, 6) << ','
        << fmt_fixed(r.test_seconds, 6) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Reading sweep outputs back (the `compare` subcommand's input)
// ---------------------------------------------------------------------------

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  static CsvTable load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error("missing pipeline result: " + path.string());
    CsvTable table;
    std::string line;
    while (std::getline(in, line)) {
      const auto text = trim(line);
      if (text.empty()) continue;
      std::vector<std::string> fields;
      for (const auto f : split(text, ',')) fields.emplace_back(f);
      if (table.header.empty())
        table.header = std::move(fields);
      else
        table.rows.push_back(std::move(fields));
    }
    if (table.header.empty()) throw data_error("empty results file: " + path.string());
    return table;
  }

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw data_error("results file lacks column: " + name);
  }

  double number(std::size_t row, std::size_t col) const {
    double v = 0.0;
    if (!try_parse_double(rows[row][col], v)) throw data_error("results file: non-numeric cell");
    return v;
  }
};

namespace detail {

// best (by seed-averaged test rate) hyperparameter cell of a sweep CSV
inline RunResult best_sweep_row(const std::filesystem::path& path, const std::string& model,
                                const std::string& param_col, bool with_kind) {
  const CsvTable table = CsvTable::load(path);
  const auto param_idx = table.column(param_col);
  const auto kind_idx = with_kind ? table.column("kind") : 0;
  const auto train_idx = table.column("train_rate");
  const auto test_idx = table.column("test_rate");
  const auto train_time_idx = table.column("train_time_s");
  const auto test_time_idx = table.column("test_time_s");

  struct Cell {
    double train = 0, test = 0, train_time = 0, test_time = 0;
    int count = 0;
  };
  std::map<std::pair<std::string, std::string>, Cell> cells;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto key = std::make_pair(with_kind ? table.rows[r][kind_idx] : std::string{},
                                    table.rows[r][param_idx]);
    auto& cell = cells[key];
    cell.train += table.number(r, train_idx);
    cell.test += table.number(r, test_idx);
    cell.train_time += table.number(r, train_time_idx);
    cell.test_time += table.number(r, test_time_idx);
    ++cell.count;
  }
  if (cells.empty()) throw data_error("no rows in results file: " + path.string());

  RunResult best;
  best.model = model;
  double best_test = -1.0;
  for (const auto& [key, cell] : cells) {
    const double test = cell.test / cell.count;
    if (test > best_test) {
      best_test = test;
      best.kind = key.first;
      long param = 0;
      try_parse_long(key.second, param);
      best.param = static_cast<int>(param);
      best.train_rate = cell.train / cell.count;
      best.test_rate = test;
      best.train_seconds = cell.train_time / cell.count;
      best.test_seconds = cell.test_time / cell.count;
    }
  }
  return best;
}

}  // namespace detail

inline RunResult best_gmm_result(const std::filesystem::path& results_csv) {
  return detail::best_sweep_row(results_csv, "gmm", "k", true);
}

inline RunResult best_rbf_result(const std::filesystem::path& results_csv) {
  return detail::best_sweep_row(results_csv, "rbf", "M", false);
}

inline RunResult ofs_summary_result(const std::filesystem::path& summary_csv) {
  const CsvTable table = CsvTable::load(summary_csv);
  if (table.rows.empty()) throw data_error("no rows in results file: " + summary_csv.string());
  RunResult r;
  r.model = "ofs_rbf";
  r.train_rate = table.number(0, table.column("train_rate"));
  r.test_rate = table.number(0, table.column("test_rate"));
  r.train_seconds = table.number(0, table.column("train_time_s"));
  r.test_seconds = table.number(0, table.column("test_time_s"));
  return r;
}

}  // namespace vowel
