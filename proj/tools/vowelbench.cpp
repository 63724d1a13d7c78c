// vowelbench: trains and compares the three vowel classifiers (per-class
// GMM, standard RBF network, forward-selection RBF) and exports sweep
// results, descriptive statistics and decision-boundary grids as CSV.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vowel/bench.hpp"
#include "vowel/config.hpp"
#include "vowel/dataset.hpp"
#include "vowel/model_io.hpp"

namespace fs = std::filesystem;
using namespace vowel;

namespace {

struct CommonArgs {
  std::string train_path;
  std::string test_path;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--train", args.train_path, "training CSV (x1,x2,label)");
  cmd->add_option("--test", args.test_path, "testing CSV");
  cmd->add_option("--config", args.config_path, "key = value config file");
  cmd->add_option("--seed", args.seed, "master seed");
  cmd->add_option("--out", args.out_dir, "output directory");
}

ConfigFile load_config(const CommonArgs& args) {
  if (args.config_path.empty()) return {};
  return ConfigFile::load(args.config_path);
}

// config file first, CLI flags win
SweepConfig make_sweep_config(const CommonArgs& args, const ConfigFile& file) {
  SweepConfig cfg;
  cfg.train_path = args.train_path.empty() ? file.get_string("data.train", "") : args.train_path;
  cfg.test_path = args.test_path.empty() ? file.get_string("data.test", "") : args.test_path;
  cfg.out_dir = args.out_dir != "." ? args.out_dir : file.get_string("out.dir", args.out_dir);

  cfg.gmm_centers_min = static_cast<int>(file.get_int("gmm.centers_min", 1));
  cfg.gmm_centers_max = static_cast<int>(file.get_int("gmm.centers_max", 10));
  cfg.em.n_restarts = static_cast<int>(file.get_int("gmm.restarts", 5));
  cfg.em.max_iterations = static_cast<int>(file.get_int("gmm.max_iterations", 200));
  cfg.em.log_likelihood_tolerance = file.get_double("gmm.tolerance", 1e-6);
  cfg.em.covariance_floor = file.get_double("gmm.covariance_floor", 1e-4);
  if (const auto kinds = file.get("gmm.kinds")) {
    cfg.covariance_kinds.clear();
    for (const auto tok : split(*kinds, ','))
      cfg.covariance_kinds.push_back(covariance_kind_from_string(std::string(trim(tok))));
  }

  cfg.rbf_neurons_min = static_cast<int>(file.get_int("rbf.neurons_min", 1));
  cfg.rbf_neurons_max = static_cast<int>(file.get_int("rbf.neurons_max", 36));
  cfg.rbf_normalize_inputs = file.get_bool("rbf.normalize", false);

  cfg.ofs.max_neurons = static_cast<int>(file.get_int("ofs.max_neurons", 36));
  cfg.ofs.candidate_spreads = file.get_double_list("ofs.spreads", {});

  cfg.seeds = {args.seed.value_or(static_cast<std::uint64_t>(file.get_int("seed", 1)))};
  return cfg;
}

void require_paths(const SweepConfig& cfg, bool need_test) {
  if (cfg.train_path.empty()) throw config_error("missing --train (or data.train in the config)");
  if (need_test && cfg.test_path.empty())
    throw config_error("missing --test (or data.test in the config)");
}

GridSpec parse_grid(const std::string& text) {
  if (text.empty()) return {};
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw config_error("grid: expected x1lo:x1hi:n1,x2lo:x2hi:n2");
  double lo[2], hi[2];
  long n[2];
  for (int axis = 0; axis < 2; ++axis) {
    const auto fields = split(parts[axis], ':');
    if (fields.size() != 3 || !try_parse_double(fields[0], lo[axis]) ||
        !try_parse_double(fields[1], hi[axis]) || !try_parse_long(fields[2], n[axis]))
      throw config_error("grid: expected x1lo:x1hi:n1,x2lo:x2hi:n2");
  }
  return GridSpec::with_resolution(lo[0], hi[0], lo[1], hi[1], static_cast<int>(n[0]),
                                   static_cast<int>(n[1]));
}

void ensure_out_dir(const fs::path& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

int run_stats(const CommonArgs& args) {
  const auto file = load_config(args);
  const auto cfg = make_sweep_config(args, file);
  if (cfg.train_path.empty() && cfg.test_path.empty())
    throw config_error("stats: provide --train and/or --test");
  ensure_out_dir(cfg.out_dir);
  const auto emit = [&](const fs::path& path, DatasetRole role) {
    const Dataset ds = load_csv(path, false, role);
    const FeatureStats stats = descriptive_stats(ds);
    const fs::path out = cfg.out_dir / ("stats_" + to_string(role) + ".csv");
    write_stats_csv(stats, out);
    std::cout << to_string(role) << ": " << ds.size() << " points -> " << out.string() << '\n';
  };
  if (!cfg.train_path.empty()) emit(cfg.train_path, DatasetRole::training);
  if (!cfg.test_path.empty()) emit(cfg.test_path, DatasetRole::testing);
  return 0;
}

int run_synth(const CommonArgs& args) {
  const auto file = load_config(args);
  const auto cfg = make_sweep_config(args, file);
  ensure_out_dir(cfg.out_dir);

  SyntheticSpec train_spec = standin_spec(DatasetRole::training);
  SyntheticSpec test_spec = standin_spec(DatasetRole::testing);
  if (args.seed) {
    train_spec.rng_seed = *args.seed;
    test_spec.rng_seed = derive_seed(*args.seed, 1);
  }
  const Dataset train = synthesize(train_spec, DatasetRole::training);
  const Dataset test = synthesize(test_spec, DatasetRole::testing);
  const fs::path train_out = cfg.out_dir / "synthetic_train.csv";
  const fs::path test_out = cfg.out_dir / "synthetic_test.csv";
  write_csv(train, train_out);
  write_csv(test, test_out);
  std::cout << "wrote " << train_out.string() << " (" << train.size() << " points)\n";
  std::cout << "wrote " << test_out.string() << " (" << test.size() << " points)\n";
  return 0;
}

int run_sweep_gmm(const CommonArgs& args) {
  const auto file = load_config(args);
  auto cfg = make_sweep_config(args, file);
  require_paths(cfg, true);
  ensure_out_dir(cfg.out_dir);
  const auto results = sweep_gmm(cfg);
  std::cout << "gmm sweep: " << results.size() << " runs -> "
            << (cfg.out_dir / "results_gmm.csv").string() << '\n';
  return 0;
}

int run_sweep_rbf(const CommonArgs& args) {
  const auto file = load_config(args);
  auto cfg = make_sweep_config(args, file);
  require_paths(cfg, true);
  ensure_out_dir(cfg.out_dir);
  const auto results = sweep_rbf(cfg);
  std::cout << "rbf sweep: " << results.size() << " runs -> "
            << (cfg.out_dir / "results_rbf.csv").string() << '\n';
  return 0;
}

int run_run_ofs(const CommonArgs& args) {
  const auto file = load_config(args);
  auto cfg = make_sweep_config(args, file);
  require_paths(cfg, true);
  ensure_out_dir(cfg.out_dir);
  const auto summary = run_ofs(cfg);
  std::cout << "ofs-rbf: average binary accuracy train "
            << fmt_fixed(summary.averaged.train_rate, 2) << "% / test "
            << fmt_fixed(summary.averaged.test_rate, 2) << "%\n";
  std::cout << "ofs-rbf: derived multiclass rate train "
            << fmt_fixed(summary.multiclass_train_rate, 2) << "% / test "
            << fmt_fixed(summary.multiclass_test_rate, 2) << "%\n";
  std::cout << "wrote " << (cfg.out_dir / "results_ofs.csv").string() << '\n';
  return 0;
}

int run_compare(const CommonArgs& args) {
  const auto file = load_config(args);
  const auto cfg = make_sweep_config(args, file);
  const fs::path dir = cfg.out_dir;
  const auto rows = compare_models(best_gmm_result(dir / "results_gmm.csv"),
                                   best_rbf_result(dir / "results_rbf.csv"),
                                   ofs_summary_result(dir / "results_ofs_summary.csv"));
  write_comparison_csv(rows, dir / "comparison.csv");
  for (const auto& r : rows) {
    std::cout << r.model << ": train " << fmt_fixed(r.train_rate, 2) << "% test "
              << fmt_fixed(r.test_rate, 2) << "% avg " << fmt_fixed(r.avg_rate, 2) << "%\n";
  }
  std::cout << "wrote " << (dir / "comparison.csv").string() << '\n';
  return 0;
}

struct BoundaryArgs {
  std::string model = "gmm";
  int gmm_k = 2;
  std::string gmm_kind = "full";
  int rbf_neurons = 15;
  std::string grid_text;
  std::string model_file;
  std::string save_model_path;
};

int run_boundary(const CommonArgs& args, const BoundaryArgs& opts) {
  const auto file = load_config(args);
  auto cfg = make_sweep_config(args, file);
  ensure_out_dir(cfg.out_dir);
  const GridSpec grid = parse_grid(opts.grid_text);
  const fs::path out = cfg.out_dir / ("boundary_" + opts.model + ".csv");
  const std::uint64_t master = cfg.seeds.front();

  long cells = 0;
  if (opts.model == "gmm") {
    GmmClassifier clf;
    if (!opts.model_file.empty()) {
      clf = load_gmm_file(opts.model_file);
    } else {
      require_paths(cfg, false);
      EmConfig em = cfg.em;
      em.k = opts.gmm_k;
      em.rng_seed = master;
      clf = fit_classifier(load_csv(cfg.train_path), em,
                           covariance_kind_from_string(opts.gmm_kind));
    }
    if (!opts.save_model_path.empty()) save_model_file(clf, opts.save_model_path);
    cells = export_boundary_grid(scorer_of(clf), grid, out);
  } else if (opts.model == "rbf") {
    RbfNetwork net;
    if (!opts.model_file.empty()) {
      net = load_rbf_file(opts.model_file);
    } else {
      require_paths(cfg, false);
      RbfConfig rc;
      rc.hidden_neurons = opts.rbf_neurons;
      rc.rng_seed = master;
      rc.normalize_inputs = cfg.rbf_normalize_inputs;
      net = train_rbf(load_csv(cfg.train_path), rc).first;
    }
    if (!opts.save_model_path.empty()) save_model_file(net, opts.save_model_path);
    cells = export_boundary_grid(scorer_of(net), grid, out);
  } else if (opts.model == "ofs") {
    require_paths(cfg, false);
    const Dataset train = load_csv(cfg.train_path);
    const Eigen::MatrixXd inputs = inputs_matrix(train);
    ForwardSelectConfig fs_cfg = cfg.ofs;
    if (fs_cfg.candidate_spreads.empty())
      fs_cfg.candidate_spreads = default_spread_ladder(inputs);
    OvrEnsemble ensemble;
    for (int c = 0; c < kNumClasses; ++c) {
      Eigen::VectorXd targets(inputs.rows());
      for (Eigen::Index i = 0; i < inputs.rows(); ++i)
        targets[i] = train.points[static_cast<std::size_t>(i)].label == c ? 1.0 : 0.0;
      ensemble.models.push_back(forward_select(inputs, targets, fs_cfg));
    }
    cells = export_boundary_grid(scorer_of(ensemble), grid, out);
  } else {
    throw config_error("boundary: unknown model '" + opts.model + "'");
  }
  std::cout << "wrote " << out.string() << " (" << cells << " cells)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vowel classifier benchmark harness"};
  app.require_subcommand(1);

  CommonArgs stats_args, synth_args, gmm_args, rbf_args, ofs_args, compare_args, boundary_args;
  BoundaryArgs boundary_opts;

  add_common(app.add_subcommand("stats", "descriptive statistics per dataset"), stats_args);
  add_common(app.add_subcommand("synth", "generate the synthetic stand-in datasets"), synth_args);
  add_common(app.add_subcommand("sweep-gmm", "centers x covariance-kind GMM sweep"), gmm_args);
  add_common(app.add_subcommand("sweep-rbf", "hidden-neuron RBF sweep"), rbf_args);
  add_common(app.add_subcommand("run-ofs", "one-vs-rest forward-selection RBF run"), ofs_args);
  add_common(app.add_subcommand("compare", "best-configuration comparison table"), compare_args);
  auto* boundary = app.add_subcommand("boundary", "decision-boundary grid export");
  add_common(boundary, boundary_args);
  boundary->add_option("--model", boundary_opts.model, "gmm | rbf | ofs");
  boundary->add_option("--k", boundary_opts.gmm_k, "GMM centers per class");
  boundary->add_option("--kind", boundary_opts.gmm_kind, "GMM covariance kind");
  boundary->add_option("--neurons", boundary_opts.rbf_neurons, "RBF hidden neurons");
  boundary->add_option("--grid", boundary_opts.grid_text, "x1lo:x1hi:n1,x2lo:x2hi:n2");
  boundary->add_option("--model-file", boundary_opts.model_file, "load a saved model instead of training");
  boundary->add_option("--save-model", boundary_opts.save_model_path, "save the trained model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }

  try {
    if (app.got_subcommand("stats")) return run_stats(stats_args);
    if (app.got_subcommand("synth")) return run_synth(synth_args);
    if (app.got_subcommand("sweep-gmm")) return run_sweep_gmm(gmm_args);
    if (app.got_subcommand("sweep-rbf")) return run_sweep_rbf(rbf_args);
    if (app.got_subcommand("run-ofs")) return run_run_ofs(ofs_args);
    if (app.got_subcommand("compare")) return run_compare(compare_args);
    if (app.got_subcommand("boundary")) return run_boundary(boundary_args, boundary_opts);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const data_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
