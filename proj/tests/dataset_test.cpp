#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "vowel/dataset.hpp"

using namespace vowel;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "vowel_dataset_tests";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_file(const std::string& name, const std::string& content) {
  const fs::path path = temp_file(name);
  std::ofstream out(path);
  out << content;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("load_csv parses rows with and without the header") {
  const auto headerless = write_file("single.csv", "600.0,1400.0,3\n");
  const Dataset ds = load_csv(headerless);
  REQUIRE(ds.size() == 1);
  CHECK(ds.points[0].x1 == 600.0);
  CHECK(ds.points[0].x2 == 1400.0);
  CHECK(ds.points[0].label == 3);

  const auto with_header = write_file("header.csv", "x1,x2,label\n600.0,1400.0,3\n");
  CHECK(load_csv(with_header).size() == 1);
}

TEST_CASE("load_csv rejects malformed rows with 1-based line numbers") {
  const auto bad_label = write_file("bad_label.csv", "x1,x2,label\n600.0,1400.0,12\n");
  CHECK_THROWS_WITH(load_csv(bad_label), Catch::Matchers::ContainsSubstring("label out of range") &&
                                             Catch::Matchers::ContainsSubstring("line 2"));

  const auto bad_fields = write_file("bad_fields.csv", "600.0,1400.0\n");
  CHECK_THROWS_WITH(load_csv(bad_fields), Catch::Matchers::ContainsSubstring("3 fields"));

  const auto bad_number = write_file("bad_number.csv", "abc,1400.0,3\n");
  CHECK_THROWS_WITH(load_csv(bad_number), Catch::Matchers::ContainsSubstring("non-numeric"));

  const auto fractional_label = write_file("frac_label.csv", "600.0,1400.0,3.5\n");
  CHECK_THROWS_AS(load_csv(fractional_label), data_error);

  CHECK_THROWS_AS(load_csv(temp_file("missing.csv")), data_error);
}

TEST_CASE("load_csv shift flag maps 1..10 labels onto 0..9") {
  const auto path = write_file("shifted.csv", "600,1400,10\n500,1200,1\n");
  const Dataset ds = load_csv(path, true);
  CHECK(ds.points[0].label == 9);
  CHECK(ds.points[1].label == 0);
  CHECK_THROWS_AS(load_csv(path), data_error);  // unshifted 10 is out of range
}

TEST_CASE("stand-in generator matches the published split sizes") {
  const Dataset train = synthesize(standin_spec(DatasetRole::training));
  const Dataset test = synthesize(standin_spec(DatasetRole::testing));
  CHECK(train.size() == 338);
  CHECK(test.size() == 333);
  const auto counts = class_counts(train);
  for (int c = 0; c < kNumClasses; ++c) CHECK(counts[c] >= 33);
}

TEST_CASE("descriptive_stats on a degenerate dataset") {
  Dataset ds;
  for (int i = 0; i < 4; ++i) ds.points.push_back({500.0, 1500.0, 1});
  const FeatureStats stats = descriptive_stats(ds);
  CHECK(stats.x1.average == 500.0);
  CHECK(stats.x1.median == 500.0);
  CHECK(stats.x1.mode == 500.0);
  CHECK(stats.x1.max == 500.0);
  CHECK(stats.x1.min == 500.0);
  CHECK(stats.x1.std_dev == 0.0);
  CHECK(stats.x2.average == 1500.0);
  CHECK(stats.x2.std_dev == 0.0);
}

TEST_CASE("descriptive_stats mode ties break toward the smallest value") {
  Dataset ds;
  for (double v : {300.0, 300.0, 700.0, 700.0, 500.0}) ds.points.push_back({v, v, 0});
  const FeatureStats stats = descriptive_stats(ds);
  CHECK(stats.x1.mode == 300.0);
  CHECK(stats.x1.median == 500.0);
}

TEST_CASE("descriptive_stats median averages the middle two for even n") {
  Dataset ds;
  for (double v : {1.0, 2.0, 3.0, 10.0}) ds.points.push_back({v, 2.0 * v, 0});
  const FeatureStats stats = descriptive_stats(ds);
  CHECK(stats.x1.median == 2.5);
  CHECK(stats.x2.median == 5.0);
}

TEST_CASE("descriptive_stats is permutation-invariant") {
  Dataset ds = synthesize(standin_spec(DatasetRole::training));
  const FeatureStats before = descriptive_stats(ds);
  Rng rng(99);
  for (std::size_t i = ds.size() - 1; i > 0; --i) {
    std::swap(ds.points[i], ds.points[rng.uniform_below(i + 1)]);
  }
  const FeatureStats after = descriptive_stats(ds);
  CHECK(before.x1.average == after.x1.average);
  CHECK(before.x1.std_dev == after.x1.std_dev);
  CHECK(before.x1.mode == after.x1.mode);
  CHECK(before.x1.median == after.x1.median);
  CHECK(before.x2.max == after.x2.max);
  CHECK(before.x2.min == after.x2.min);
}

TEST_CASE("descriptive_stats rejects the empty dataset") {
  CHECK_THROWS_AS(descriptive_stats(Dataset{}), data_error);
}

TEST_CASE("csv round-trip preserves numeric content") {
  Rng rng(7);
  Dataset ds;
  for (int i = 0; i < 60; ++i) {
    ds.points.push_back({200.0 + 1000.0 * rng.uniform() + 1e-7 * rng.normal(),
                         500.0 + 3000.0 * rng.uniform(), static_cast<int>(rng.uniform_below(10))});
  }
  const auto path = temp_file("roundtrip.csv");
  write_csv(ds, path);
  const Dataset back = load_csv(path);
  REQUIRE(back.size() == ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(back.points[i].x1 == ds.points[i].x1);
    CHECK(back.points[i].x2 == ds.points[i].x2);
    CHECK(back.points[i].label == ds.points[i].label);
  }
}

TEST_CASE("synthesize is deterministic for a fixed seed") {
  SyntheticSpec spec = standin_spec(DatasetRole::training);
  spec.rng_seed = 42;
  const auto a = temp_file("synth_a.csv");
  const auto b = temp_file("synth_b.csv");
  write_csv(synthesize(spec), a);
  write_csv(synthesize(spec), b);
  CHECK(slurp(a) == slurp(b));
  CHECK(!slurp(a).empty());
}

TEST_CASE("synthesize rejects invalid covariances") {
  SyntheticSpec spec = standin_spec(DatasetRole::training);
  spec.classes[0].covariance << 0.0, 0.0, 0.0, 0.0;  // zero-variance limit
  CHECK_THROWS_AS(synthesize(spec), data_error);

  spec = standin_spec(DatasetRole::training);
  spec.classes[3].covariance << 1.0, 2.0, 2.0, 1.0;  // indefinite
  CHECK_THROWS_AS(synthesize(spec), data_error);

  spec = standin_spec(DatasetRole::training);
  spec.classes[5].count = 0;
  CHECK_THROWS_AS(synthesize(spec), data_error);
}

TEST_CASE("synthesize sample means approach spec means") {
  SyntheticSpec spec = standin_spec(DatasetRole::training);
  for (auto& g : spec.classes) g.count = 10000;
  spec.rng_seed = 4242;
  const Dataset ds = synthesize(spec);
  for (int c = 0; c < kNumClasses; ++c) {
    double sum1 = 0.0, sum2 = 0.0;
    int n = 0;
    for (const auto& p : ds.points) {
      if (p.label != c) continue;
      sum1 += p.x1;
      sum2 += p.x2;
      ++n;
    }
    REQUIRE(n == 10000);
    const auto& g = spec.classes[c];
    const double tol1 = 3.0 * std::sqrt(g.covariance(0, 0) / n);
    const double tol2 = 3.0 * std::sqrt(g.covariance(1, 1) / n);
    CHECK(std::abs(sum1 / n - g.mean.x()) < tol1);
    CHECK(std::abs(sum2 / n - g.mean.y()) < tol2);
  }
}

TEST_CASE("stratified_split divides each class by the rounded fraction") {
  Dataset ds;
  for (int c = 0; c < kNumClasses; ++c)
    for (int i = 0; i < 10; ++i) ds.points.push_back({100.0 * c + i, 200.0 * c + i, c});

  const auto [train, test] = stratified_split(ds, 0.5, 1);
  CHECK(train.size() == 50);
  CHECK(test.size() == 50);
  const auto train_counts = class_counts(train);
  const auto test_counts = class_counts(test);
  for (int c = 0; c < kNumClasses; ++c) {
    CHECK(train_counts[c] == 5);
    CHECK(test_counts[c] == 5);
  }
}

TEST_CASE("stratified_split is deterministic and seed-sensitive") {
  Dataset ds;
  for (int c = 0; c < kNumClasses; ++c)
    for (int i = 0; i < 10; ++i) ds.points.push_back({100.0 * c + i, 200.0 * c + i, c});

  const auto [a_train, a_test] = stratified_split(ds, 0.5, 1);
  const auto [b_train, b_test] = stratified_split(ds, 0.5, 1);
  REQUIRE(a_train.size() == b_train.size());
  bool identical = true;
  for (std::size_t i = 0; i < a_train.size(); ++i)
    identical = identical && a_train.points[i].x1 == b_train.points[i].x1;
  CHECK(identical);

  const auto [c_train, c_test] = stratified_split(ds, 0.5, 2);
  CHECK(c_train.size() == a_train.size());  // counts match across seeds
  bool all_same = true;
  for (std::size_t i = 0; i < a_train.size(); ++i)
    all_same = all_same && a_train.points[i].x1 == c_train.points[i].x1;
  CHECK_FALSE(all_same);  // partitions generally differ
}

TEST_CASE("stratified_split partitions the input exactly") {
  const Dataset ds = synthesize(standin_spec(DatasetRole::training));
  const double fraction = 0.8;
  const auto [train, test] = stratified_split(ds, fraction, 11);
  CHECK(train.size() + test.size() == ds.size());

  const auto full_counts = class_counts(ds);
  const auto train_counts = class_counts(train);
  for (int c = 0; c < kNumClasses; ++c) {
    CHECK(train_counts[c] == std::llround(fraction * full_counts[c]));
    CHECK(std::abs(train_counts[c] - fraction * full_counts[c]) < 1.0);
  }

  // multiset equality via sorted concatenation
  auto key = [](const LabeledPoint& p) { return std::make_tuple(p.x1, p.x2, p.label); };
  std::vector<std::tuple<double, double, int>> original, combined;
  for (const auto& p : ds.points) original.push_back(key(p));
  for (const auto& p : train.points) combined.push_back(key(p));
  for (const auto& p : test.points) combined.push_back(key(p));
  std::sort(original.begin(), original.end());
  std::sort(combined.begin(), combined.end());
  CHECK(original == combined);
}

TEST_CASE("stratified_split rejects classes with fewer than 2 points") {
  Dataset ds;
  ds.points.push_back({1.0, 2.0, 0});
  ds.points.push_back({2.0, 3.0, 0});
  ds.points.push_back({5.0, 6.0, 1});
  CHECK_THROWS_AS(stratified_split(ds, 0.5, 1), data_error);
}

TEST_CASE("stats csv uses the documented row order") {
  Dataset ds;
  ds.points.push_back({1.0, 2.0, 0});
  ds.points.push_back({3.0, 4.0, 1});
  const auto path = temp_file("stats.csv");
  write_stats_csv(descriptive_stats(ds), path);
  const std::string text = slurp(path);
  CHECK(text.find("stat,x1,x2\nAverage,") != std::string::npos);
  CHECK(text.find("Average") < text.find("Mode"));
  CHECK(text.find("Mode") < text.find("Median"));
  CHECK(text.find("Median") < text.find("Std Dev"));
  CHECK(text.find("Std Dev") < text.find("Max"));
  CHECK(text.find("Max") < text.find("Min"));
}
