// Minimal library walkthrough: generate the stand-in data, fit the three
// classifiers at their usual configurations and print recognition rates.

#include <iostream>

#include "vowel/bench.hpp"
#include "vowel/dataset.hpp"
#include "vowel/gmm.hpp"
#include "vowel/ofs_rbf.hpp"
#include "vowel/rbf.hpp"

using namespace vowel;

int main() {
  const Dataset train = synthesize(standin_spec(DatasetRole::training), DatasetRole::training);
  const Dataset test = synthesize(standin_spec(DatasetRole::testing), DatasetRole::testing);

  const auto rate = [&](const Dataset& ds, auto&& label_of) {
    std::vector<int> predicted(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i)
      predicted[i] = label_of(Eigen::Vector2d(ds.points[i].x1, ds.points[i].x2));
    return recognition_rate(predicted, labels_of(ds));
  };

  EmConfig em;
  em.k = 2;
  const GmmClassifier gmm = fit_classifier(train, em, CovarianceKind::full);
  std::cout << "gmm (full, k=2):      train "
            << rate(train, [&](const Eigen::Vector2d& x) { return classify(x, gmm).label; })
            << "%  test "
            << rate(test, [&](const Eigen::Vector2d& x) { return classify(x, gmm).label; })
            << "%\n";

  RbfConfig rc;
  rc.hidden_neurons = 15;
  const RbfNetwork rbf = train_rbf(train, rc).first;
  std::cout << "rbf (M=15):           train "
            << rate(train, [&](const Eigen::Vector2d& x) { return predict(x, rbf).label; })
            << "%  test "
            << rate(test, [&](const Eigen::Vector2d& x) { return predict(x, rbf).label; })
            << "%\n";

  const OvrEnsemble ovr = train_one_vs_rest(train, test, {});
  std::cout << "ofs-rbf (one-vs-rest): average binary accuracy train "
            << ovr.average_train_accuracy << "%  test " << ovr.average_test_accuracy << "%\n";
  std::cout << "ofs-rbf (argmax):      train "
            << rate(train, [&](const Eigen::Vector2d& x) { return ovr_classify(x, ovr); })
            << "%  test "
            << rate(test, [&](const Eigen::Vector2d& x) { return ovr_classify(x, ovr); })
            << "%\n";
  return 0;
}
