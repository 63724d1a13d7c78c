#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vowel/errors.hpp"
#include "vowel/gmm.hpp"
#include "vowel/ofs_rbf.hpp"
#include "vowel/rbf.hpp"
#include "vowel/textio.hpp"

// Plain-text key-value model files. Values are written with 17 significant
// digits so a load reproduces the saved model bit-for-bit; the format is
// line-oriented and diffable. See README for the full schema.

namespace vowel {

namespace detail {

struct TokenReader {
  std::istringstream stream;

  explicit TokenReader(std::string text) : stream(std::move(text)) {}

  std::string next() {
    std::string tok;
    if (!(stream >> tok)) throw data_error("model file: unexpected end of input");
    return tok;
  }

  void expect(const std::string& literal) {
    const std::string tok = next();
    if (tok != literal)
      throw data_error("model file: expected '" + literal + "', found '" + tok + "'");
  }

  double number() {
    double v = 0.0;
    if (!try_parse_double(next(), v)) throw data_error("model file: expected a number");
    return v;
  }

  long integer() {
    long v = 0;
    if (!try_parse_long(next(), v)) throw data_error("model file: expected an integer");
    return v;
  }
};

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open model file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_values(std::ostream& out, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << fmt_g17(v[i]);
}

inline void write_values(std::ostream& out, const Eigen::RowVectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << fmt_g17(v[i]);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// GMM classifier
// ---------------------------------------------------------------------------

inline void save_model(const GmmClassifier& clf, std::ostream& out) {
  const int classes = static_cast<int>(clf.mixtures.size());
  const int k = clf.mixtures.empty() ? 0 : clf.mixtures.front().component_count();
  const auto d = clf.mixtures.empty() ? 0 : clf.mixtures.front().components.front().mean.size();
  out << "vowel-model gmm\n";
  out << "covariance " << to_string(clf.mixtures.front().kind) << '\n';
  out << "dim " << d << '\n';
  out << "classes " << classes << '\n';
  out << "components " << k << '\n';
  for (int c = 0; c < classes; ++c) {
    out << "prior " << c << ' ' << fmt_g17(clf.priors[c]) << '\n';
    for (int j = 0; j < k; ++j) {
      const auto& comp = clf.mixtures[static_cast<std::size_t>(c)].components[static_cast<std::size_t>(j)];
      out << "weight " << c << ' ' << j << ' '
          << fmt_g17(clf.mixtures[static_cast<std::size_t>(c)].weights[j]) << '\n';
      out << "mean " << c << ' ' << j;
      detail::write_values(out, comp.mean);
      out << '\n';
      out << "cov " << c << ' ' << j;
      for (Eigen::Index r = 0; r < comp.covariance.rows(); ++r)
        for (Eigen::Index q = 0; q < comp.covariance.cols(); ++q)
          out << ' ' << fmt_g17(comp.covariance(r, q));
      out << '\n';
    }
  }
  out << "end\n";
}

inline GmmClassifier load_gmm_model(detail::TokenReader& reader) {
  reader.expect("covariance");
  const CovarianceKind kind = covariance_kind_from_string(reader.next());
  reader.expect("dim");
  const auto d = static_cast<Eigen::Index>(reader.integer());
  reader.expect("classes");
  const int classes = static_cast<int>(reader.integer());
  reader.expect("components");
  const int k = static_cast<int>(reader.integer());

  GmmClassifier clf;
  clf.priors.resize(classes);
  for (int c = 0; c < classes; ++c) {
    reader.expect("prior");
    if (reader.integer() != c) throw data_error("model file: class index mismatch");
    clf.priors[c] = reader.number();
    GaussianMixture gm;
    gm.kind = kind;
    gm.weights.resize(k);
    for (int j = 0; j < k; ++j) {
      reader.expect("weight");
      reader.integer();
      reader.integer();
      gm.weights[j] = reader.number();
      GaussianComponent comp;
      comp.mean.resize(d);
      comp.covariance.resize(d, d);
      reader.expect("mean");
      reader.integer();
      reader.integer();
      for (Eigen::Index i = 0; i < d; ++i) comp.mean[i] = reader.number();
      reader.expect("cov");
      reader.integer();
      reader.integer();
      for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index q = 0; q < d; ++q) comp.covariance(r, q) = reader.number();
      gm.components.push_back(std::move(comp));
    }
    clf.mixtures.push_back(std::move(gm));
  }
  reader.expect("end");
  return clf;
}

// ---------------------------------------------------------------------------
// Standard RBF network
// ---------------------------------------------------------------------------

inline void save_model(const RbfNetwork& net, std::ostream& out) {
  out << "vowel-model rbf\n";
  out << "dim " << net.centers.cols() << '\n';
  out << "outputs " << net.output_count() << '\n';
  out << "hidden " << net.hidden_count() << '\n';
  out << "width " << fmt_g17(net.width) << '\n';
  out << "offset";
  detail::write_values(out, net.input_offset);
  out << '\n';
  out << "scale";
  detail::write_values(out, net.input_scale);
  out << '\n';
  for (int j = 0; j < net.hidden_count(); ++j) {
    out << "center " << j;
    detail::write_values(out, Eigen::RowVectorXd(net.centers.row(j)));
    out << '\n';
  }
  for (int j = 0; j < net.hidden_count(); ++j) {
    out << "weights " << j;
    detail::write_values(out, Eigen::RowVectorXd(net.output_weights.row(j)));
    out << '\n';
  }
  out << "bias";
  detail::write_values(out, net.bias);
  out << '\n';
  out << "end\n";
}

inline RbfNetwork load_rbf_model(detail::TokenReader& reader) {
  reader.expect("dim");
  const auto d = static_cast<Eigen::Index>(reader.integer());
  reader.expect("outputs");
  const auto outputs = static_cast<Eigen::Index>(reader.integer());
  reader.expect("hidden");
  const auto hidden = static_cast<Eigen::Index>(reader.integer());

  RbfNetwork net;
  reader.expect("width");
  net.width = reader.number();
  net.input_offset.resize(d);
  net.input_scale.resize(d);
  reader.expect("offset");
  for (Eigen::Index i = 0; i < d; ++i) net.input_offset[i] = reader.number();
  reader.expect("scale");
  for (Eigen::Index i = 0; i < d; ++i) net.input_scale[i] = reader.number();
  net.centers.resize(hidden, d);
  for (Eigen::Index j = 0; j < hidden; ++j) {
    reader.expect("center");
    reader.integer();
    for (Eigen::Index i = 0; i < d; ++i) net.centers(j, i) = reader.number();
  }
  net.output_weights.resize(hidden, outputs);
  for (Eigen::Index j = 0; j < hidden; ++j) {
    reader.expect("weights");
    reader.integer();
    for (Eigen::Index i = 0; i < outputs; ++i) net.output_weights(j, i) = reader.number();
  }
  net.bias.resize(outputs);
  reader.expect("bias");
  for (Eigen::Index i = 0; i < outputs; ++i) net.bias[i] = reader.number();
  reader.expect("end");
  return net;
}

// ---------------------------------------------------------------------------
// Forward-selection RBF
// ---------------------------------------------------------------------------

inline void save_model(const OfsRbfModel& model, std::ostream& out) {
  const auto d = model.neurons.empty() ? 2 : model.neurons.front().center.size();
  out << "vowel-model ofs-rbf\n";
  out << "dim " << d << '\n';
  out << "neurons " << model.neurons.size() << '\n';
  out << "lambda " << fmt_g17(model.lambda) << '\n';
  for (std::size_t j = 0; j < model.neurons.size(); ++j) {
    out << "neuron " << j << ' ' << fmt_g17(model.neurons[j].spread);
    detail::write_values(out, model.neurons[j].center);
    out << '\n';
  }
  out << "weights";
  detail::write_values(out, model.weights);
  out << '\n';
  out << "loo";
  for (double v : model.loo_trace) out << ' ' << fmt_g17(v);
  out << '\n';
  out << "end\n";
}

inline OfsRbfModel load_ofs_model(detail::TokenReader& reader) {
  reader.expect("dim");
  const auto d = static_cast<Eigen::Index>(reader.integer());
  reader.expect("neurons");
  const auto count = static_cast<std::size_t>(reader.integer());
  OfsRbfModel model;
  reader.expect("lambda");
  model.lambda = reader.number();
  for (std::size_t j = 0; j < count; ++j) {
    reader.expect("neuron");
    reader.integer();
    TunableNeuron neuron;
    neuron.spread = reader.number();
    neuron.center.resize(d);
    for (Eigen::Index i = 0; i < d; ++i) neuron.center[i] = reader.number();
    model.neurons.push_back(std::move(neuron));
  }
  model.weights.resize(static_cast<Eigen::Index>(count) + 1);
  reader.expect("weights");
  for (Eigen::Index i = 0; i < model.weights.size(); ++i) model.weights[i] = reader.number();
  reader.expect("loo");
  model.loo_trace.resize(count);
  for (std::size_t j = 0; j < count; ++j) model.loo_trace[j] = reader.number();
  reader.expect("end");
  return model;
}

// ---------------------------------------------------------------------------
// File entry points
// ---------------------------------------------------------------------------

template <typename Model>
void save_model_file(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write model file: " + path.string());
  save_model(model, out);
}

inline std::string model_kind_of_file(const std::filesystem::path& path) {
  detail::TokenReader reader(detail::slurp(path));
  reader.expect("vowel-model");
  return reader.next();
}

inline GmmClassifier load_gmm_file(const std::filesystem::path& path) {
  detail::TokenReader reader(detail::slurp(path));
  reader.expect("vowel-model");
  reader.expect("gmm");
  return load_gmm_model(reader);
}

inline RbfNetwork load_rbf_file(const std::filesystem::path& path) {
  detail::TokenReader reader(detail::slurp(path));
  reader.expect("vowel-model");
  reader.expect("rbf");
  return load_rbf_model(reader);
}

inline OfsRbfModel load_ofs_file(const std::filesystem::path& path) {
  detail::TokenReader reader(detail::slurp(path));
  reader.expect("vowel-model");
  reader.expect("ofs-rbf");
  return load_ofs_model(reader);
}

}  // namespace vowel
