#include "ctp/learning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace ctp {

double logit(double p) { return std::log(p / (1.0 - p)); }
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double Model::predict(const FeatureVector& v) const {
  return v.dot(weights_) + bias;
}

namespace {
std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}
}  // namespace

void Model::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << "ctp-model v1\n";
  out << "kind " << (kind == ModelKind::Policy ? "policy" : "value") << "\n";
  out << "dim " << kFeatureDim << "\n";
  out << "walk_prime " << kWalkPrime << "\n";
  out << "feature_space " << kFeatureSpace << "\n";
  out << "constants_hash " << feature_constants_hash() << "\n";
  out << "lambda " << fmt17(lambda) << "\n";
  out << "examples " << example_count << "\n";
  out << "bias " << fmt17(bias) << "\n";
  for (uint32_t i = 0; i < weights_.size(); ++i)
    if (weights_[i] != 0.0) out << "w " << i << " " << fmt17(weights_[i]) << "\n";
}

Model Model::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::string header;
  std::getline(in, header);
  if (header != "ctp-model v1")
    throw std::runtime_error("bad model header in " + path);
  Model m;
  std::string key;
  while (in >> key) {
    if (key == "kind") {
      std::string k;
      in >> k;
      m.kind = (k == "policy") ? ModelKind::Policy : ModelKind::Value;
    } else if (key == "dim") {
      uint32_t d;
      in >> d;
      if (d != kFeatureDim) throw std::runtime_error("model dim mismatch");
    } else if (key == "walk_prime") {
      uint64_t p;
      in >> p;
      if (p != kWalkPrime) throw std::runtime_error("model walk_prime mismatch");
    } else if (key == "feature_space") {
      uint64_t d;
      in >> d;
      if (d != kFeatureSpace)
        throw std::runtime_error("model feature_space mismatch");
    } else if (key == "constants_hash") {
      uint64_t h;
      in >> h;
      if (h != feature_constants_hash())
        throw std::runtime_error("model feature constants mismatch");
    } else if (key == "lambda") {
      in >> m.lambda;
    } else if (key == "examples") {
      in >> m.example_count;
    } else if (key == "bias") {
      in >> m.bias;
    } else if (key == "w") {
      uint32_t i;
      double v;
      in >> i >> v;
      m.weights().at(i) = v;
    } else {
      throw std::runtime_error("bad model key: " + key);
    }
  }
  return m;
}

Model train(const std::vector<TrainingExample>& examples, ModelKind kind,
            const TrainConfig& config) {
  if (examples.empty()) throw std::invalid_argument("no training examples");

  const size_t n = examples.size();

  // Column view: feature index -> (example, value) postings.
  std::unordered_map<uint32_t, std::vector<std::pair<uint32_t, double>>> columns;
  for (uint32_t i = 0; i < n; ++i)
    for (const auto& [idx, val] : examples[i].features.entries())
      columns[idx].emplace_back(i, val);
  std::vector<uint32_t> active;
  active.reserve(columns.size());
  for (const auto& [idx, _] : columns) active.push_back(idx);
  std::sort(active.begin(), active.end());

  Model model;
  model.kind = kind;
  model.lambda = config.lambda;
  model.example_count = n;

  std::vector<double> residual(n);
  for (uint32_t i = 0; i < n; ++i) residual[i] = examples[i].target;

  // The loss is mean squared error plus lambda * ||w||^2 / n equivalent:
  // minimizing sum_i (y_i - yhat_i)^2 + lambda * ||w||^2, bias unpenalized.
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    double max_delta = 0.0;

    double bias_num = 0.0;
    for (uint32_t i = 0; i < n; ++i) bias_num += residual[i];
    double new_bias = model.bias + bias_num / static_cast<double>(n);
    double bias_delta = new_bias - model.bias;
    if (bias_delta != 0.0) {
      for (uint32_t i = 0; i < n; ++i) residual[i] -= bias_delta;
      model.bias = new_bias;
      max_delta = std::abs(bias_delta);
    }

    for (uint32_t j : active) {
      const auto& col = columns[j];
      double w = model.weights()[j];
      double num = 0.0, den = config.lambda;
      for (const auto& [i, x] : col) {
        num += x * (residual[i] + w * x);
        den += x * x;
      }
      double w_new = num / den;
      double delta = w_new - w;
      if (delta != 0.0) {
        for (const auto& [i, x] : col) residual[i] -= delta * x;
        model.weights()[j] = w_new;
        max_delta = std::max(max_delta, std::abs(delta));
      }
    }

    if (max_delta < config.tolerance) break;
  }
  return model;
}

std::vector<double> policy_priors(const Model* model, TableauState& state,
                                  const std::vector<Action>& actions,
                                  const Problem& problem, double tau) {
  if (!model) return std::vector<double>(actions.size(), 1.0);
  if (tau <= 0) throw std::invalid_argument("tau must be positive");

  FeatureVector base = state_features(state, FeatureMode::Policy);
  std::vector<double> scores;
  scores.reserve(actions.size());
  for (const Action& a : actions) {
    FeatureVector v = base;
    v.add_all(action_features(a, state, problem));
    scores.push_back(model->predict(v.finalized()));
  }
  double mx = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double& s : scores) {
    s = std::exp((s - mx) / tau);
    sum += s;
  }
  for (double& s : scores) s /= sum;
  return scores;
}

double value_estimate(const Model& model, const TableauState& state) {
  if (model.kind != ModelKind::Value)
    throw std::invalid_argument("value_estimate requires a value model");
  return sigmoid(model.predict(state_features(state, FeatureMode::Value)));
}

void export_examples(const std::vector<TrainingExample>& examples,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write example file: " + path);
  for (const TrainingExample& ex : examples) {
    out << fmt17(ex.target);
    for (const auto& [idx, val] : ex.features.entries())
      out << " " << idx << ":" << fmt17(val);
    out << "\n";
  }
}

std::vector<TrainingExample> import_examples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open example file: " + path);
  std::vector<TrainingExample> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    TrainingExample ex;
    if (!(ls >> ex.target))
      throw std::runtime_error("bad example line " + std::to_string(lineno));
    std::string pair;
    long last = -1;
    while (ls >> pair) {
      auto colon = pair.find(':');
      if (colon == std::string::npos)
        throw std::runtime_error("bad feature pair at line " +
                                 std::to_string(lineno));
      uint32_t idx = static_cast<uint32_t>(std::stoul(pair.substr(0, colon)));
      double val = std::stod(pair.substr(colon + 1));
      if (static_cast<long>(idx) <= last || idx >= kFeatureDim)
        throw std::runtime_error("bad feature index at line " +
                                 std::to_string(lineno));
      ex.features.add(idx, val);
      last = idx;
    }
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace ctp
