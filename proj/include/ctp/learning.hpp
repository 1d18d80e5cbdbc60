#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctp/features.hpp"

namespace ctp {

enum class ModelKind { Policy, Value };

struct ExampleOrigin {
  std::string problem_id;
  int iteration = 0;
  int bigstep_index = 0;
};

struct TrainingExample {
  FeatureVector features;
  double target = 0.0;
  ExampleOrigin origin;
};

struct TrainConfig {
  double lambda = 1.5;        // L2 weight regularization
  int max_epochs = 200;
  double tolerance = 1e-8;    // convergence: max weight delta per epoch
};

// L2-regularized linear regressor over the hashed feature space, fitted by
// cyclic coordinate descent. Deterministic given examples and config.
class Model {
 public:
  Model() : weights_(kFeatureDim, 0.0) {}

  ModelKind kind = ModelKind::Policy;
  double bias = 0.0;
  double lambda = 1.5;
  uint64_t example_count = 0;

  double predict(const FeatureVector& v) const;

  const std::vector<double>& weights() const { return weights_; }
  std::vector<double>& weights() { return weights_; }

  void save(const std::string& path) const;
  static Model load(const std::string& path);

 private:
  std::vector<double> weights_;
};

Model train(const std::vector<TrainingExample>& examples, ModelKind kind,
            const TrainConfig& config = {});

// Softmax priors over actions at temperature tau. Without a model, returns
// unnormalized all-ones priors.
std::vector<double> policy_priors(const Model* model, TableauState& state,
                                  const std::vector<Action>& actions,
                                  const Problem& problem, double tau);

// Sigmoid of the value model's prediction on the state, in (0, 1).
double value_estimate(const Model& model, const TableauState& state);

// Sparse example file: one line per example, `target idx:value ...`, indices
// ascending, 17 significant digits. Byte-stable round trip.
void export_examples(const std::vector<TrainingExample>& examples,
                     const std::string& path);
std::vector<TrainingExample> import_examples(const std::string& path);

double logit(double p);
double sigmoid(double x);

// Value target clamp bounds: a failed proof attempt's value 0 has no finite
// logit, so targets live in [logit(0.01), logit(0.99)].
inline constexpr double kValueClampLo = 0.01;
inline constexpr double kValueClampHi = 0.99;

}  // namespace ctp
