#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctp/search.hpp"

namespace ctp {

enum class Split { Train, Test };

struct CorpusEntry {
  std::string id;
  std::string path;
};

// Ordered problem list with an optional deterministic train/test split.
struct Corpus {
  std::vector<CorpusEntry> entries;
  std::unordered_map<std::string, Split> split;  // empty = no split active

  bool has_split() const { return !split.empty(); }
  Split split_of(const std::string& id) const {
    auto it = split.find(id);
    return it == split.end() ? Split::Train : it->second;
  }
};

// Corpus file: one problem per line, `path` or `id <whitespace> path`;
// '#' starts a comment. Paths are relative to the corpus file's directory.
Corpus load_corpus(const std::string& path);

// Deterministic pseudo-random assignment with |test| = round(fraction * n).
void split_corpus(Corpus& corpus, double test_fraction, uint64_t seed);

void save_split(const Corpus& corpus, const std::string& path);
void load_split(Corpus& corpus, const std::string& path);

struct RunConfig {
  SearchConfig search;
  double lambda = 1.5;  // learner regularization
  int workers = 1;
  bool timing = false;  // wall times in result records (breaks byte-stability)
};

// TOML-style key=value config file; unknown keys are an error.
void load_config_file(const std::string& path, RunConfig& config);
uint64_t config_hash(const RunConfig& config);

struct ProblemRunResult {
  std::string id;
  bool errored = false;
  std::string error;
  ProofResult proof;
  uint64_t seed = 0;
  std::vector<TrainingExample> policy_examples;
  std::vector<TrainingExample> value_examples;
  double wall_ms = 0.0;
};

uint64_t problem_seed(uint64_t master_seed, const std::string& problem_id);

// Runs prove on every corpus problem, parallel across problems with
// per-problem seeds; results come back in corpus order regardless of the
// worker count. Training examples are collected only from train-split
// problems when a split is active.
std::vector<ProblemRunResult> run_corpus(const Corpus& corpus,
                                         const RunConfig& config,
                                         const Model* policy = nullptr,
                                         const Model* value = nullptr,
                                         int iteration = 0);

// One JSON object per line, corpus order.
std::string results_to_jsonl(const std::vector<ProblemRunResult>& results,
                             const RunConfig& config);

struct IterationReport {
  int iteration = 0;
  SearchMode mode = SearchMode::Uct;
  uint64_t train_solved = 0;
  uint64_t test_solved = 0;
  uint64_t total_solved = 0;
  uint64_t total_inferences = 0;
  size_t policy_example_count = 0;  // accumulated
  size_t value_example_count = 0;
  std::string policy_model_path;
  std::string value_model_path;
};

std::string reports_to_csv(const std::vector<IterationReport>& reports);

// The proving/learning loop: iteration 0 unguided (uct), later iterations
// guided by models trained on all previous iterations' examples. Artifacts
// are written under out_dir/iter_<k>/.
std::vector<IterationReport> rl_loop(const Corpus& corpus, int iterations,
                                     const RunConfig& config,
                                     const std::string& out_dir);

struct BaselineRow {
  std::string system;
  uint64_t train_solved = 0;
  uint64_t test_solved = 0;
  uint64_t total_solved = 0;
};

// Iterative deepening vs bare vs uct at equal budgets.
std::vector<BaselineRow> evaluate_baselines(const Corpus& corpus,
                                            const RunConfig& config);
std::string baselines_to_csv(const std::vector<BaselineRow>& rows);

}  // namespace ctp
