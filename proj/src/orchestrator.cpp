#include "ctp/orchestrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ctp/checker.hpp"
#include "ctp/parser.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace ctp {

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  std::string dir = fs::path(path).parent_path().string();
  if (dir.empty()) dir = ".";
  Corpus corpus;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string a, b;
    ls >> a >> b;
    if (a.empty()) continue;
    CorpusEntry e;
    if (b.empty()) {
      e.path = a;
      e.id = fs::path(a).stem().string();
    } else {
      e.id = a;
      e.path = b;
    }
    if (!fs::path(e.path).is_absolute()) e.path = dir + "/" + e.path;
    corpus.entries.push_back(std::move(e));
  }
  return corpus;
}

void split_corpus(Corpus& corpus, double test_fraction, uint64_t seed) {
  if (corpus.entries.empty()) throw std::invalid_argument("empty corpus");
  if (test_fraction <= 0 || test_fraction >= 1)
    throw std::invalid_argument("test fraction must be in (0,1)");
  size_t n = corpus.entries.size();
  size_t test_n = static_cast<size_t>(
      std::llround(test_fraction * static_cast<double>(n)));
  std::vector<std::pair<uint64_t, std::string>> ranked;
  ranked.reserve(n);
  for (const CorpusEntry& e : corpus.entries)
    ranked.emplace_back(SplitMix64(seed ^ fnv1a64(e.id)).next(), e.id);
  std::sort(ranked.begin(), ranked.end());
  corpus.split.clear();
  for (size_t i = 0; i < n; ++i)
    corpus.split[ranked[i].second] = i < test_n ? Split::Test : Split::Train;
}

void save_split(const Corpus& corpus, const std::string& path) {
  ordered_json j;
  for (const CorpusEntry& e : corpus.entries)
    j[e.id] = corpus.split_of(e.id) == Split::Test ? "test" : "train";
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

void load_split(Corpus& corpus, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open split file: " + path);
  ordered_json j;
  in >> j;
  corpus.split.clear();
  for (auto& [id, v] : j.items())
    corpus.split[id] = v.get<std::string>() == "test" ? Split::Test : Split::Train;
}

void load_config_file(const std::string& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw std::runtime_error("bad config line " + std::to_string(lineno));
    }
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key == "budget") config.search.inference_budget = std::stoull(val);
    else if (key == "playouts") config.search.playouts_per_bigstep = std::stoull(val);
    else if (key == "c") config.search.exploration_c = std::stod(val);
    else if (key == "tau") config.search.tau = std::stod(val);
    else if (key == "heuristic_base") config.search.heuristic_base = std::stod(val);
    else if (key == "discount") config.search.value_discount = std::stod(val);
    else if (key == "playout_len") config.search.playout_len = std::stoull(val);
    else if (key == "reuse_tree") config.search.reuse_tree = (val == "true" || val == "1");
    else if (key == "puct") config.search.puct = (val == "true" || val == "1");
    else if (key == "seed") config.search.seed = std::stoull(val);
    else if (key == "mode") config.search.mode = search_mode_from_string(val);
    else if (key == "lambda") config.lambda = std::stod(val);
    else if (key == "workers") config.workers = std::stoi(val);
    else if (key == "timing") config.timing = (val == "true" || val == "1");
    else throw std::runtime_error("unknown config key '" + key + "' at line " +
                                  std::to_string(lineno));
  }
}

namespace {
std::string config_to_string(const RunConfig& c) {
  std::ostringstream s;
  s << "budget=" << c.search.inference_budget
    << " playouts=" << c.search.playouts_per_bigstep
    << " c=" << c.search.exploration_c << " tau=" << c.search.tau
    << " heuristic_base=" << c.search.heuristic_base
    << " discount=" << c.search.value_discount
    << " playout_len=" << c.search.playout_len
    << " reuse_tree=" << c.search.reuse_tree << " puct=" << c.search.puct
    << " seed=" << c.search.seed << " mode=" << to_string(c.search.mode)
    << " lambda=" << c.lambda;
  return s.str();
}

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["budget"] = c.search.inference_budget;
  j["playouts"] = c.search.playouts_per_bigstep;
  j["c"] = c.search.exploration_c;
  j["tau"] = c.search.tau;
  j["heuristic_base"] = c.search.heuristic_base;
  j["discount"] = c.search.value_discount;
  j["playout_len"] = c.search.playout_len;
  j["reuse_tree"] = c.search.reuse_tree;
  j["puct"] = c.search.puct;
  j["seed"] = c.search.seed;
  j["mode"] = to_string(c.search.mode);
  j["lambda"] = c.lambda;
  j["action_stride"] = kVariantStride;
  j["action_max_literals"] = kMaxLiterals;
  j["start_clause_rule"] = "conjecture-clauses-else-all";
  return j;
}
}  // namespace

uint64_t config_hash(const RunConfig& config) {
  return fnv1a64(config_to_string(config));
}

uint64_t problem_seed(uint64_t master_seed, const std::string& problem_id) {
  return SplitMix64(master_seed ^ fnv1a64(problem_id)).next();
}

std::vector<ProblemRunResult> run_corpus(const Corpus& corpus,
                                         const RunConfig& config,
                                         const Model* policy, const Model* value,
                                         int iteration) {
  const int n = static_cast<int>(corpus.entries.size());
  std::vector<ProblemRunResult> results(n);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, config.workers))
#endif
  for (int i = 0; i < n; ++i) {
    const CorpusEntry& entry = corpus.entries[i];
    ProblemRunResult& r = results[i];
    r.id = entry.id;
    r.seed = problem_seed(config.search.seed, entry.id);
    auto t0 = std::chrono::steady_clock::now();
    try {
      Problem problem = parse_problem_file(entry.path);
      SearchConfig sc = config.search;
      sc.seed = r.seed;
      std::vector<BigstepRecord> records;
      r.proof = prove(problem, sc, policy, value, &records);

      bool train_side =
          !corpus.has_split() || corpus.split_of(entry.id) == Split::Train;
      if (train_side) {
        ExampleOrigin origin{entry.id, iteration, 0};
        auto [pol, val] = collect_examples(records, r.proof, sc, origin);
        r.policy_examples = std::move(pol);
        r.value_examples = std::move(val);
      }
    } catch (const std::exception& e) {
      r.errored = true;
      r.error = e.what();
    }
    r.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  }
  return results;
}

std::string results_to_jsonl(const std::vector<ProblemRunResult>& results,
                             const RunConfig& config) {
  std::ostringstream out;
  for (const ProblemRunResult& r : results) {
    ordered_json j;
    j["problem"] = r.id;
    j["mode"] = to_string(config.search.mode);
    j["seed"] = r.seed;
    if (r.errored) {
      j["status"] = "error";
      j["error"] = r.error;
    } else {
      j["status"] = to_string(r.proof.status);
      j["inferences"] = r.proof.inferences;
      j["playouts"] = r.proof.playouts;
      j["bigsteps"] = r.proof.bigsteps;
      if (r.proof.status == ProofStatus::Proved) {
        ordered_json proof = ordered_json::array();
        for (const Action& a : r.proof.actions) proof.push_back(a.describe());
        j["proof"] = proof;
      }
    }
    if (config.timing) j["wall_ms"] = r.wall_ms;
    out << j.dump() << "\n";
  }
  return out.str();
}

std::string reports_to_csv(const std::vector<IterationReport>& reports) {
  std::ostringstream out;
  out << "iteration,mode,train_solved,test_solved,total_solved,"
         "total_inferences,policy_examples,value_examples\n";
  for (const IterationReport& r : reports)
    out << r.iteration << "," << to_string(r.mode) << "," << r.train_solved
        << "," << r.test_solved << "," << r.total_solved << ","
        << r.total_inferences << "," << r.policy_example_count << ","
        << r.value_example_count << "\n";
  return out.str();
}

namespace {
void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

IterationReport summarize(const Corpus& corpus,
                          const std::vector<ProblemRunResult>& results,
                          int iteration, SearchMode mode) {
  IterationReport rep;
  rep.iteration = iteration;
  rep.mode = mode;
  for (const ProblemRunResult& r : results) {
    if (!r.errored) rep.total_inferences += r.proof.inferences;
    if (r.errored || r.proof.status != ProofStatus::Proved) continue;
    ++rep.total_solved;
    if (corpus.has_split() && corpus.split_of(r.id) == Split::Test)
      ++rep.test_solved;
    else
      ++rep.train_solved;
  }
  return rep;
}
}  // namespace

std::vector<IterationReport> rl_loop(const Corpus& corpus, int iterations,
                                     const RunConfig& config,
                                     const std::string& out_dir) {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  fs::create_directories(out_dir);
  write_file(out_dir + "/config.json", config_json(config).dump(2) + "\n");

  bool use_policy = config.search.mode == SearchMode::UctPolicy ||
                    config.search.mode == SearchMode::UctPolicyValue;
  bool use_value = config.search.mode == SearchMode::UctValue ||
                   config.search.mode == SearchMode::UctPolicyValue;

  std::vector<TrainingExample> policy_acc, value_acc;
  std::vector<IterationReport> reports;

  for (int it = 0; it < iterations; ++it) {
    std::string iter_dir = out_dir + "/iter_" + std::to_string(it);
    fs::create_directories(iter_dir);

    RunConfig iter_config = config;
    Model policy_model, value_model;
    const Model* policy_ptr = nullptr;
    const Model* value_ptr = nullptr;
    std::string policy_path, value_path;

    if (it == 0) {
      iter_config.search.mode = SearchMode::Uct;  // unguided baseline run
    } else {
      TrainConfig tc;
      tc.lambda = config.lambda;
      if (use_policy && !policy_acc.empty()) {
        policy_model = train(policy_acc, ModelKind::Policy, tc);
        policy_path = iter_dir + "/policy.model";
        policy_model.save(policy_path);
        policy_ptr = &policy_model;
      }
      if (use_value && !value_acc.empty()) {
        value_model = train(value_acc, ModelKind::Value, tc);
        value_path = iter_dir + "/value.model";
        value_model.save(value_path);
        value_ptr = &value_model;
      }
    }

    auto results = run_corpus(corpus, iter_config, policy_ptr, value_ptr, it);
    write_file(iter_dir + "/results.jsonl", results_to_jsonl(results, iter_config));

    for (const ProblemRunResult& r : results) {
      policy_acc.insert(policy_acc.end(), r.policy_examples.begin(),
                        r.policy_examples.end());
      value_acc.insert(value_acc.end(), r.value_examples.begin(),
                       r.value_examples.end());
    }
    export_examples(policy_acc, iter_dir + "/policy.examples");
    export_examples(value_acc, iter_dir + "/value.examples");

    IterationReport rep = summarize(corpus, results, it, iter_config.search.mode);
    rep.policy_example_count = policy_acc.size();
    rep.value_example_count = value_acc.size();
    rep.policy_model_path = policy_path;
    rep.value_model_path = value_path;
    reports.push_back(rep);
    write_file(out_dir + "/report.csv", reports_to_csv(reports));
  }
  return reports;
}

std::vector<BaselineRow> evaluate_baselines(const Corpus& corpus,
                                            const RunConfig& config) {
  std::vector<BaselineRow> rows;

  {  // iterative deepening
    const int n = static_cast<int>(corpus.entries.size());
    std::vector<int> proved(n, 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, config.workers))
#endif
    for (int i = 0; i < n; ++i) {
      try {
        Problem problem = parse_problem_file(corpus.entries[i].path);
        SearchConfig sc = config.search;
        sc.seed = problem_seed(config.search.seed, corpus.entries[i].id);
        proved[i] = prove_iterative_deepening(problem, sc).status ==
                    ProofStatus::Proved;
      } catch (const std::exception&) {
      }
    }
    BaselineRow row{"iterative_deepening", 0, 0, 0};
    for (int i = 0; i < n; ++i) {
      if (!proved[i]) continue;
      ++row.total_solved;
      if (corpus.has_split() &&
          corpus.split_of(corpus.entries[i].id) == Split::Test)
        ++row.test_solved;
      else
        ++row.train_solved;
    }
    rows.push_back(row);
  }

  for (SearchMode mode : {SearchMode::Bare, SearchMode::Uct}) {
    RunConfig mc = config;
    mc.search.mode = mode;
    auto results = run_corpus(corpus, mc);
    IterationReport rep = summarize(corpus, results, 0, mode);
    rows.push_back(BaselineRow{to_string(mode), rep.train_solved,
                               rep.test_solved, rep.total_solved});
  }
  return rows;
}

std::string baselines_to_csv(const std::vector<BaselineRow>& rows) {
  std::ostringstream out;
  out << "system,train_solved,test_solved,total_solved\n";
  for (const BaselineRow& r : rows)
    out << r.system << "," << r.train_solved << "," << r.test_solved << ","
        << r.total_solved << "\n";
  return out.str();
}

}  // namespace ctp
