// End-to-end acceptance suite. Each test case checks one release criterion
// and prints a single pass/fail line; the binary fails if any gating
// criterion fails (throughput is reported as a warning only).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ctp/checker.hpp"
#include "ctp/orchestrator.hpp"
#include "ctp/parser.hpp"
#include "test_util.hpp"

using namespace ctp;
using namespace ctp::testutil;
namespace fs = std::filesystem;

namespace {

const char* kCorpusFile = CTP_DATA_DIR "/corpus.txt";

void report(int k, const char* name, bool ok, const std::string& detail = "") {
  std::printf("[criterion %d] %-34s %s%s%s\n", k, name, ok ? "pass" : "FAIL",
              detail.empty() ? "" : "  -- ", detail.c_str());
  std::fflush(stdout);
}

RunConfig corpus_config(uint64_t seed, uint64_t budget = 20000) {
  RunConfig config;
  config.search.inference_budget = budget;
  config.search.seed = seed;
  config.workers = 8;
  return config;
}

uint64_t solved_count(const std::vector<ProblemRunResult>& results) {
  uint64_t n = 0;
  for (const auto& r : results)
    n += !r.errored && r.proof.status == ProofStatus::Proved;
  return n;
}

std::string tmpdir(const std::string& leaf) {
  std::string d = "/tmp/ctp_acceptance/" + leaf;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("criterion 1: every emitted proof passes the independent checker") {
  Corpus corpus = load_corpus(kCorpusFile);
  bool all_checked = true;
  uint64_t proofs = 0;
  for (SearchMode mode : {SearchMode::Uct, SearchMode::Bare}) {
    RunConfig config = corpus_config(1);
    config.search.mode = mode;
    auto results = run_corpus(corpus, config);
    for (const auto& r : results) {
      if (r.errored || r.proof.status != ProofStatus::Proved) continue;
      ++proofs;
      Problem problem;
      for (const auto& e : corpus.entries)
        if (e.id == r.id) problem = parse_problem_file(e.path);
      std::string diag;
      if (!check_proof(problem, r.proof.actions, &diag)) {
        all_checked = false;
        MESSAGE("proof of " << r.id << " rejected: " << diag);
      }
      // a tampered proof must be rejected
      if (r.proof.actions.size() > 1) {
        std::vector<Action> broken = r.proof.actions;
        broken.erase(broken.begin() + 1);
        if (check_proof(problem, broken)) all_checked = false;
      }
    }
  }
  bool ok = all_checked && proofs >= 50;
  report(1, "proof soundness", ok, std::to_string(proofs) + " proofs checked");
  CHECK(ok);
}

TEST_CASE("criterion 2: the six-clause example is proved by both provers") {
  Problem fig = six_clause_problem();
  SearchConfig config;
  config.inference_budget = 10000;
  config.seed = 7;

  ProofResult id = prove_iterative_deepening(fig, config);
  ProofResult mc = prove(fig, config);
  bool ok = id.status == ProofStatus::Proved && id.proof_depth_limit == 3 &&
            check_proof(fig, id.actions) && mc.status == ProofStatus::Proved &&
            mc.inferences <= 10000 && check_proof(fig, mc.actions);
  report(2, "reference problem", ok,
         "id depth " + std::to_string(id.proof_depth_limit) + ", mcts " +
             std::to_string(mc.inferences) + " inferences");
  CHECK(ok);
}

TEST_CASE("criterion 3: forced playouts diverge where search succeeds") {
  Problem p = successor_problem();

  // a selector stub that always follows the self-referential step clause
  // walks an infinite branch and never closes the tableau
  SearchConfig forced;
  forced.seed = 1;
  forced.playout_len = 1200;
  forced.inference_budget = 5000;
  forced.selector_override =
      [](const std::vector<std::unique_ptr<SearchNode>>& children) {
        for (size_t i = 0; i < children.size(); ++i) {
          const Action& a = children[i]->action;
          if (a.kind() == ActionKind::Start && a.clause_index() == 0)
            return static_cast<int>(i);
          if (a.kind() == ActionKind::Extension && a.clause_index() == 1)
            return static_cast<int>(i);
        }
        return 0;
      };
  SearchTree tree(p, forced);
  tree.playout();
  bool diverged = tree.status() != ProofStatus::Proved &&
                  tree.inferences_used() >= 1000;

  SearchConfig fair;
  fair.seed = 1;
  ProofResult r = prove(p, fair);
  bool ok = diverged && r.status == ProofStatus::Proved &&
            r.actions.size() == 2 && r.playouts <= 2000;
  report(3, "playout incompleteness demo", ok,
         "forced branch depth >= 1000, fair search " +
             std::to_string(r.playouts) + " playouts");
  CHECK(ok);
}

TEST_CASE("criterion 4: guided orderings on the bundled corpus") {
  Corpus corpus = load_corpus(kCorpusFile);

  bool bare_below_uct = true;
  std::string detail;
  for (uint64_t seed : {1, 2, 3}) {
    RunConfig bare = corpus_config(seed);
    bare.search.mode = SearchMode::Bare;
    RunConfig uct = corpus_config(seed);
    uint64_t nb = solved_count(run_corpus(corpus, bare));
    uint64_t nu = solved_count(run_corpus(corpus, uct));
    if (nb >= nu) bare_below_uct = false;
    detail += std::to_string(nb) + "<" + std::to_string(nu) + " ";
  }

  // the open-goal leaf heuristic must beat a constant leaf on some seed
  bool heuristic_helps = false;
  for (uint64_t seed : {1, 2, 3}) {
    RunConfig with = corpus_config(seed);
    RunConfig without = corpus_config(seed);
    without.search.heuristic_base = 1.0;
    uint64_t nw = solved_count(run_corpus(corpus, with));
    uint64_t nc = solved_count(run_corpus(corpus, without));
    if (nw > nc) heuristic_helps = true;
    detail += "h:" + std::to_string(nw) + ">" + std::to_string(nc) + " ";
  }

  bool ok = bare_below_uct && heuristic_helps;
  report(4, "strategy ordering", ok, detail);
  CHECK(ok);
}

TEST_CASE("criterion 5: the learning loop improves over its unguided start") {
  Corpus corpus = load_corpus(kCorpusFile);
  int improved = 0, regressed = 0;
  std::string detail;
  for (uint64_t seed : {1, 2, 3}) {
    RunConfig config = corpus_config(seed);
    config.search.mode = SearchMode::UctPolicyValue;
    auto reports =
        rl_loop(corpus, 3, config, tmpdir("loop_seed" + std::to_string(seed)));
    REQUIRE(reports.size() == 3);
    if (reports[2].total_solved > reports[0].total_solved) ++improved;
    if (reports[2].total_solved < reports[0].total_solved) ++regressed;
    detail += std::to_string(reports[0].total_solved) + "->" +
              std::to_string(reports[2].total_solved) + " ";
  }
  bool ok = improved >= 2 && regressed == 0;
  report(5, "learning loop improvement", ok, detail);
  CHECK(ok);
}

TEST_CASE("criterion 6: scoring formula spot checks") {
  Problem fig = six_clause_problem();
  TableauState three_goals;
  three_goals.apply(Action::start(1), fig);
  bool h_ok = std::abs(heuristic_value(three_goals) - 0.857375) < 1e-12;

  // 0.25 + sqrt(ln 8 / 2) = 1.2696669901688089
  double u = uct_score(0.5, 2, 0.5, 8, 2.0);
  bool u_ok = std::abs(u - (0.25 + std::sqrt(std::log(8.0) / 2.0))) < 1e-12 &&
              std::abs(u - 1.26967) < 1e-4;

  bool d_ok = std::abs(std::pow(0.99, 10) - 0.9043820750) < 1e-9;

  bool ok = h_ok && u_ok && d_ok;
  report(6, "formula spot checks", ok);
  CHECK(ok);
}

TEST_CASE("criterion 7: learner and prior sanity") {
  // exact recovery of a realizable linear target
  SplitMix64 rng(100);
  std::vector<TrainingExample> data;
  std::vector<double> truth(50);
  for (auto& w : truth) w = rng.uniform() * 4 - 2;
  for (int i = 0; i < 200; ++i) {
    TrainingExample e;
    double y = 0.5;
    for (int j = 0; j < 50; ++j) {
      if (rng.below(3) != 0) continue;
      double v = 1 + static_cast<double>(rng.below(4));
      e.features.add(j, v);
      y += truth[j] * v;
    }
    e.features = e.features.finalized();
    e.target = y;
    data.push_back(e);
  }
  Model model = train(data, ModelKind::Policy, TrainConfig{0.0, 2000, 1e-13});
  double sq = 0;
  for (const auto& e : data) {
    double d = model.predict(e.features) - e.target;
    sq += d * d;
  }
  bool fit_ok = std::sqrt(sq / data.size()) < 1e-6;

  // priors over real action sets: normalized, argmax matches the raw scores
  Problem fig = six_clause_problem();
  int prior_checks = 0;
  bool priors_ok = true;
  SplitMix64 walk_rng(7);
  while (prior_checks < 1000) {
    TableauState state;
    state.apply(Action::start(walk_rng.below(fig.clauses.size())), fig);
    for (int depth = 0; depth < 12 && !state.closed(); ++depth) {
      auto actions = applicable_actions(state, fig);
      if (actions.empty()) break;
      auto priors = policy_priors(&model, state, actions, fig, 2.5);
      double sum = 0;
      size_t arg_p = 0, arg_y = 0;
      double best_y = -1e300;
      for (size_t i = 0; i < actions.size(); ++i) {
        sum += priors[i];
        if (priors[i] > priors[arg_p]) arg_p = i;
        FeatureVector f = state_features(state, FeatureMode::Policy);
        f.add_all(action_features(actions[i], state, fig));
        double y = model.predict(f.finalized());
        if (y > best_y) {
          best_y = y;
          arg_y = i;
        }
      }
      if (std::abs(sum - 1.0) > 1e-9 || arg_p != arg_y) priors_ok = false;
      ++prior_checks;
      state.apply(actions[walk_rng.below(actions.size())], fig);
    }
  }

  bool ok = fit_ok && priors_ok;
  report(7, "learner sanity", ok,
         std::to_string(prior_checks) + " prior vectors");
  CHECK(ok);
}

TEST_CASE("criterion 8: byte-level determinism") {
  Corpus corpus = load_corpus(kCorpusFile);
  RunConfig config = corpus_config(5, 5000);

  config.workers = 1;
  std::string a = results_to_jsonl(run_corpus(corpus, config), config);
  std::string b = results_to_jsonl(run_corpus(corpus, config), config);
  config.workers = 4;
  std::string c = results_to_jsonl(run_corpus(corpus, config), config);
  bool runs_ok = !a.empty() && a == b && a == c;

  // artifact files survive a load/save round trip unchanged
  std::string dir = tmpdir("determinism");
  auto results = run_corpus(corpus, corpus_config(5, 5000));
  std::vector<TrainingExample> examples;
  for (const auto& r : results)
    examples.insert(examples.end(), r.value_examples.begin(),
                    r.value_examples.end());
  export_examples(examples, dir + "/v.examples");
  export_examples(import_examples(dir + "/v.examples"), dir + "/v2.examples");
  auto slurp = [](const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  bool examples_ok = !examples.empty() &&
                     slurp(dir + "/v.examples") == slurp(dir + "/v2.examples");

  Model m = train(examples, ModelKind::Value);
  m.save(dir + "/m.model");
  Model::load(dir + "/m.model").save(dir + "/m2.model");
  bool model_ok = slurp(dir + "/m.model") == slurp(dir + "/m2.model");

  bool ok = runs_ok && examples_ok && model_ok;
  report(8, "determinism", ok);
  CHECK(ok);
}

TEST_CASE("criterion 9: inference throughput (warning only)") {
  Corpus corpus = load_corpus(kCorpusFile);

  auto measure = [&](const RunConfig& config, const Model* policy,
                     const Model* value) {
    auto t0 = std::chrono::steady_clock::now();
    auto results = run_corpus(corpus, config, policy, value);
    auto t1 = std::chrono::steady_clock::now();
    uint64_t inferences = 0;
    for (const auto& r : results) inferences += r.proof.inferences;
    double secs = std::chrono::duration<double>(t1 - t0).count();
    return inferences / std::max(secs, 1e-9);
  };

  RunConfig unguided = corpus_config(1);
  unguided.workers = 1;
  double ips_unguided = measure(unguided, nullptr, nullptr);

  // train quick models for the guided measurement
  auto results = run_corpus(corpus, corpus_config(1));
  std::vector<TrainingExample> pol, val;
  for (const auto& r : results) {
    pol.insert(pol.end(), r.policy_examples.begin(), r.policy_examples.end());
    val.insert(val.end(), r.value_examples.begin(), r.value_examples.end());
  }
  Model policy = train(pol, ModelKind::Policy);
  Model value = train(val, ModelKind::Value);
  RunConfig guided = corpus_config(1);
  guided.workers = 1;
  guided.search.mode = SearchMode::UctPolicyValue;
  double ips_guided = measure(guided, &policy, &value);

  bool ok = ips_unguided >= 1e4 && ips_guided >= 1e3;
  char detail[128];
  std::snprintf(detail, sizeof detail, "unguided %.0f/s, guided %.0f/s",
                ips_unguided, ips_guided);
  report(9, ok ? "throughput" : "throughput (warning only)", ok, detail);
  if (!ok) MESSAGE("throughput below target: " << detail);
  CHECK(true);  // reported, never gating
}
