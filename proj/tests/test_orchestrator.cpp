#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ctp/orchestrator.hpp"
#include "test_util.hpp"

using namespace ctp;
using namespace ctp::testutil;
namespace fs = std::filesystem;

namespace {

const char* kDir = "/tmp/ctp_orch_test";

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

// Six small problems on disk plus a corpus list referring to them.
std::string make_test_corpus() {
  fs::create_directories(kDir);
  write_file(std::string(kDir) + "/fig.p", kSixClauseProblem);
  write_file(std::string(kDir) + "/succ.p", kSuccessorProblem);
  write_file(std::string(kDir) + "/triv.p",
             "cnf(a, axiom, (q(a))). cnf(b, negated_conjecture, (~q(a))).");
  write_file(std::string(kDir) + "/sat.p", "cnf(a, axiom, (p(a))).");
  write_file(std::string(kDir) + "/chain.p",
             "cnf(a, axiom, (p(a))). cnf(b, axiom, (~p(X) | q(f(X)))). "
             "cnf(c, axiom, (~q(X) | r(X))). "
             "cnf(g, negated_conjecture, (~r(f(a)))).");
    write_file(std::string(kDir) + "/sym.p",
               "cnf(a, axiom, (e(X,X))). cnf(b, axiom, (~e(X,Y) | e(Y,X))). "
               "cnf(g, negated_conjecture, (~e(c,c))).");
  write_file(std::string(kDir) + "/corpus.txt",
             "# test corpus\n"
             "fig fig.p\n"
             "succ succ.p\n"
             "triv triv.p\n"
             "sat sat.p\n"
             "chain chain.p\n"
             "sym sym.p\n");
  return std::string(kDir) + "/corpus.txt";
}

RunConfig quick_config() {
  RunConfig config;
  config.search.inference_budget = 5000;
  config.search.playouts_per_bigstep = 50;
  config.search.seed = 17;
  return config;
}

}  // namespace

TEST_CASE("corpus file parsing") {
  Corpus c = load_corpus(make_test_corpus());
  REQUIRE(c.entries.size() == 6);
  CHECK(c.entries[0].id == "fig");
  CHECK(c.entries[0].path == std::string(kDir) + "/fig.p");
  CHECK(c.entries[5].id == "sym");
  CHECK_FALSE(c.has_split());
  CHECK(c.split_of("fig") == Split::Train);  // default without a split

  SUBCASE("bare paths use the file stem as id") {
    write_file(std::string(kDir) + "/bare.txt", "fig.p\n");
    Corpus b = load_corpus(std::string(kDir) + "/bare.txt");
    REQUIRE(b.entries.size() == 1);
    CHECK(b.entries[0].id == "fig");
  }

  SUBCASE("missing corpus file throws") {
    CHECK_THROWS(load_corpus(std::string(kDir) + "/nope.txt"));
  }
}

TEST_CASE("run_corpus solves the solvable problems in corpus order") {
  Corpus c = load_corpus(make_test_corpus());
  auto results = run_corpus(c, quick_config());
  REQUIRE(results.size() == 6);
  for (size_t i = 0; i < results.size(); ++i)
    CHECK(results[i].id == c.entries[i].id);
  auto status_of = [&](const std::string& id) {
    for (const auto& r : results)
      if (r.id == id) return r.proof.status;
    FAIL("missing id");
    return ProofStatus::BudgetExhausted;
  };
  CHECK(status_of("fig") == ProofStatus::Proved);
  CHECK(status_of("succ") == ProofStatus::Proved);
  CHECK(status_of("triv") == ProofStatus::Proved);
  CHECK(status_of("sat") == ProofStatus::DeadRoot);
  CHECK(status_of("chain") == ProofStatus::Proved);
  for (const auto& r : results) CHECK_FALSE(r.errored);
}

TEST_CASE("run_corpus output is identical across runs and worker counts") {
  Corpus c = load_corpus(make_test_corpus());
  RunConfig config = quick_config();

  config.workers = 1;
  std::string serial = results_to_jsonl(run_corpus(c, config), config);
  std::string serial2 = results_to_jsonl(run_corpus(c, config), config);
  CHECK(serial == serial2);

  config.workers = 4;
  std::string parallel = results_to_jsonl(run_corpus(c, config), config);
  CHECK(serial == parallel);
  CHECK(!serial.empty());
}

TEST_CASE("a missing problem file yields an error record, not a crash") {
  make_test_corpus();
  write_file(std::string(kDir) + "/broken.txt", "fig fig.p\nghost ghost.p\n");
  Corpus c = load_corpus(std::string(kDir) + "/broken.txt");
  auto results = run_corpus(c, quick_config());
  REQUIRE(results.size() == 2);
  CHECK_FALSE(results[0].errored);
  CHECK(results[1].errored);
  CHECK(!results[1].error.empty());
}

TEST_CASE("train/test split") {
  Corpus c;
  for (int i = 0; i < 10; ++i)
    c.entries.push_back({"p" + std::to_string(i), "unused.p"});

  split_corpus(c, 0.1, 42);
  REQUIRE(c.has_split());
  int test_count = 0;
  for (const auto& e : c.entries)
    if (c.split_of(e.id) == Split::Test) ++test_count;
  CHECK(test_count == 1);

  SUBCASE("same seed, same assignment") {
    Corpus d = c;
    d.split.clear();
    split_corpus(d, 0.1, 42);
    for (const auto& e : c.entries) CHECK(c.split_of(e.id) == d.split_of(e.id));
  }

  SUBCASE("split file round trip") {
    std::string path = std::string(kDir) + "/split.json";
    fs::create_directories(kDir);
    save_split(c, path);
    Corpus d = c;
    d.split.clear();
    load_split(d, path);
    for (const auto& e : c.entries) CHECK(c.split_of(e.id) == d.split_of(e.id));
  }

  SUBCASE("half split") {
    Corpus d = c;
    d.split.clear();
    split_corpus(d, 0.5, 7);
    int n = 0;
    for (const auto& e : d.entries)
      if (d.split_of(e.id) == Split::Test) ++n;
    CHECK(n == 5);
  }
}

TEST_CASE("per-problem seeds differ and are reproducible") {
  CHECK(problem_seed(1, "fig") == problem_seed(1, "fig"));
  CHECK(problem_seed(1, "fig") != problem_seed(1, "succ"));
  CHECK(problem_seed(1, "fig") != problem_seed(2, "fig"));
}

TEST_CASE("value examples match committed bigsteps; test split is excluded") {
  Corpus c = load_corpus(make_test_corpus());
  RunConfig config = quick_config();
  auto results = run_corpus(c, config);
  for (const auto& r : results) {
    if (r.errored) continue;
    CHECK(r.value_examples.size() == r.proof.bigsteps);
    for (const auto& e : r.value_examples) CHECK(e.origin.problem_id == r.id);
  }

  // mark everything test: no examples come back
  for (const auto& e : c.entries) c.split[e.id] = Split::Test;
  auto none = run_corpus(c, config);
  for (const auto& r : none) {
    CHECK(r.policy_examples.empty());
    CHECK(r.value_examples.empty());
  }
}

TEST_CASE("config file loading and overrides") {
  fs::create_directories(kDir);
  std::string path = std::string(kDir) + "/run.cfg";
  write_file(path,
             "# run settings\n"
             "budget = 1234\n"
             "playouts = 10\n"
             "c = 1.5\n"
             "tau = 3.0\n"
             "mode = uct+policy\n"
             "workers = 2\n"
             "seed = 99\n");
  RunConfig config;
  load_config_file(path, config);
  CHECK(config.search.inference_budget == 1234);
  CHECK(config.search.playouts_per_bigstep == 10);
  CHECK(config.search.exploration_c == 1.5);
  CHECK(config.search.tau == 3.0);
  CHECK(config.search.mode == SearchMode::UctPolicy);
  CHECK(config.workers == 2);
  CHECK(config.search.seed == 99);

  SUBCASE("unknown keys are rejected") {
    write_file(path, "budgett = 5\n");
    RunConfig fresh;
    CHECK_THROWS(load_config_file(path, fresh));
  }

  SUBCASE("config hash tracks the settings") {
    RunConfig a, b;
    b.search.inference_budget += 1;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(a) == config_hash(RunConfig{}));
  }
}

TEST_CASE("single-iteration loop writes its artifacts") {
  Corpus c = load_corpus(make_test_corpus());
  RunConfig config = quick_config();
  std::string out = std::string(kDir) + "/loop1";
  fs::remove_all(out);
  auto reports = rl_loop(c, 1, config, out);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].iteration == 0);
  CHECK(reports[0].mode == SearchMode::Uct);  // iteration 0 is always unguided
  CHECK(reports[0].total_solved >= 4);
  CHECK(fs::exists(out + "/config.json"));
  CHECK(fs::exists(out + "/iter_0/results.jsonl"));
  CHECK(fs::exists(out + "/report.csv"));
  // a single unguided iteration trains nothing
  CHECK(reports[0].policy_model_path.empty());
  CHECK(reports[0].value_model_path.empty());
}

TEST_CASE("policy-only loop trains policy models and no value models") {
  Corpus c = load_corpus(make_test_corpus());
  RunConfig config = quick_config();
  config.search.mode = SearchMode::UctPolicy;
  std::string out = std::string(kDir) + "/loop3";
  fs::remove_all(out);
  auto reports = rl_loop(c, 3, config, out);
  REQUIRE(reports.size() == 3);
  CHECK(reports[0].mode == SearchMode::Uct);
  CHECK(reports[1].mode == SearchMode::UctPolicy);
  CHECK(reports[2].mode == SearchMode::UctPolicy);
  int policy_models = 0, value_models = 0;
  for (const auto& r : reports) {
    if (!r.policy_model_path.empty()) {
      ++policy_models;
      CHECK(fs::exists(r.policy_model_path));
    }
    if (!r.value_model_path.empty()) ++value_models;
  }
  CHECK(policy_models == 2);
  CHECK(value_models == 0);
  // examples accumulate across iterations
  CHECK(reports[2].policy_example_count >= reports[1].policy_example_count);
  CHECK(fs::exists(out + "/iter_1/policy.examples"));
  CHECK(fs::exists(out + "/iter_2/results.jsonl"));

  SUBCASE("the report csv has a line per iteration plus a header") {
    std::ifstream in(out + "/report.csv");
    int lines = 0;
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) ++lines;
    CHECK(lines == 4);
  }
}

TEST_CASE("baseline comparison covers all three systems") {
  Corpus c = load_corpus(make_test_corpus());
  auto rows = evaluate_baselines(c, quick_config());
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].system == "iterative_deepening");
  CHECK(rows[1].system == "bare");
  CHECK(rows[2].system == "uct");
  for (const auto& r : rows) {
    CHECK(r.total_solved >= 4);  // five of six are provable; sat is not
    CHECK(r.total_solved <= 5);
  }
  std::string csv = baselines_to_csv(rows);
  CHECK(csv.find("iterative_deepening") != std::string::npos);
}

TEST_CASE("result lines carry the proof and inference counts") {
  Corpus c = load_corpus(make_test_corpus());
  RunConfig config = quick_config();
  auto results = run_corpus(c, config);
  std::string jsonl = results_to_jsonl(results, config);
  std::istringstream in(jsonl);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    CHECK(line.find("\"problem\"") != std::string::npos);
    CHECK(line.find("\"status\"") != std::string::npos);
    // timing is off by default: byte-stable output has no wall times
    CHECK(line.find("wall_ms") == std::string::npos);
  }
  CHECK(lines == 6);
}
