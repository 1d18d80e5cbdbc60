// Command-line surface: prove, baseline, loop, split, check, export-data,
// train. Exit codes: 0 proved/success, 1 not proved, 2 error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ctp/checker.hpp"
#include "ctp/orchestrator.hpp"
#include "ctp/parser.hpp"

using namespace ctp;
namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CommonOpts {
  RunConfig config;
  std::string config_file;
  std::string mode = "uct";

  void add_to(CLI::App* app) {
    app->add_option("--config", config_file, "key=value config file");
    app->add_option("--mode", mode,
                    "bare | uct | uct+policy | uct+value | uct+policy+value");
    app->add_option("--budget", config.search.inference_budget);
    app->add_option("--playouts", config.search.playouts_per_bigstep);
    app->add_option("--c", config.search.exploration_c);
    app->add_option("--tau", config.search.tau);
    app->add_option("--heuristic-base", config.search.heuristic_base);
    app->add_option("--discount", config.search.value_discount);
    app->add_option("--playout-len", config.search.playout_len);
    app->add_option("--lambda", config.lambda);
    app->add_option("--seed", config.search.seed);
    app->add_option("--workers", config.workers);
    app->add_flag("--timing", config.timing, "include wall times in records");
    app->add_flag("--puct", config.search.puct);
  }

  RunConfig resolve(CLI::App* app) {
    RunConfig out;
    if (!config_file.empty()) load_config_file(config_file, out);
    // flags override the config file
    RunConfig flags = config;
    auto keep = [&](const char* name) { return app->count(name) > 0; };
    if (keep("--budget")) out.search.inference_budget = flags.search.inference_budget;
    if (keep("--playouts")) out.search.playouts_per_bigstep = flags.search.playouts_per_bigstep;
    if (keep("--c")) out.search.exploration_c = flags.search.exploration_c;
    if (keep("--tau")) out.search.tau = flags.search.tau;
    if (keep("--heuristic-base")) out.search.heuristic_base = flags.search.heuristic_base;
    if (keep("--discount")) out.search.value_discount = flags.search.value_discount;
    if (keep("--playout-len")) out.search.playout_len = flags.search.playout_len;
    if (keep("--lambda")) out.lambda = flags.lambda;
    if (keep("--seed")) out.search.seed = flags.search.seed;
    if (keep("--workers")) out.workers = flags.workers;
    if (keep("--timing")) out.timing = flags.timing;
    if (keep("--puct")) out.search.puct = flags.search.puct;
    if (keep("--mode")) out.search.mode = search_mode_from_string(mode);
    return out;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte-Carlo connection tableau prover"};
  app.require_subcommand(1);

  // prove
  auto* prove_cmd = app.add_subcommand("prove", "prove a single problem");
  std::string problem_path, policy_path, value_path, proof_out;
  prove_cmd->add_option("file", problem_path)->required();
  prove_cmd->add_option("--policy", policy_path, "policy model file");
  prove_cmd->add_option("--value", value_path, "value model file");
  prove_cmd->add_option("--proof-out", proof_out, "write proof file");
  bool use_id = false;
  prove_cmd->add_flag("--iterative-deepening", use_id,
                      "use the iterative-deepening baseline");
  CommonOpts prove_opts;
  prove_opts.add_to(prove_cmd);

  // baseline
  auto* baseline_cmd = app.add_subcommand("baseline", "compare id/bare/uct");
  std::string corpus_path, split_path, out_csv;
  baseline_cmd->add_option("corpus", corpus_path)->required();
  baseline_cmd->add_option("--split", split_path, "split assignment file");
  baseline_cmd->add_option("--out", out_csv, "write CSV here");
  CommonOpts baseline_opts;
  baseline_opts.add_to(baseline_cmd);

  // loop
  auto* loop_cmd = app.add_subcommand("loop", "prove/learn iterations");
  std::string loop_corpus, loop_split, loop_out;
  int iters = 1;
  loop_cmd->add_option("corpus", loop_corpus)->required();
  loop_cmd->add_option("--iters", iters)->required();
  loop_cmd->add_option("--split", loop_split, "split assignment file");
  loop_cmd->add_option("--out", loop_out, "experiment directory");
  CommonOpts loop_opts;
  loop_opts.add_to(loop_cmd);

  // split
  auto* split_cmd = app.add_subcommand("split", "assign train/test split");
  std::string split_corpus_path, split_out;
  double test_frac = 0.1;
  uint64_t split_seed = 0;
  split_cmd->add_option("corpus", split_corpus_path)->required();
  split_cmd->add_option("--test-frac", test_frac);
  split_cmd->add_option("--seed", split_seed);
  split_cmd->add_option("--out", split_out, "split file to write")->required();

  // check
  auto* check_cmd = app.add_subcommand("check", "verify a proof file");
  std::string check_problem, check_proof_path;
  check_cmd->add_option("file", check_problem)->required();
  check_cmd->add_option("proof", check_proof_path)->required();

  // export-data
  auto* export_cmd =
      app.add_subcommand("export-data", "run a corpus and write example files");
  std::string exp_corpus, exp_split, exp_out, exp_policy, exp_value;
  export_cmd->add_option("corpus", exp_corpus)->required();
  export_cmd->add_option("--split", exp_split);
  export_cmd->add_option("--out", exp_out, "output directory")->required();
  export_cmd->add_option("--policy", exp_policy, "policy model file");
  export_cmd->add_option("--value", exp_value, "value model file");
  CommonOpts export_opts;
  export_opts.add_to(export_cmd);

  // train
  auto* train_cmd = app.add_subcommand("train", "train a model from examples");
  std::string train_examples, train_kind = "policy", train_out;
  double train_lambda = 1.5;
  train_cmd->add_option("examples", train_examples)->required();
  train_cmd->add_option("--kind", train_kind, "policy | value");
  train_cmd->add_option("--lambda", train_lambda);
  train_cmd->add_option("--out", train_out, "model file to write")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*prove_cmd) {
      RunConfig config = prove_opts.resolve(prove_cmd);
      Problem problem = parse_problem_file(problem_path);
      Model policy, value;
      const Model *pp = nullptr, *vp = nullptr;
      if (!policy_path.empty()) { policy = Model::load(policy_path); pp = &policy; }
      if (!value_path.empty()) { value = Model::load(value_path); vp = &value; }
      config.search.seed = problem_seed(config.search.seed,
                                        fs::path(problem_path).stem().string());
      ProofResult result =
          use_id ? prove_iterative_deepening(problem, config.search)
                 : prove(problem, config.search, pp, vp);
      std::cout << "status: " << to_string(result.status) << "\n"
                << "inferences: " << result.inferences << "\n"
                << "playouts: " << result.playouts << "\n"
                << "bigsteps: " << result.bigsteps << "\n";
      if (result.status == ProofStatus::Proved) {
        std::string diag;
        bool ok = check_proof(problem, result.actions, &diag);
        std::cout << "checked: " << (ok ? "ok" : "FAILED " + diag) << "\n";
        // replay for the final substitution in the proof file
        TableauState replay;
        for (const Action& a : result.actions) replay.apply(a, problem);
        std::string proof_text = format_proof(result.actions, replay, problem);
        if (!proof_out.empty()) {
          std::ofstream out(proof_out);
          out << proof_text;
        } else {
          std::cout << proof_text;
        }
        return ok ? 0 : 2;
      }
      return 1;
    }

    if (*baseline_cmd) {
      RunConfig config = baseline_opts.resolve(baseline_cmd);
      Corpus corpus = load_corpus(corpus_path);
      if (!split_path.empty()) load_split(corpus, split_path);
      auto rows = evaluate_baselines(corpus, config);
      std::string csv = baselines_to_csv(rows);
      std::cout << csv;
      if (!out_csv.empty()) {
        std::ofstream out(out_csv);
        out << csv;
      }
      return 0;
    }

    if (*loop_cmd) {
      RunConfig config = loop_opts.resolve(loop_cmd);
      if (loop_cmd->count("--mode") == 0)
        config.search.mode = SearchMode::UctPolicyValue;
      Corpus corpus = load_corpus(loop_corpus);
      if (!loop_split.empty()) load_split(corpus, loop_split);
      if (loop_out.empty()) {
        std::ostringstream dir;
        dir << "experiments/" << std::hex << config_hash(config);
        loop_out = dir.str();
      }
      auto reports = rl_loop(corpus, iters, config, loop_out);
      std::cout << reports_to_csv(reports);
      std::cout << "artifacts: " << loop_out << "\n";
      return 0;
    }

    if (*split_cmd) {
      Corpus corpus = load_corpus(split_corpus_path);
      split_corpus(corpus, test_frac, split_seed);
      save_split(corpus, split_out);
      size_t test_n = 0;
      for (auto& [_, s] : corpus.split) test_n += s == Split::Test;
      std::cout << "train: " << corpus.entries.size() - test_n
                << " test: " << test_n << "\n";
      return 0;
    }

    if (*check_cmd) {
      Problem problem = parse_problem_file(check_problem);
      std::vector<Action> actions = parse_proof(read_file(check_proof_path));
      std::string diag;
      bool ok = check_proof(problem, actions, &diag);
      std::cout << (ok ? "valid" : "INVALID: " + diag) << "\n";
      return ok ? 0 : 1;
    }

    if (*export_cmd) {
      RunConfig config = export_opts.resolve(export_cmd);
      Corpus corpus = load_corpus(exp_corpus);
      if (!exp_split.empty()) load_split(corpus, exp_split);
      Model policy, value;
      const Model *pp = nullptr, *vp = nullptr;
      if (!exp_policy.empty()) { policy = Model::load(exp_policy); pp = &policy; }
      if (!exp_value.empty()) { value = Model::load(exp_value); vp = &value; }
      auto results = run_corpus(corpus, config, pp, vp);
      fs::create_directories(exp_out);
      std::vector<TrainingExample> pol, val;
      for (const auto& r : results) {
        pol.insert(pol.end(), r.policy_examples.begin(), r.policy_examples.end());
        val.insert(val.end(), r.value_examples.begin(), r.value_examples.end());
      }
      export_examples(pol, exp_out + "/policy.examples");
      export_examples(val, exp_out + "/value.examples");
      std::ofstream out(exp_out + "/results.jsonl");
      out << results_to_jsonl(results, config);
      std::cout << "policy examples: " << pol.size()
                << " value examples: " << val.size() << "\n";
      return 0;
    }

    if (*train_cmd) {
      auto examples = import_examples(train_examples);
      TrainConfig tc;
      tc.lambda = train_lambda;
      ModelKind kind =
          train_kind == "value" ? ModelKind::Value : ModelKind::Policy;
      Model model = train(examples, kind, tc);
      model.save(train_out);
      std::cout << "trained on " << examples.size() << " examples -> "
                << train_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
