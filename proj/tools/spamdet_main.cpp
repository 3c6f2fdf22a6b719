// Command-line front end for the deceptive-review detection pipeline.
//
//   spamdet <command> --config experiment.json [--seed N] [--out DIR]
//
// Commands: ingest, cluster, sieve, featurize, train,
//           eval {indomain|cross|curve|reviewer}, report.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "spamdet/pipeline.hpp"

namespace {

int run(int argc, char** argv) {
  CLI::App app{"deceptive review detection toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::uint64_t seed_override = 0;
  bool seed_set = false;
  std::string eval_protocol = "cross";
  std::string report_name = "report_cross";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config file (JSON)")
        ->required();
    cmd->add_option("--out", out_override, "output directory override");
    cmd->add_option("--seed", seed_override, "seed override")
        ->each([&](const std::string&) { seed_set = true; });
  };

  CLI::App* ingest = app.add_subcommand("ingest", "normalize the snapshot");
  CLI::App* cluster =
      app.add_subcommand("cluster", "EM reviewer-graph clustering");
  CLI::App* sieve = app.add_subcommand("sieve", "ground-truth labeling");
  CLI::App* featurize =
      app.add_subcommand("featurize", "build feature space and vectors");
  CLI::App* train = app.add_subcommand("train", "train the maxent model");
  CLI::App* eval = app.add_subcommand("eval", "run an evaluation protocol");
  eval->add_option("protocol", eval_protocol,
                   "indomain | cross | curve | reviewer");
  CLI::App* report =
      app.add_subcommand("report", "print a previously computed report");
  report->add_option("name", report_name, "report stem, e.g. report_cross");
  for (CLI::App* cmd :
       {ingest, cluster, sieve, featurize, train, eval, report}) {
    add_common(cmd);
  }

  CLI11_PARSE(app, argc, argv);

  spamdet::RunConfig config = spamdet::RunConfig::load(config_path);
  if (!out_override.empty()) config.out_dir = out_override;
  if (seed_set) config.seed = seed_override;

  if (ingest->parsed()) spamdet::cmd_ingest(config);
  else if (cluster->parsed()) spamdet::cmd_cluster(config);
  else if (sieve->parsed()) spamdet::cmd_sieve(config);
  else if (featurize->parsed()) spamdet::cmd_featurize(config);
  else if (train->parsed()) spamdet::cmd_train(config);
  else if (eval->parsed()) spamdet::cmd_eval(config, eval_protocol);
  else if (report->parsed()) {
    std::ifstream in(config.out_dir + "/" + report_name + ".txt");
    if (!in) {
      std::cerr << "report: missing " << report_name
                << ".txt (run eval first)\n";
      return 2;
    }
    std::cout << in.rdbuf();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const spamdet::StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
