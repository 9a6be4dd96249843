#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "iab/harness.hpp"

namespace {

struct RunOptions {
  std::string config;
  std::optional<std::string> policy;
  std::optional<std::uint64_t> seed;
  std::optional<int> episodes;
  std::optional<int> steps;
  std::string out = "metrics.csv";
  std::string trace;
  std::string checkpoint_dir;
  std::string topology_out;
  bool perturb = false;
  bool wall_clock = false;
};

iab::ExperimentConfig Resolve(const RunOptions& o) {
  iab::ExperimentConfig cfg = iab::LoadConfig(o.config);
  if (o.policy) cfg.policy = iab::ParsePolicy(*o.policy);
  if (o.seed) cfg.seed = *o.seed;
  if (o.episodes) cfg.episodes = *o.episodes;
  if (o.steps) cfg.env.episode.steps_per_episode = *o.steps;
  if (o.perturb) cfg.env.episode.perturb_users = true;
  if (o.wall_clock) cfg.record_wall_clock = true;
  iab::ValidateConfig(cfg);
  return cfg;
}

void Run(const RunOptions& o) {
  const iab::ExperimentConfig cfg = Resolve(o);
  std::ofstream trace;
  if (!o.trace.empty()) {
    trace.open(o.trace, std::ios::binary);
    if (!trace) throw std::runtime_error("cannot write " + o.trace);
  }
  iab::Trainer trainer(cfg);
  if (trace.is_open()) trainer.set_trace(&trace);
  if (!o.topology_out.empty()) {
    std::ofstream topo(o.topology_out, std::ios::binary);
    if (!topo) throw std::runtime_error("cannot write " + o.topology_out);
    iab::WriteTopology(topo, trainer.env().topology());
  }
  const auto metrics = trainer.Run();
  iab::WriteMetricsCsv(std::filesystem::path(o.out), metrics);
  if (!o.checkpoint_dir.empty()) {
    if (const auto* roster = trainer.roster()) roster->Save(o.checkpoint_dir);
  }
  std::cerr << iab::PolicyName(cfg.policy) << ": " << metrics.size() << " episodes, final-window mean "
            << iab::FinalWindowMean(metrics, cfg.final_window) << " bit/s/Hz -> " << o.out << '\n';
}

void Compare(const RunOptions& o) {
  const iab::ExperimentConfig cfg = Resolve(o);
  const auto rows = iab::ComparePolicies(cfg);
  std::ofstream out(o.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + o.out);
  iab::WriteComparisonCsv(out, rows);
  if (!out) throw std::runtime_error("failed writing " + o.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-agent deep Q-learning for IAB subchannel and power allocation"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Train one policy and write per-episode metrics");
  run_cmd->add_option("--config", run.config, "Config file (key = value)")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--policy", run.policy, "ddqn, dqn or random");
  run_cmd->add_option("--seed", run.seed, "Experiment seed");
  run_cmd->add_option("--episodes", run.episodes, "Number of episodes");
  run_cmd->add_option("--steps", run.steps, "Steps per episode");
  run_cmd->add_option("--out", run.out, "Metrics CSV path");
  run_cmd->add_option("--trace", run.trace, "Per-step trace file");
  run_cmd->add_option("--checkpoint-dir", run.checkpoint_dir, "Write final weights and a roster manifest here");
  run_cmd->add_option("--topology-out", run.topology_out, "Dump the topology table here");
  run_cmd->add_flag("--perturb", run.perturb, "Perturb users around their anchors every step");
  run_cmd->add_flag("--wall-clock", run.wall_clock, "Fill the seconds column (breaks byte-identical output)");

  RunOptions cmp;
  cmp.out = "comparison.csv";
  auto* cmp_cmd = app.add_subcommand("compare", "Run ddqn, dqn and random on one seed and tabulate");
  cmp_cmd->add_option("--config", cmp.config, "Config file (key = value)")->required()->check(CLI::ExistingFile);
  cmp_cmd->add_option("--seed", cmp.seed, "Experiment seed");
  cmp_cmd->add_option("--episodes", cmp.episodes, "Number of episodes");
  cmp_cmd->add_option("--steps", cmp.steps, "Steps per episode");
  cmp_cmd->add_option("--out", cmp.out, "Comparison CSV path");
  cmp_cmd->add_flag("--perturb", cmp.perturb, "Perturb users around their anchors every step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "iab-sapa: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*run_cmd) Run(run);
    if (*cmp_cmd) Compare(cmp);
  } catch (const std::exception& e) {
    std::cerr << "iab-sapa: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
