#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iab/agent.hpp"
#include "iab/env.hpp"
#include "iab/topology.hpp"

namespace iab {

enum class PolicyKind { kSapaDdqn, kDqn, kRandom };

std::string PolicyName(PolicyKind p);
// Accepts sapa_ddqn / ddqn, dqn and random.
PolicyKind ParsePolicy(const std::string& name);

struct ExperimentConfig {
  TopologyParams topology;
  EnvConfig env;
  LearnerConfig learner;
  ExplorationSchedule exploration;
  PolicyKind policy = PolicyKind::kSapaDdqn;
  int episodes = 150;
  std::uint64_t seed = 1;
  int final_window = 20;
  // Off by default so that metrics files are byte-identical across runs.
  bool record_wall_clock = false;
};

// Rejects infeasible settings with a message naming the offending key.
void ValidateConfig(const ExperimentConfig& cfg);

// Line-oriented "key = value" text, a TOML subset: integers, reals, booleans,
// bare or quoted strings and flat arrays. '#' starts a comment. Keys not
// present keep the value from `base`.
ExperimentConfig ParseConfig(std::istream& in, ExperimentConfig base = {});
ExperimentConfig LoadConfig(const std::filesystem::path& path, ExperimentConfig base = {});
void WriteConfig(std::ostream& out, const ExperimentConfig& cfg);

struct EpisodeMetrics {
  int episode = 0;
  double mean_rate = 0.0;    // mean over steps of the network-average user rate, bit/s/Hz
  double mean_reward = 0.0;
  int penalties = 0;
  double epsilon = 0.0;      // at episode end
  double seconds = 0.0;
  friend bool operator==(const EpisodeMetrics&, const EpisodeMetrics&) = default;
};

struct GreedyResult {
  double mean_sum_rate = 0.0;
  // Steps whose decision violates a constraint contribute zero.
  double mean_feasible_sum_rate = 0.0;
  double final_sum_rate = 0.0;
  int penalties = 0;
  std::vector<int> final_codes;
};

// Owns the environment and, for learning policies, the agent roster of one run.
class Trainer {
 public:
  explicit Trainer(const ExperimentConfig& cfg);
  // Uses a prebuilt environment, e.g. one with a hand-picked channel.
  Trainer(const ExperimentConfig& cfg, IabEnv env);

  EpisodeMetrics RunEpisode();
  std::vector<EpisodeMetrics> Run();

  // Greedy rollout without learning or exploration.
  GreedyResult GreedyEvaluate(int steps, std::uint64_t seed);

  void set_trace(std::ostream* trace) { env_.set_trace(trace); }

  IabEnv& env() { return env_; }
  const AgentRoster* roster() const { return roster_ ? &*roster_ : nullptr; }
  AgentRoster* roster() { return roster_ ? &*roster_ : nullptr; }
  int episodes_run() const { return episode_; }

 private:
  std::vector<int> ChooseActions(const std::vector<AgentState>& states, double epsilon);

  ExperimentConfig cfg_;
  IabEnv env_;
  std::optional<AgentRoster> roster_;
  Rng policy_rng_;
  Rng replay_rng_;
  int episode_ = 0;
  std::int64_t global_step_ = 0;
};

IabEnv MakeEnvironment(const ExperimentConfig& cfg);

std::vector<EpisodeMetrics> RunExperiment(const ExperimentConfig& cfg, std::ostream* trace = nullptr);

// Mean of mean_rate over the last (or first) `window` episodes.
double FinalWindowMean(std::span<const EpisodeMetrics> metrics, int window);
double FirstWindowMean(std::span<const EpisodeMetrics> metrics, int window);

struct PolicySummary {
  PolicyKind policy = PolicyKind::kRandom;
  double first_window_rate = 0.0;
  double final_window_rate = 0.0;
  double ratio_vs_random = 0.0;
};

// Runs every policy on the same seed, hence the same topology and per-episode
// channels; only the policy differs.
std::vector<PolicySummary> ComparePolicies(const ExperimentConfig& cfg);

// Columns: episode,mean_rate_bps_hz,mean_reward,penalties,epsilon,seconds.
// Numbers use the shortest round-trip form and never depend on the locale.
void WriteMetricsCsv(std::ostream& out, std::span<const EpisodeMetrics> metrics);
void WriteMetricsCsv(const std::filesystem::path& path, std::span<const EpisodeMetrics> metrics);
std::vector<EpisodeMetrics> ReadMetricsCsv(std::istream& in);

// Columns: policy,first_window_rate_bps_hz,final_window_rate_bps_hz,ratio_vs_random.
void WriteComparisonCsv(std::ostream& out, std::span<const PolicySummary> rows);

}  // namespace iab
