#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "iab/env.hpp"
#include "iab/neural.hpp"
#include "iab/random.hpp"

namespace iab {

struct Experience {
  std::vector<double> state;
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
};

// FIFO ring: pushing past capacity evicts the oldest experience.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 5000);

  void Push(Experience e);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  // 0 is the oldest retained experience.
  const Experience& at(std::size_t i) const { return items_.at(i); }

  // Uniform with replacement.
  std::vector<std::size_t> SampleIndices(std::size_t batch, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::deque<Experience> items_;
};

// eps(t) = max(end, start * decay^t), t counted in environment steps.
struct ExplorationSchedule {
  double start = 1.0;
  double end = 0.05;
  double decay = 0.999;

  double Epsilon(std::int64_t step) const;
  void Validate() const;
};

// Lowest index wins ties.
int ArgMax(const Eigen::VectorXd& values);

int RandomPolicy(int num_actions, Rng& rng);

int SelectAction(const nn::QNetwork& online, std::span<const double> state, double epsilon,
                 Rng& rng);

// y = r + gamma * Q_target(s', argmax_a Q_online(s', a)). Episodes have a fixed
// length and no absorbing state, so nothing is masked.
double DdqnTarget(double reward, std::span<const double> next_state, const nn::QNetwork& online,
                  const nn::QNetwork& target, double gamma);

// y = r + gamma * max_a Q_target(s', a).
double DqnTarget(double reward, std::span<const double> next_state, const nn::QNetwork& target,
                 double gamma);

enum class TargetRule { kDouble, kStandard };

struct LearnerConfig {
  std::vector<int> hidden_layers{200, 400, 800};
  nn::RmsPropParams optimizer;
  nn::HuberParams huber;
  double gamma = 0.95;
  std::size_t buffer_capacity = 5000;
  int batch_size = 16;
  int target_sync_period = 100;  // in training steps
  TargetRule target_rule = TargetRule::kDouble;
};

// Online network, quasi-static target copy, optimizer and replay buffer of
// one agent. Agents never share any of these.
class DeepQAgent {
 public:
  DeepQAgent(int state_size, int num_actions, const LearnerConfig& config, std::uint64_t seed);

  int Act(std::span<const double> state, double epsilon, Rng& rng) const;
  void Remember(Experience e) { buffer_.Push(std::move(e)); }

  // One RMSprop step on a uniformly sampled batch. Returns the batch loss, or
  // nothing when the buffer holds fewer than batch_size experiences.
  std::optional<double> TrainStep(Rng& rng);

  // Regression targets for a batch, computed with one forward pass per
  // distinct next state.
  std::vector<double> Targets(std::span<const Experience* const> batch) const;

  const nn::QNetwork& online() const { return online_; }
  const nn::QNetwork& target() const { return target_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  const LearnerConfig& config() const { return config_; }
  std::int64_t train_steps() const { return train_steps_; }

  // Replaces both networks, e.g. from a checkpoint.
  void LoadOnline(nn::QNetwork net);

 private:
  LearnerConfig config_;
  nn::QNetwork online_;
  nn::QNetwork target_;
  nn::RmsProp optimizer_;
  ReplayBuffer buffer_;
  std::int64_t train_steps_ = 0;
};

// One DeepQAgent per environment agent, in the environment's agent order.
class AgentRoster {
 public:
  AgentRoster(const IabEnv& env, const LearnerConfig& config, std::uint64_t seed);

  int size() const { return static_cast<int>(agents_.size()); }
  DeepQAgent& operator[](int i) { return agents_.at(i); }
  const DeepQAgent& operator[](int i) const { return agents_.at(i); }
  const std::vector<AgentId>& ids() const { return ids_; }

  // Writes <dir>/<agent>.qnet per agent and a manifest <dir>/roster.txt
  // listing "agent path" lines.
  void Save(const std::filesystem::path& dir) const;
  void Load(const std::filesystem::path& manifest);

 private:
  std::vector<AgentId> ids_;
  std::vector<DeepQAgent> agents_;
};

// Tabular Q-learning: Q(s,a) += alpha (r + gamma max_a' Q(s',a') - Q(s,a)).
class TabularQ {
 public:
  TabularQ(int num_states, int num_actions);

  double& at(int s, int a) { return q_.at(static_cast<std::size_t>(s) * num_actions_ + a); }
  double at(int s, int a) const { return q_.at(static_cast<std::size_t>(s) * num_actions_ + a); }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  void Update(int s, int a, double reward, int next_s, double alpha, double gamma);

 private:
  int num_states_;
  int num_actions_;
  std::vector<double> q_;
};

struct OptimumResult {
  std::vector<int> codes;
  double sum_rate = 0.0;
  std::int64_t evaluated = 0;
};

// Brute force over the product of all agents' action spaces against the
// environment's current channel, keeping only constraint-clean decisions.
// Ties go to the lowest joint code (first agent most significant).
OptimumResult ExhaustiveOptimum(const IabEnv& env, std::int64_t max_joint_actions = 1'000'000);

}  // namespace iab
