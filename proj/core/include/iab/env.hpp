#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "iab/allocation.hpp"
#include "iab/channel.hpp"
#include "iab/phy.hpp"
#include "iab/topology.hpp"

namespace iab {

enum class FadingRedraw {
  kPerEpisode,
  kPerStep,
  // Drawn at the first reset and kept for the lifetime of the environment.
  kFrozen,
};

enum class PenaltyTrigger {
  kConstraintViolation,
  kUserBelowThreshold,
};

struct EpisodeConfig {
  int steps_per_episode = 1000;
  bool perturb_users = false;
  FadingRedraw fading_redraw = FadingRedraw::kPerEpisode;
  double rate_threshold = 1.0;  // R_th, bit/s/Hz
};

struct EnvConfig {
  FadingParams fading;
  double donor_power_dbm = 46.0;
  double iab_power_dbm = 33.0;
  int donor_levels = 2;  // T1
  int iab_levels = 2;    // T2
  double self_interference = kDefaultSelfInterference;
  bool divide_backhaul = false;
  EpisodeConfig episode;
  PerturbationParams perturbation;
  double penalty = 500.0;
  PenaltyTrigger penalty_trigger = PenaltyTrigger::kConstraintViolation;
  ActionMode action_mode = ActionMode::kJoint;
};

// One learner. The donor is split into a UE-facing and an IAB-facing agent.
struct AgentSpec {
  AgentId id;
  ActionSpace space;
  // Length of the agent's observation: K for UE-facing agents, L for the
  // donor's backhaul agent.
  int state_size() const { return space.num_links(); }
};

// Rate-threshold bits of the links one agent owns.
struct AgentState {
  std::vector<std::uint8_t> bits;

  std::vector<double> Features() const { return {bits.begin(), bits.end()}; }
  // Bits read as a binary number, first bit most significant.
  int Index() const;
  friend bool operator==(const AgentState&, const AgentState&) = default;
};

struct RewardRecord {
  double raw_avg_rate = 0.0;
  bool penalty_applied = false;
  double reward = 0.0;
};

struct Evaluation {
  AllocationDecision decision;
  std::vector<Violation> violations;
  RateReport rates;
  RewardRecord reward;
};

struct StepResult {
  std::vector<AgentState> states;
  RewardRecord reward;
  int step_index = 0;
  bool episode_done = false;
  RateReport rates;
  std::vector<Violation> violations;
};

// The multi-agent MDP. Agents are ordered [donor-ue, donor-iab, iab-1 .. iab-L].
// Every agent receives the same centralized reward: the mean user rate over
// the whole network, minus the penalty when the trigger fires.
//
// Step calls must be serialized; the environment is a single state machine.
class IabEnv {
 public:
  IabEnv(EnvConfig config, NetworkTopology topology);

  const EnvConfig& config() const { return config_; }
  const std::vector<AgentSpec>& agents() const { return agents_; }
  int num_agents() const { return static_cast<int>(agents_.size()); }
  const NetworkTopology& topology() const { return topology_; }
  const ChannelRealization& channel() const;
  const PowerLevels& donor_levels() const { return donor_levels_; }
  const PowerLevels& iab_levels() const { return iab_levels_; }
  int step_index() const { return step_; }

  // Starts a new episode: restores anchored user positions, draws the channel
  // (unless frozen and already drawn) and evaluates a uniformly random joint
  // action to produce the first observations.
  std::vector<AgentState> Reset(std::uint64_t seed);

  StepResult Step(std::span<const int> codes);

  // Pure evaluation against the current channel; does not advance time.
  AllocationDecision Decide(std::span<const int> codes) const;
  Evaluation Evaluate(std::span<const int> codes) const;

  std::vector<AgentState> StatesFrom(const RateReport& rates) const;

  // Replaces the channel, e.g. with a hand-built realization. Marks it frozen
  // so later resets keep it.
  void SetChannel(ChannelRealization channel);

  // Per-step trace lines: step codes raw_avg_rate penalty reward.
  void set_trace(std::ostream* trace) { trace_ = trace; }

 private:
  void AdvanceDynamics();

  EnvConfig config_;
  NetworkTopology topology_;
  PhyParams phy_;
  PowerLevels donor_levels_;
  PowerLevels iab_levels_;
  std::vector<AgentSpec> agents_;

  std::optional<ChannelRealization> channel_;
  FadingDraws draws_;
  bool channel_pinned_ = false;
  std::uint64_t episode_seed_ = 0;
  int step_ = 0;
  std::ostream* trace_ = nullptr;
};

}  // namespace iab
