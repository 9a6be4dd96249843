#include "iab/env.hpp"

#include <ostream>
#include <stdexcept>

#include "iab/random.hpp"

namespace iab {

int AgentState::Index() const {
  int v = 0;
  for (auto b : bits) v = (v << 1) | (b ? 1 : 0);
  return v;
}

IabEnv::IabEnv(EnvConfig config, NetworkTopology topology)
    : config_(std::move(config)),
      topology_(std::move(topology)),
      phy_(PhyParams::Uniform(topology_.num_iab(), config_.self_interference)),
      donor_levels_(MakePowerLevels(config_.donor_power_dbm, config_.donor_levels)),
      iab_levels_(MakePowerLevels(config_.iab_power_dbm, config_.iab_levels)) {
  if (config_.episode.steps_per_episode < 1) throw std::invalid_argument("steps_per_episode must be >= 1");
  phy_.divide_backhaul = config_.divide_backhaul;
  const int L = topology_.num_iab();
  const int K = topology_.users_per_bs();
  const int N = config_.fading.num_subchannels;
  const auto mode = config_.action_mode;
  agents_.push_back({{AgentRole::kDonorUsers, 0}, ActionSpace(K, N, config_.donor_levels, mode)});
  agents_.push_back({{AgentRole::kDonorBackhaul, 0}, ActionSpace(L, N, config_.donor_levels, mode)});
  for (int l = 1; l <= L; ++l) {
    agents_.push_back({{AgentRole::kIab, l}, ActionSpace(K, N, config_.iab_levels, mode)});
  }
}

const ChannelRealization& IabEnv::channel() const {
  if (!channel_) throw std::logic_error("environment has no channel yet; call Reset first");
  return *channel_;
}

void IabEnv::SetChannel(ChannelRealization channel) {
  if (channel.num_iab() != topology_.num_iab() ||
      channel.users_per_bs() != topology_.users_per_bs() ||
      channel.num_subchannels() != config_.fading.num_subchannels) {
    throw std::invalid_argument("channel does not match the environment");
  }
  channel_ = std::move(channel);
  channel_pinned_ = true;
}

AllocationDecision IabEnv::Decide(std::span<const int> codes) const {
  if (static_cast<int>(codes.size()) != num_agents()) {
    throw std::invalid_argument("need one action code per agent");
  }
  AllocationDecision d = AllocationDecision::Idle(topology_.num_iab(), topology_.users_per_bs());
  for (int a = 0; a < num_agents(); ++a) {
    const AgentSpec& spec = agents_[a];
    const auto choices = spec.space.Decode(codes[a]);
    const PowerLevels& levels = spec.id.role == AgentRole::kIab ? iab_levels_ : donor_levels_;
    for (int i = 0; i < static_cast<int>(choices.size()); ++i) {
      LinkAssignment la;
      if (choices[i].subchannel != kNoSubchannel) {
        la = {choices[i].subchannel, levels[choices[i].level]};
      }
      switch (spec.id.role) {
        case AgentRole::kDonorUsers:
          d.donor_users[i] = la;
          break;
        case AgentRole::kDonorBackhaul:
          d.donor_backhaul[i] = la;
          break;
        case AgentRole::kIab:
          d.iab_users[spec.id.bs - 1][i] = la;
          break;
      }
    }
  }
  return d;
}

std::vector<AgentState> IabEnv::StatesFrom(const RateReport& rates) const {
  const double th = config_.episode.rate_threshold;
  std::vector<AgentState> states;
  states.reserve(agents_.size());
  for (const auto& spec : agents_) {
    AgentState s;
    for (int i = 0; i < spec.state_size(); ++i) {
      double rate = 0.0;
      switch (spec.id.role) {
        case AgentRole::kDonorUsers:
          rate = rates.UserRate(0, i);
          break;
        case AgentRole::kDonorBackhaul:
          rate = rates.BackhaulRate(i + 1);
          break;
        case AgentRole::kIab:
          rate = rates.UserRate(spec.id.bs, i);
          break;
      }
      s.bits.push_back(rate >= th ? 1 : 0);
    }
    states.push_back(std::move(s));
  }
  return states;
}

Evaluation IabEnv::Evaluate(std::span<const int> codes) const {
  Evaluation e;
  e.decision = Decide(codes);
  e.violations = Validate(e.decision, donor_levels_, iab_levels_);
  e.rates = UserRates(e.decision, channel(), phy_);
  e.reward.raw_avg_rate = e.rates.MeanUserRate();
  bool fire = false;
  if (config_.penalty_trigger == PenaltyTrigger::kConstraintViolation) {
    fire = !e.violations.empty();
  } else {
    for (double u : e.rates.user) fire = fire || u < config_.episode.rate_threshold;
  }
  e.reward.penalty_applied = fire;
  e.reward.reward = e.reward.raw_avg_rate - (fire ? config_.penalty : 0.0);
  return e;
}

std::vector<AgentState> IabEnv::Reset(std::uint64_t seed) {
  episode_seed_ = seed;
  step_ = 0;
  topology_ = topology_.WithUserPositions([&] {
    std::vector<std::vector<Position>> anchors(topology_.num_bs());
    for (int l = 0; l < topology_.num_bs(); ++l) {
      for (int k = 0; k < topology_.users_per_bs(); ++k) anchors[l].push_back(topology_.anchor(l, k));
    }
    return anchors;
  }());

  if (!(channel_pinned_ && channel_)) {
    draws_ = DrawFading(topology_.num_iab(), topology_.users_per_bs(), config_.fading,
                        MixSeed(seed, streams::kFading));
    channel_ = Realize(topology_, config_.fading, draws_);
    if (config_.episode.fading_redraw == FadingRedraw::kFrozen) channel_pinned_ = true;
  }

  Rng rng = MakeRng(seed, streams::kResetAction);
  std::vector<int> codes;
  for (const auto& spec : agents_) {
    codes.push_back(std::uniform_int_distribution<int>(0, spec.space.size() - 1)(rng));
  }
  return StatesFrom(Evaluate(codes).rates);
}

void IabEnv::AdvanceDynamics() {
  const bool perturb = config_.episode.perturb_users;
  const bool redraw = config_.episode.fading_redraw == FadingRedraw::kPerStep && !channel_pinned_;
  if (perturb) {
    topology_ = PerturbUsers(topology_, config_.perturbation,
                             MixSeed(episode_seed_, 1000003ULL * (step_ + 1)));
  }
  if (redraw) {
    draws_ = DrawFading(topology_.num_iab(), topology_.users_per_bs(), config_.fading,
                        MixSeed(episode_seed_, 7919ULL * (step_ + 1) + streams::kFading));
  }
  if ((perturb || redraw) && !channel_pinned_) channel_ = Realize(topology_, config_.fading, draws_);
}

StepResult IabEnv::Step(std::span<const int> codes) {
  if (!channel_) throw std::logic_error("Step called before Reset");
  for (int a = 0; a < num_agents(); ++a) {
    if (codes.size() != agents_.size() || codes[a] < 0 || codes[a] >= agents_[a].space.size()) {
      throw std::out_of_range("invalid action code for agent " + agents_[a].id.Name());
    }
  }
  Evaluation e = Evaluate(codes);
  StepResult out;
  out.step_index = step_;
  out.reward = e.reward;
  out.states = StatesFrom(e.rates);
  out.rates = std::move(e.rates);
  out.violations = std::move(e.violations);

  if (trace_) {
    *trace_ << step_;
    for (int c : codes) *trace_ << ' ' << c;
    *trace_ << ' ' << out.reward.raw_avg_rate << ' ' << (out.reward.penalty_applied ? 1 : 0) << ' '
            << out.reward.reward << '\n';
  }

  ++step_;
  out.episode_done = step_ >= config_.episode.steps_per_episode;
  AdvanceDynamics();
  return out;
}

}  // namespace iab
