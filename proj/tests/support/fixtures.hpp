#pragma once

#include <cmath>
#include <random>

#include "iab/allocation.hpp"
#include "iab/channel.hpp"
#include "iab/harness.hpp"
#include "iab/random.hpp"

namespace iab::testing {

// Gains log-uniform over [1e-13, 1e-7]; noise as in the default setup.
inline ChannelRealization RandomChannel(int L, int K, int N, Rng& rng) {
  ChannelRealization c(L, K, N, NoisePowerW(FadingParams{}));
  std::uniform_real_distribution<double> exp10(-13.0, -7.0);
  for (int tx = 0; tx <= L; ++tx) {
    for (int rx = 0; rx < c.num_rx(); ++rx) {
      if (rx < L && rx == tx - 1) continue;
      for (int n = 0; n < N; ++n) c.SetGain(tx, rx, n, std::pow(10.0, exp10(rng)));
    }
  }
  return c;
}

// Every link gets a random subchannel (or none) and a random power in
// [0, p_max]; no orthogonality or budget is enforced.
inline AllocationDecision RandomDecision(int L, int K, int N, Rng& rng, double donor_w = 39.8,
                                         double iab_w = 2.0) {
  AllocationDecision d = AllocationDecision::Idle(L, K);
  std::uniform_int_distribution<int> sub(-1, N - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto fill = [&](LinkAssignment& a, double pmax) {
    a.subchannel = sub(rng);
    a.power_w = a.subchannel == kNoSubchannel ? 0.0 : u(rng) * pmax;
  };
  for (auto& a : d.donor_users) fill(a, donor_w);
  for (auto& a : d.donor_backhaul) fill(a, donor_w);
  for (auto& row : d.iab_users) {
    for (auto& a : row) fill(a, iab_w);
  }
  return d;
}

// Small, fast learner for tests that exercise the training loop.
inline ExperimentConfig TinyConfig() {
  ExperimentConfig cfg;
  cfg.topology.num_iab = 1;
  cfg.topology.users_per_bs = 1;
  cfg.env.fading.num_subchannels = 2;
  cfg.env.episode.steps_per_episode = 20;
  cfg.learner.hidden_layers = {16, 16};
  cfg.learner.batch_size = 4;
  cfg.episodes = 3;
  cfg.final_window = 2;
  return cfg;
}

}  // namespace iab::testing
