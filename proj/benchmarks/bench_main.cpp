#include <benchmark/benchmark.h>

#include "iab/harness.hpp"

namespace {

void BM_UserRates(benchmark::State& state) {
  iab::ExperimentConfig cfg;
  cfg.topology.num_iab = static_cast<int>(state.range(0));
  cfg.topology.users_per_bs = static_cast<int>(state.range(0));
  cfg.env.fading.num_subchannels = 2 * static_cast<int>(state.range(0));
  iab::IabEnv env = iab::MakeEnvironment(cfg);
  env.Reset(1);
  iab::Rng rng = iab::MakeRng(2);
  std::vector<int> codes;
  for (const auto& a : env.agents()) codes.push_back(iab::RandomPolicy(a.space.size(), rng));
  for (auto _ : state) benchmark::DoNotOptimize(env.Evaluate(codes));
}
BENCHMARK(BM_UserRates)->Arg(2)->Arg(3);

void BM_Forward(benchmark::State& state) {
  const iab::nn::QNetwork net({2, 200, 400, 800, 48}, 1);
  const std::vector<double> s{1.0, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(net.Forward(s));
}
BENCHMARK(BM_Forward);

void BM_Backward(benchmark::State& state) {
  const iab::nn::QNetwork net({2, 200, 400, 800, 48}, 1);
  const std::vector<double> s0{1.0, 0.0}, s1{0.0, 1.0}, s2{1.0, 1.0};
  std::vector<iab::nn::TrainingSample> batch;
  for (int i = 0; i < 16; ++i) batch.push_back({i % 3 == 0 ? s0 : (i % 3 == 1 ? s1 : s2), i % 48, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(iab::nn::Backward(net, batch));
}
BENCHMARK(BM_Backward);

void BM_RmsPropStep(benchmark::State& state) {
  iab::nn::QNetwork net({2, 200, 400, 800, 48}, 1);
  const std::vector<double> s{1.0, 0.0};
  const std::vector<iab::nn::TrainingSample> batch{{s, 3, 1.0}};
  const iab::nn::Gradients g = iab::nn::Backward(net, batch);
  iab::nn::RmsProp opt(net, {});
  for (auto _ : state) opt.Step(net, g);
}
BENCHMARK(BM_RmsPropStep);

void BM_AgentTrainStep(benchmark::State& state) {
  iab::LearnerConfig cfg;
  iab::DeepQAgent agent(2, 48, cfg, 1);
  iab::Rng rng = iab::MakeRng(3);
  for (int i = 0; i < 64; ++i) {
    agent.Remember({{double(i % 2), double(i / 2 % 2)}, i % 48, 0.1 * i, {double(i / 2 % 2), double(i % 2)}});
  }
  for (auto _ : state) benchmark::DoNotOptimize(agent.TrainStep(rng));
}
BENCHMARK(BM_AgentTrainStep);

void BM_EnvironmentStep(benchmark::State& state) {
  iab::ExperimentConfig cfg;
  cfg.env.episode.steps_per_episode = 1 << 30;
  iab::IabEnv env = iab::MakeEnvironment(cfg);
  env.Reset(1);
  iab::Rng rng = iab::MakeRng(2);
  for (auto _ : state) {
    std::vector<int> codes;
    for (const auto& a : env.agents()) codes.push_back(iab::RandomPolicy(a.space.size(), rng));
    benchmark::DoNotOptimize(env.Step(codes));
  }
}
BENCHMARK(BM_EnvironmentStep);

}  // namespace

BENCHMARK_MAIN();
