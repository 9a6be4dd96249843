#include "iab/harness.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"

namespace iab {
namespace {

using testing::TinyConfig;

TEST(Policy, NamesRoundTrip) {
  EXPECT_EQ(ParsePolicy("ddqn"), PolicyKind::kSapaDdqn);
  EXPECT_EQ(ParsePolicy("sapa_ddqn"), PolicyKind::kSapaDdqn);
  EXPECT_EQ(ParsePolicy("dqn"), PolicyKind::kDqn);
  EXPECT_EQ(ParsePolicy("random"), PolicyKind::kRandom);
  EXPECT_THROW(ParsePolicy("ppo"), std::invalid_argument);
  for (auto p : {PolicyKind::kSapaDdqn, PolicyKind::kDqn, PolicyKind::kRandom}) {
    EXPECT_EQ(ParsePolicy(PolicyName(p)), p);
  }
}

TEST(Config, ParsesKeysAliasesAndComments) {
  std::istringstream in(R"(# scenario
L = 3
K = 2   # users per BS
N = 6
T1 = 3
iab_levels = 4
R_th = 0.5
user_ring_m = [5, 40]
hidden_layers = [32, 64]
policy = "dqn"
fading_redraw = frozen
perturb_users = true
seed = 9
self_interference_db = -60
eps_end = 0.01
)");
  const ExperimentConfig c = ParseConfig(in);
  EXPECT_EQ(c.topology.num_iab, 3);
  EXPECT_EQ(c.topology.users_per_bs, 2);
  EXPECT_EQ(c.env.fading.num_subchannels, 6);
  EXPECT_EQ(c.env.donor_levels, 3);
  EXPECT_EQ(c.env.iab_levels, 4);
  EXPECT_EQ(c.env.episode.rate_threshold, 0.5);
  EXPECT_EQ(c.topology.user_ring.min_m, 5.0);
  EXPECT_EQ(c.topology.user_ring.max_m, 40.0);
  EXPECT_EQ(c.learner.hidden_layers, (std::vector<int>{32, 64}));
  EXPECT_EQ(c.policy, PolicyKind::kDqn);
  EXPECT_EQ(c.env.episode.fading_redraw, FadingRedraw::kFrozen);
  EXPECT_TRUE(c.env.episode.perturb_users);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_NEAR(c.env.self_interference, 1e-6, 1e-20);
  EXPECT_EQ(c.exploration.end, 0.01);
  EXPECT_NO_THROW(ValidateConfig(c));
}

TEST(Config, DefaultsMatchTheReferenceSetup) {
  const ExperimentConfig c;
  EXPECT_EQ(c.env.donor_power_dbm, 46.0);
  EXPECT_EQ(c.env.iab_power_dbm, 33.0);
  EXPECT_EQ(c.env.fading.bandwidth_hz, 200e6);
  EXPECT_EQ(c.env.self_interference, 1e-7);
  EXPECT_EQ(c.env.penalty, 500.0);
  EXPECT_EQ(c.env.episode.steps_per_episode, 1000);
  EXPECT_EQ(c.learner.buffer_capacity, 5000u);
  EXPECT_EQ(c.learner.batch_size, 16);
  EXPECT_EQ(c.learner.gamma, 0.95);
  EXPECT_EQ(c.learner.hidden_layers, (std::vector<int>{200, 400, 800}));
  EXPECT_EQ(c.episodes, 150);
  EXPECT_EQ(c.final_window, 20);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  std::istringstream unknown("L = 2\nbogus = 1\n");
  EXPECT_THROW(ParseConfig(unknown), std::invalid_argument);
  std::istringstream bad_int("K = two\n");
  EXPECT_THROW(ParseConfig(bad_int), std::invalid_argument);
  std::istringstream no_eq("L 2\n");
  EXPECT_THROW(ParseConfig(no_eq), std::invalid_argument);
  std::istringstream bad_enum("fading_redraw = sometimes\n");
  EXPECT_THROW(ParseConfig(bad_enum), std::invalid_argument);
  EXPECT_THROW(LoadConfig("/nonexistent/iab.toml"), std::runtime_error);
}

TEST(Config, ValidationNamesTheProblem) {
  ExperimentConfig c;
  c.topology.users_per_bs = 5;
  try {
    ValidateConfig(c);
    FAIL() << "K > N accepted";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("exceeds num_subchannels"), std::string::npos);
  }
  c = {};
  c.env.iab_levels = 1;
  EXPECT_THROW(ValidateConfig(c), std::invalid_argument);
  c = {};
  c.episodes = 0;
  EXPECT_THROW(ValidateConfig(c), std::invalid_argument);
  c = {};
  c.exploration.end = 2.0;
  EXPECT_THROW(ValidateConfig(c), std::invalid_argument);
}

TEST(Config, WriteThenParseRoundTrips) {
  ExperimentConfig c = TinyConfig();
  c.policy = PolicyKind::kRandom;
  c.env.episode.fading_redraw = FadingRedraw::kPerStep;
  c.exploration.decay = 0.995;
  std::stringstream s;
  WriteConfig(s, c);
  const ExperimentConfig back = ParseConfig(s);
  std::stringstream again;
  WriteConfig(again, back);
  EXPECT_EQ(s.str(), again.str());
  EXPECT_EQ(back.learner.hidden_layers, c.learner.hidden_layers);
  EXPECT_EQ(back.policy, PolicyKind::kRandom);
}

TEST(MetricsCsv, EmptyIsHeaderOnly) {
  std::ostringstream out;
  WriteMetricsCsv(out, std::vector<EpisodeMetrics>{});
  EXPECT_EQ(out.str(), "episode,mean_rate_bps_hz,mean_reward,penalties,epsilon,seconds\n");
}

TEST(MetricsCsv, RowsRoundTripExactly) {
  const std::vector<EpisodeMetrics> m{
      {0, 1.0 / 3.0, -499.123456789012, 97, 0.9056978449586677, 0.0},
      {1, 2.5e-17, 0.1, 0, 0.05, 1.25},
      {2, 1e300, -0.0, 5, 1.0, 3.0}};
  std::stringstream s;
  WriteMetricsCsv(s, m);
  int lines = 0;
  for (char ch : s.str()) lines += ch == '\n';
  EXPECT_EQ(lines, 4);
  EXPECT_EQ(ReadMetricsCsv(s), m);
}

TEST(MetricsCsv, UnwritablePathThrows) {
  EXPECT_THROW(WriteMetricsCsv(std::filesystem::path("/nonexistent/dir/m.csv"), std::vector<EpisodeMetrics>{}),
               std::runtime_error);
  std::istringstream bad("a,b,c\n");
  EXPECT_THROW(ReadMetricsCsv(bad), std::runtime_error);
}

TEST(Windows, FirstAndFinalMeans) {
  std::vector<EpisodeMetrics> m(6);
  for (int i = 0; i < 6; ++i) m[i].mean_rate = i;
  EXPECT_DOUBLE_EQ(FirstWindowMean(m, 2), 0.5);
  EXPECT_DOUBLE_EQ(FinalWindowMean(m, 2), 4.5);
  EXPECT_DOUBLE_EQ(FinalWindowMean(m, 100), 2.5);
  EXPECT_THROW(FinalWindowMean({}, 2), std::invalid_argument);
}

TEST(Trainer, RandomPolicyHasNoLearnerAndIsReproducible) {
  ExperimentConfig c = TinyConfig();
  c.policy = PolicyKind::kRandom;
  c.episodes = 2;
  Trainer t(c);
  EXPECT_EQ(t.roster(), nullptr);
  const auto a = t.Run();
  const auto b = RunExperiment(c);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a, b);
  for (const auto& m : a) {
    EXPECT_EQ(m.epsilon, 1.0);
    EXPECT_LE(m.penalties, c.env.episode.steps_per_episode);
  }
}

TEST(Trainer, LearningRunIsDeterministicPerSeed) {
  const ExperimentConfig c = TinyConfig();
  const auto a = RunExperiment(c);
  const auto b = RunExperiment(c);
  EXPECT_EQ(a, b);
  ExperimentConfig other = c;
  other.seed = 2;
  EXPECT_NE(RunExperiment(other), a);
}

TEST(Trainer, EpsilonFollowsScheduleAcrossEpisodes) {
  ExperimentConfig c = TinyConfig();
  Trainer t(c);
  const auto m = t.Run();
  ASSERT_EQ(m.size(), 3u);
  const int steps = c.env.episode.steps_per_episode;
  for (int e = 0; e < 3; ++e) {
    EXPECT_DOUBLE_EQ(m[e].epsilon, c.exploration.Epsilon((e + 1) * steps - 1));
    EXPECT_EQ(m[e].episode, e);
  }
  EXPECT_EQ(t.episodes_run(), 3);
  ASSERT_NE(t.roster(), nullptr);
  EXPECT_GT((*t.roster())[0].train_steps(), 0);
}

TEST(Trainer, WallClockOnlyWhenAsked) {
  ExperimentConfig c = TinyConfig();
  c.episodes = 1;
  EXPECT_EQ(RunExperiment(c)[0].seconds, 0.0);
  c.record_wall_clock = true;
  EXPECT_GT(RunExperiment(c)[0].seconds, 0.0);
}

TEST(Trainer, GreedyEvaluationDoesNotLearn) {
  Trainer t(TinyConfig());
  t.Run();
  const nn::QNetwork before = (*t.roster())[0].online();
  const GreedyResult g = t.GreedyEvaluate(10, 77);
  EXPECT_TRUE((*t.roster())[0].online() == before);
  EXPECT_EQ(g.final_codes.size(), 3u);
  EXPECT_GE(g.mean_sum_rate, 0.0);
  EXPECT_LE(g.mean_feasible_sum_rate, g.mean_sum_rate);
  EXPECT_THROW(t.GreedyEvaluate(0, 1), std::invalid_argument);
}

TEST(ComparePolicies, OneRowPerPolicyAndRandomRatioIsOne) {
  const auto rows = ComparePolicies(TinyConfig());
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].policy, PolicyKind::kSapaDdqn);
  EXPECT_EQ(rows[1].policy, PolicyKind::kDqn);
  EXPECT_EQ(rows[2].policy, PolicyKind::kRandom);
  EXPECT_DOUBLE_EQ(rows[2].ratio_vs_random, 1.0);
  std::ostringstream out;
  WriteComparisonCsv(out, rows);
  EXPECT_EQ(out.str().rfind("policy,first_window_rate_bps_hz,final_window_rate_bps_hz,ratio_vs_random\nsapa_ddqn,", 0), 0u);
}

}  // namespace
}  // namespace iab
