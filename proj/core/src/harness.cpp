#include "iab/harness.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace iab {
namespace {

std::string FormatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class ConfigValue {
 public:
  ConfigValue(std::string key, std::string raw) : key_(std::move(key)), raw_(std::move(raw)) {}

  std::string String() const {
    if (raw_.size() >= 2 && (raw_.front() == '"' || raw_.front() == '\'') &&
        raw_.back() == raw_.front()) {
      return raw_.substr(1, raw_.size() - 2);
    }
    return raw_;
  }

  double Double() const { return ParseDouble(raw_); }

  long long Int() const {
    long long v = 0;
    const std::string s = Trim(raw_);
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) Fail("an integer");
    return v;
  }

  bool Bool() const {
    if (raw_ == "true") return true;
    if (raw_ == "false") return false;
    Fail("true or false");
  }

  std::vector<double> DoubleArray() const {
    if (raw_.size() < 2 || raw_.front() != '[' || raw_.back() != ']') Fail("an array like [1, 2]");
    std::vector<double> out;
    std::stringstream ss(raw_.substr(1, raw_.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = Trim(item);
      if (!item.empty()) out.push_back(ParseDouble(item));
    }
    return out;
  }

 private:
  double ParseDouble(const std::string& text) const {
    const std::string s = Trim(text);
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) Fail("a number");
    return v;
  }

  [[noreturn]] void Fail(const std::string& what) const {
    throw std::invalid_argument("config key '" + key_ + "': expected " + what + ", got '" + raw_ + "'");
  }

  std::string key_;
  std::string raw_;
};

using Setter = std::function<void(ExperimentConfig&, const ConfigValue&)>;

const std::map<std::string, Setter>& Setters() {
  static const std::map<std::string, Setter> setters = [] {
    std::map<std::string, Setter> m;
    auto i = [](auto member) {
      return [member](ExperimentConfig& c, const ConfigValue& v) {
        member(c) = static_cast<std::remove_reference_t<decltype(member(c))>>(v.Int());
      };
    };
    auto d = [](auto member) {
      return [member](ExperimentConfig& c, const ConfigValue& v) { member(c) = v.Double(); };
    };
    auto b = [](auto member) {
      return [member](ExperimentConfig& c, const ConfigValue& v) { member(c) = v.Bool(); };
    };

    m["num_iab"] = i([](ExperimentConfig& c) -> int& { return c.topology.num_iab; });
    m["users_per_bs"] = i([](ExperimentConfig& c) -> int& { return c.topology.users_per_bs; });
    m["num_subchannels"] = i([](ExperimentConfig& c) -> int& { return c.env.fading.num_subchannels; });
    m["donor_levels"] = i([](ExperimentConfig& c) -> int& { return c.env.donor_levels; });
    m["iab_levels"] = i([](ExperimentConfig& c) -> int& { return c.env.iab_levels; });
    m["radius_m"] = d([](ExperimentConfig& c) -> double& { return c.topology.radius_m; });
    m["user_ring_m"] = [](ExperimentConfig& c, const ConfigValue& v) {
      const auto ring = v.DoubleArray();
      if (ring.size() != 2) throw std::invalid_argument("config key 'user_ring_m': expected [min, max]");
      c.topology.user_ring = {ring[0], ring[1]};
    };
    m["max_redraws"] = i([](ExperimentConfig& c) -> int& { return c.topology.max_redraws; });
    m["rate_threshold"] = d([](ExperimentConfig& c) -> double& { return c.env.episode.rate_threshold; });
    m["episodes"] = i([](ExperimentConfig& c) -> int& { return c.episodes; });
    m["steps_per_episode"] = i([](ExperimentConfig& c) -> int& { return c.env.episode.steps_per_episode; });
    m["perturb_users"] = b([](ExperimentConfig& c) -> bool& { return c.env.episode.perturb_users; });
    m["perturb_radius_m"] = d([](ExperimentConfig& c) -> double& { return c.env.perturbation.max_step_radius_m; });
    m["fading_redraw"] = [](ExperimentConfig& c, const ConfigValue& v) {
      const std::string s = v.String();
      if (s == "per_episode") c.env.episode.fading_redraw = FadingRedraw::kPerEpisode;
      else if (s == "per_step") c.env.episode.fading_redraw = FadingRedraw::kPerStep;
      else if (s == "frozen") c.env.episode.fading_redraw = FadingRedraw::kFrozen;
      else throw std::invalid_argument("config key 'fading_redraw': expected per_episode, per_step or frozen");
    };
    m["policy"] = [](ExperimentConfig& c, const ConfigValue& v) { c.policy = ParsePolicy(v.String()); };
    m["seed"] = [](ExperimentConfig& c, const ConfigValue& v) {
      const long long s = v.Int();
      if (s < 0) throw std::invalid_argument("config key 'seed': must be >= 0");
      c.seed = static_cast<std::uint64_t>(s);
    };
    m["final_window"] = i([](ExperimentConfig& c) -> int& { return c.final_window; });
    m["record_wall_clock"] = b([](ExperimentConfig& c) -> bool& { return c.record_wall_clock; });

    m["donor_power_dbm"] = d([](ExperimentConfig& c) -> double& { return c.env.donor_power_dbm; });
    m["iab_power_dbm"] = d([](ExperimentConfig& c) -> double& { return c.env.iab_power_dbm; });
    m["self_interference_db"] = [](ExperimentConfig& c, const ConfigValue& v) {
      c.env.self_interference = std::pow(10.0, v.Double() / 10.0);
    };
    m["divide_backhaul"] = b([](ExperimentConfig& c) -> bool& { return c.env.divide_backhaul; });
    m["penalty"] = d([](ExperimentConfig& c) -> double& { return c.env.penalty; });
    m["penalty_trigger"] = [](ExperimentConfig& c, const ConfigValue& v) {
      const std::string s = v.String();
      if (s == "violation") c.env.penalty_trigger = PenaltyTrigger::kConstraintViolation;
      else if (s == "below_threshold") c.env.penalty_trigger = PenaltyTrigger::kUserBelowThreshold;
      else throw std::invalid_argument("config key 'penalty_trigger': expected violation or below_threshold");
    };
    m["action_mode"] = [](ExperimentConfig& c, const ConfigValue& v) {
      const std::string s = v.String();
      if (s == "joint") c.env.action_mode = ActionMode::kJoint;
      else if (s == "single_link") c.env.action_mode = ActionMode::kSingleLink;
      else throw std::invalid_argument("config key 'action_mode': expected joint or single_link");
    };

    m["bandwidth_hz"] = d([](ExperimentConfig& c) -> double& { return c.env.fading.bandwidth_hz; });
    m["noise_psd_dbm_per_hz"] = d([](ExperimentConfig& c) -> double& { return c.env.fading.noise_psd_dbm_per_hz; });
    m["noise_figure_db"] = d([](ExperimentConfig& c) -> double& { return c.env.fading.noise_figure_db; });
    m["shadowing_sigma_db"] = d([](ExperimentConfig& c) -> double& { return c.env.fading.shadowing_sigma_db; });
    m["deterministic_fading"] = b([](ExperimentConfig& c) -> bool& { return c.env.fading.deterministic; });
    m["donor_pathloss"] = [](ExperimentConfig& c, const ConfigValue& v) {
      const auto p = v.DoubleArray();
      if (p.size() != 2) throw std::invalid_argument("config key 'donor_pathloss': expected [intercept_db, slope]");
      c.env.fading.donor_pathloss = {p[0], p[1]};
    };
    m["iab_pathloss"] = [](ExperimentConfig& c, const ConfigValue& v) {
      const auto p = v.DoubleArray();
      if (p.size() != 2) throw std::invalid_argument("config key 'iab_pathloss': expected [intercept_db, slope]");
      c.env.fading.iab_pathloss = {p[0], p[1]};
    };

    m["hidden_layers"] = [](ExperimentConfig& c, const ConfigValue& v) {
      c.learner.hidden_layers.clear();
      for (double x : v.DoubleArray()) {
        if (x != std::floor(x) || x < 1) throw std::invalid_argument("config key 'hidden_layers': sizes must be positive integers");
        c.learner.hidden_layers.push_back(static_cast<int>(x));
      }
    };
    m["learning_rate"] = d([](ExperimentConfig& c) -> double& { return c.learner.optimizer.learning_rate; });
    m["rmsprop_decay"] = d([](ExperimentConfig& c) -> double& { return c.learner.optimizer.decay; });
    m["rmsprop_epsilon"] = d([](ExperimentConfig& c) -> double& { return c.learner.optimizer.epsilon; });
    m["huber_delta"] = d([](ExperimentConfig& c) -> double& { return c.learner.huber.delta; });
    m["gamma"] = d([](ExperimentConfig& c) -> double& { return c.learner.gamma; });
    m["buffer_capacity"] = i([](ExperimentConfig& c) -> std::size_t& { return c.learner.buffer_capacity; });
    m["batch_size"] = i([](ExperimentConfig& c) -> int& { return c.learner.batch_size; });
    m["target_sync_period"] = i([](ExperimentConfig& c) -> int& { return c.learner.target_sync_period; });
    m["eps_start"] = d([](ExperimentConfig& c) -> double& { return c.exploration.start; });
    m["eps_end"] = d([](ExperimentConfig& c) -> double& { return c.exploration.end; });
    m["eps_decay"] = d([](ExperimentConfig& c) -> double& { return c.exploration.decay; });

    // Short aliases in the usual notation of the system model.
    m["L"] = m["num_iab"];
    m["K"] = m["users_per_bs"];
    m["N"] = m["num_subchannels"];
    m["T1"] = m["donor_levels"];
    m["T2"] = m["iab_levels"];
    m["R_th"] = m["rate_threshold"];
    return m;
  }();
  return setters;
}

const char* RedrawName(FadingRedraw r) {
  switch (r) {
    case FadingRedraw::kPerEpisode: return "per_episode";
    case FadingRedraw::kPerStep: return "per_step";
    case FadingRedraw::kFrozen: return "frozen";
  }
  return "per_episode";
}

std::uint64_t EpisodeSeed(std::uint64_t seed, int episode) {
  return MixSeed(MixSeed(seed, streams::kEpisode), static_cast<std::uint64_t>(episode));
}

}  // namespace

std::string PolicyName(PolicyKind p) {
  switch (p) {
    case PolicyKind::kSapaDdqn: return "sapa_ddqn";
    case PolicyKind::kDqn: return "dqn";
    case PolicyKind::kRandom: return "random";
  }
  return "unknown";
}

PolicyKind ParsePolicy(const std::string& name) {
  if (name == "sapa_ddqn" || name == "ddqn") return PolicyKind::kSapaDdqn;
  if (name == "dqn") return PolicyKind::kDqn;
  if (name == "random") return PolicyKind::kRandom;
  throw std::invalid_argument("unknown policy '" + name + "' (expected ddqn, dqn or random)");
}

void ValidateConfig(const ExperimentConfig& c) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  const int L = c.topology.num_iab;
  const int K = c.topology.users_per_bs;
  const int N = c.env.fading.num_subchannels;
  require(L >= 1, "num_iab (L) must be >= 1");
  require(K >= 1, "users_per_bs (K) must be >= 1");
  require(N >= 1, "num_subchannels (N) must be >= 1");
  if (c.env.action_mode == ActionMode::kJoint) {
    require(K <= N, "users_per_bs (K) = " + std::to_string(K) + " exceeds num_subchannels (N) = " +
                        std::to_string(N) + "; raise N or lower K");
    require(L <= N, "num_iab (L) = " + std::to_string(L) + " exceeds num_subchannels (N) = " +
                        std::to_string(N) + "; the donor backhaul agent needs one subchannel per IAB node");
  }
  require(c.env.donor_levels >= 2, "donor_levels (T1) must be >= 2");
  require(c.env.iab_levels >= 2, "iab_levels (T2) must be >= 2");
  require(c.topology.radius_m > 0.0, "radius_m must be > 0");
  require(c.topology.user_ring.min_m > 0.0 && c.topology.user_ring.min_m < c.topology.user_ring.max_m,
          "user_ring_m must satisfy 0 < min < max");
  require(c.episodes >= 1, "episodes must be >= 1");
  require(c.env.episode.steps_per_episode >= 1, "steps_per_episode must be >= 1");
  require(c.final_window >= 1, "final_window must be >= 1");
  require(c.env.perturbation.max_step_radius_m >= 0.0, "perturb_radius_m must be >= 0");
  require(c.env.self_interference >= 0.0 && c.env.self_interference <= 1.0,
          "self-interference factor must be in [0, 1]");
  require(c.env.fading.bandwidth_hz > 0.0, "bandwidth_hz must be > 0");
  require(c.learner.gamma >= 0.0 && c.learner.gamma <= 1.0, "gamma must be in [0, 1]");
  require(c.learner.batch_size >= 1, "batch_size must be >= 1");
  require(c.learner.buffer_capacity >= 1, "buffer_capacity must be >= 1");
  require(c.learner.target_sync_period >= 1, "target_sync_period must be >= 1");
  require(c.learner.huber.delta > 0.0, "huber_delta must be > 0");
  require(c.learner.optimizer.learning_rate >= 0.0, "learning_rate must be >= 0");
  require(c.learner.optimizer.decay > 0.0 && c.learner.optimizer.decay < 1.0, "rmsprop_decay must be in (0, 1)");
  require(c.learner.optimizer.epsilon > 0.0, "rmsprop_epsilon must be > 0");
  c.exploration.Validate();
}

ExperimentConfig ParseConfig(std::istream& in, ExperimentConfig base) {
  const auto& setters = Setters();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    auto it = setters.find(key);
    if (it == setters.end()) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    it->second(base, ConfigValue(key, value));
  }
  return base;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path.string());
  return ParseConfig(in, std::move(base));
}

void WriteConfig(std::ostream& out, const ExperimentConfig& c) {
  auto f = [](double v) { return FormatDouble(v); };
  out << "num_iab = " << c.topology.num_iab << '\n'
      << "users_per_bs = " << c.topology.users_per_bs << '\n'
      << "num_subchannels = " << c.env.fading.num_subchannels << '\n'
      << "donor_levels = " << c.env.donor_levels << '\n'
      << "iab_levels = " << c.env.iab_levels << '\n'
      << "radius_m = " << f(c.topology.radius_m) << '\n'
      << "user_ring_m = [" << f(c.topology.user_ring.min_m) << ", " << f(c.topology.user_ring.max_m) << "]\n"
      << "rate_threshold = " << f(c.env.episode.rate_threshold) << '\n'
      << "episodes = " << c.episodes << '\n'
      << "steps_per_episode = " << c.env.episode.steps_per_episode << '\n'
      << "perturb_users = " << (c.env.episode.perturb_users ? "true" : "false") << '\n'
      << "perturb_radius_m = " << f(c.env.perturbation.max_step_radius_m) << '\n'
      << "fading_redraw = \"" << RedrawName(c.env.episode.fading_redraw) << "\"\n"
      << "policy = \"" << PolicyName(c.policy) << "\"\n"
      << "seed = " << c.seed << '\n'
      << "final_window = " << c.final_window << '\n'
      << "donor_power_dbm = " << f(c.env.donor_power_dbm) << '\n'
      << "iab_power_dbm = " << f(c.env.iab_power_dbm) << '\n'
      << "self_interference_db = " << f(10.0 * std::log10(c.env.self_interference)) << '\n'
      << "penalty = " << f(c.env.penalty) << '\n'
      << "shadowing_sigma_db = " << f(c.env.fading.shadowing_sigma_db) << '\n'
      << "bandwidth_hz = " << f(c.env.fading.bandwidth_hz) << '\n'
      << "learning_rate = " << f(c.learner.optimizer.learning_rate) << '\n'
      << "gamma = " << f(c.learner.gamma) << '\n'
      << "buffer_capacity = " << c.learner.buffer_capacity << '\n'
      << "batch_size = " << c.learner.batch_size << '\n'
      << "target_sync_period = " << c.learner.target_sync_period << '\n'
      << "eps_start = " << f(c.exploration.start) << '\n'
      << "eps_end = " << f(c.exploration.end) << '\n'
      << "eps_decay = " << f(c.exploration.decay) << '\n';
  out << "hidden_layers = [";
  for (std::size_t i = 0; i < c.learner.hidden_layers.size(); ++i) {
    out << (i ? ", " : "") << c.learner.hidden_layers[i];
  }
  out << "]\n";
}

IabEnv MakeEnvironment(const ExperimentConfig& cfg) {
  ValidateConfig(cfg);
  return IabEnv(cfg.env, BuildTopology(cfg.topology, cfg.seed));
}

Trainer::Trainer(const ExperimentConfig& cfg) : Trainer(cfg, MakeEnvironment(cfg)) {}

Trainer::Trainer(const ExperimentConfig& cfg, IabEnv env)
    : cfg_(cfg),
      env_(std::move(env)),
      policy_rng_(MakeRng(cfg.seed, streams::kPolicy)),
      replay_rng_(MakeRng(cfg.seed, streams::kReplay)) {
  ValidateConfig(cfg_);
  if (cfg_.policy != PolicyKind::kRandom) {
    LearnerConfig learner = cfg_.learner;
    learner.target_rule =
        cfg_.policy == PolicyKind::kSapaDdqn ? TargetRule::kDouble : TargetRule::kStandard;
    roster_.emplace(env_, learner, MixSeed(cfg_.seed, streams::kNetworkInit));
  }
}

std::vector<int> Trainer::ChooseActions(const std::vector<AgentState>& states, double epsilon) {
  std::vector<int> codes(env_.num_agents());
  for (int a = 0; a < env_.num_agents(); ++a) {
    if (roster_) {
      codes[a] = (*roster_)[a].Act(states[a].Features(), epsilon, policy_rng_);
    } else {
      codes[a] = RandomPolicy(env_.agents()[a].space.size(), policy_rng_);
    }
  }
  return codes;
}

EpisodeMetrics Trainer::RunEpisode() {
  const auto start = std::chrono::steady_clock::now();
  EpisodeMetrics m;
  m.episode = episode_;
  std::vector<AgentState> states = env_.Reset(EpisodeSeed(cfg_.seed, episode_));
  const int steps = cfg_.env.episode.steps_per_episode;
  double epsilon = 1.0;
  for (int t = 0; t < steps; ++t) {
    epsilon = roster_ ? cfg_.exploration.Epsilon(global_step_) : 1.0;
    const std::vector<int> codes = ChooseActions(states, epsilon);
    StepResult res = env_.Step(codes);
    m.mean_rate += res.reward.raw_avg_rate;
    m.mean_reward += res.reward.reward;
    m.penalties += res.reward.penalty_applied ? 1 : 0;
    if (roster_) {
      for (int a = 0; a < env_.num_agents(); ++a) {
        DeepQAgent& agent = (*roster_)[a];
        agent.Remember({states[a].Features(), codes[a], res.reward.reward, res.states[a].Features()});
        agent.TrainStep(replay_rng_);
      }
    }
    states = std::move(res.states);
    ++global_step_;
  }
  m.mean_rate /= steps;
  m.mean_reward /= steps;
  m.epsilon = epsilon;
  if (cfg_.record_wall_clock) {
    m.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  ++episode_;
  return m;
}

std::vector<EpisodeMetrics> Trainer::Run() {
  std::vector<EpisodeMetrics> out;
  out.reserve(cfg_.episodes);
  while (episode_ < cfg_.episodes) out.push_back(RunEpisode());
  return out;
}

GreedyResult Trainer::GreedyEvaluate(int steps, std::uint64_t seed) {
  if (steps < 1) throw std::invalid_argument("greedy evaluation needs at least one step");
  GreedyResult r;
  std::vector<AgentState> states = env_.Reset(seed);
  for (int t = 0; t < steps; ++t) {
    const std::vector<int> codes = ChooseActions(states, 0.0);
    StepResult res = env_.Step(codes);
    r.mean_sum_rate += res.rates.sum_rate;
    if (res.violations.empty()) r.mean_feasible_sum_rate += res.rates.sum_rate;
    r.final_sum_rate = res.rates.sum_rate;
    r.penalties += res.reward.penalty_applied ? 1 : 0;
    r.final_codes = codes;
    states = std::move(res.states);
  }
  r.mean_sum_rate /= steps;
  r.mean_feasible_sum_rate /= steps;
  return r;
}

std::vector<EpisodeMetrics> RunExperiment(const ExperimentConfig& cfg, std::ostream* trace) {
  Trainer trainer(cfg);
  trainer.set_trace(trace);
  return trainer.Run();
}

double FinalWindowMean(std::span<const EpisodeMetrics> metrics, int window) {
  if (metrics.empty() || window < 1) throw std::invalid_argument("need metrics and a positive window");
  const std::size_t w = std::min<std::size_t>(window, metrics.size());
  double s = 0.0;
  for (std::size_t i = metrics.size() - w; i < metrics.size(); ++i) s += metrics[i].mean_rate;
  return s / static_cast<double>(w);
}

double FirstWindowMean(std::span<const EpisodeMetrics> metrics, int window) {
  if (metrics.empty() || window < 1) throw std::invalid_argument("need metrics and a positive window");
  const std::size_t w = std::min<std::size_t>(window, metrics.size());
  double s = 0.0;
  for (std::size_t i = 0; i < w; ++i) s += metrics[i].mean_rate;
  return s / static_cast<double>(w);
}

std::vector<PolicySummary> ComparePolicies(const ExperimentConfig& cfg) {
  std::vector<PolicySummary> rows;
  for (PolicyKind p : {PolicyKind::kSapaDdqn, PolicyKind::kDqn, PolicyKind::kRandom}) {
    ExperimentConfig c = cfg;
    c.policy = p;
    const auto metrics = RunExperiment(c);
    rows.push_back({p, FirstWindowMean(metrics, 5), FinalWindowMean(metrics, cfg.final_window), 0.0});
  }
  const double random_rate = rows.back().final_window_rate;
  for (auto& r : rows) {
    r.ratio_vs_random = random_rate > 0.0 ? r.final_window_rate / random_rate : 0.0;
  }
  return rows;
}

void WriteMetricsCsv(std::ostream& out, std::span<const EpisodeMetrics> metrics) {
  out << "episode,mean_rate_bps_hz,mean_reward,penalties,epsilon,seconds\n";
  for (const auto& m : metrics) {
    out << m.episode << ',' << FormatDouble(m.mean_rate) << ',' << FormatDouble(m.mean_reward) << ','
        << m.penalties << ',' << FormatDouble(m.epsilon) << ',' << FormatDouble(m.seconds) << '\n';
  }
}

void WriteMetricsCsv(const std::filesystem::path& path, std::span<const EpisodeMetrics> metrics) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  WriteMetricsCsv(out, metrics);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::vector<EpisodeMetrics> ReadMetricsCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "episode,mean_rate_bps_hz,mean_reward,penalties,epsilon,seconds") {
    throw std::runtime_error("metrics CSV has an unexpected header");
  }
  std::vector<EpisodeMetrics> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) throw std::runtime_error("metrics CSV row has " + std::to_string(cells.size()) + " cells");
    auto num = [](const std::string& s, auto& v) {
      auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw std::runtime_error("bad number '" + s + "' in metrics CSV");
      }
    };
    EpisodeMetrics m;
    num(cells[0], m.episode);
    num(cells[1], m.mean_rate);
    num(cells[2], m.mean_reward);
    num(cells[3], m.penalties);
    num(cells[4], m.epsilon);
    num(cells[5], m.seconds);
    out.push_back(m);
  }
  return out;
}

void WriteComparisonCsv(std::ostream& out, std::span<const PolicySummary> rows) {
  out << "policy,first_window_rate_bps_hz,final_window_rate_bps_hz,ratio_vs_random\n";
  for (const auto& r : rows) {
    out << PolicyName(r.policy) << ',' << FormatDouble(r.first_window_rate) << ','
        << FormatDouble(r.final_window_rate) << ',' << FormatDouble(r.ratio_vs_random) << '\n';
  }
}

}  // namespace iab
