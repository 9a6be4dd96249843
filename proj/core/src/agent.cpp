#include "iab/agent.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

namespace iab {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("replay buffer capacity must be >= 1");
}

void ReplayBuffer::Push(Experience e) {
  if (items_.size() == capacity_) items_.pop_front();
  items_.push_back(std::move(e));
}

std::vector<std::size_t> ReplayBuffer::SampleIndices(std::size_t batch, Rng& rng) const {
  if (items_.empty()) throw std::logic_error("cannot sample an empty replay buffer");
  std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
  std::vector<std::size_t> idx(batch);
  for (auto& i : idx) i = pick(rng);
  return idx;
}

double ExplorationSchedule::Epsilon(std::int64_t step) const {
  return std::max(end, start * std::pow(decay, static_cast<double>(step)));
}

void ExplorationSchedule::Validate() const {
  if (!(0.0 <= end && end <= start && start <= 1.0)) {
    throw std::invalid_argument("exploration needs 0 <= eps_end <= eps_start <= 1");
  }
  if (!(decay > 0.0 && decay <= 1.0)) throw std::invalid_argument("exploration decay must be in (0, 1]");
}

int ArgMax(const Eigen::VectorXd& values) {
  if (values.size() == 0) throw std::invalid_argument("ArgMax of an empty vector");
  int best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (values(i) > values(best)) best = static_cast<int>(i);
  }
  return best;
}

int RandomPolicy(int num_actions, Rng& rng) {
  if (num_actions < 1) throw std::invalid_argument("empty action space");
  return std::uniform_int_distribution<int>(0, num_actions - 1)(rng);
}

int SelectAction(const nn::QNetwork& online, std::span<const double> state, double epsilon,
                 Rng& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must be in [0, 1]");
  if (epsilon > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon) {
    return RandomPolicy(online.output_size(), rng);
  }
  return ArgMax(online.Forward(state));
}

double DdqnTarget(double reward, std::span<const double> next_state, const nn::QNetwork& online,
                  const nn::QNetwork& target, double gamma) {
  const int a = ArgMax(online.Forward(next_state));
  return reward + gamma * target.Forward(next_state)(a);
}

double DqnTarget(double reward, std::span<const double> next_state, const nn::QNetwork& target,
                 double gamma) {
  return reward + gamma * target.Forward(next_state).maxCoeff();
}

DeepQAgent::DeepQAgent(int state_size, int num_actions, const LearnerConfig& config,
                       std::uint64_t seed)
    : config_(config), buffer_(config.buffer_capacity) {
  if (config.batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (config.target_sync_period < 1) throw std::invalid_argument("target sync period must be >= 1");
  std::vector<int> sizes{state_size};
  sizes.insert(sizes.end(), config.hidden_layers.begin(), config.hidden_layers.end());
  sizes.push_back(num_actions);
  online_ = nn::QNetwork(sizes, seed);
  target_ = nn::CloneWeights(online_);
  optimizer_ = nn::RmsProp(online_, config.optimizer);
}

int DeepQAgent::Act(std::span<const double> state, double epsilon, Rng& rng) const {
  return SelectAction(online_, state, epsilon, rng);
}

std::vector<double> DeepQAgent::Targets(std::span<const Experience* const> batch) const {
  std::map<std::vector<double>, int> index;
  std::vector<const std::vector<double>*> unique;
  std::vector<int> column;
  for (const Experience* e : batch) {
    auto [it, inserted] = index.try_emplace(e->next_state, static_cast<int>(unique.size()));
    if (inserted) unique.push_back(&e->next_state);
    column.push_back(it->second);
  }
  Eigen::MatrixXd next(online_.input_size(), static_cast<Eigen::Index>(unique.size()));
  for (std::size_t c = 0; c < unique.size(); ++c) {
    if (static_cast<int>(unique[c]->size()) != online_.input_size()) {
      throw std::invalid_argument("experience state has the wrong dimension");
    }
    for (int r = 0; r < online_.input_size(); ++r) {
      next(r, static_cast<Eigen::Index>(c)) = (*unique[c])[r];
    }
  }
  const Eigen::MatrixXd q_target = target_.Forward(next);
  std::vector<double> bootstrap(unique.size());
  if (config_.target_rule == TargetRule::kDouble) {
    const Eigen::MatrixXd q_online = online_.Forward(next);
    for (std::size_t c = 0; c < unique.size(); ++c) {
      const auto col = static_cast<Eigen::Index>(c);
      bootstrap[c] = q_target(ArgMax(q_online.col(col)), col);
    }
  } else {
    for (std::size_t c = 0; c < unique.size(); ++c) {
      bootstrap[c] = q_target.col(static_cast<Eigen::Index>(c)).maxCoeff();
    }
  }
  std::vector<double> y(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    y[i] = batch[i]->reward + config_.gamma * bootstrap[column[i]];
  }
  return y;
}

std::optional<double> DeepQAgent::TrainStep(Rng& rng) {
  const auto batch_size = static_cast<std::size_t>(config_.batch_size);
  if (buffer_.size() < batch_size) return std::nullopt;

  std::vector<const Experience*> batch;
  for (std::size_t i : buffer_.SampleIndices(batch_size, rng)) batch.push_back(&buffer_.at(i));
  const std::vector<double> y = Targets(batch);

  std::vector<nn::TrainingSample> samples;
  samples.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    samples.push_back({batch[i]->state, batch[i]->action, y[i]});
  }
  const nn::Gradients grads = nn::Backward(online_, samples, config_.huber);
  optimizer_.Step(online_, grads);

  ++train_steps_;
  if (train_steps_ % config_.target_sync_period == 0) nn::SyncTarget(target_, online_);
  return grads.loss;
}

void DeepQAgent::LoadOnline(nn::QNetwork net) {
  if (net.layer_sizes() != online_.layer_sizes()) {
    throw std::invalid_argument("checkpoint shape does not match the agent");
  }
  online_ = std::move(net);
  target_ = online_;
  optimizer_ = nn::RmsProp(online_, config_.optimizer);
}

AgentRoster::AgentRoster(const IabEnv& env, const LearnerConfig& config, std::uint64_t seed) {
  for (int a = 0; a < env.num_agents(); ++a) {
    const AgentSpec& spec = env.agents()[a];
    ids_.push_back(spec.id);
    agents_.emplace_back(spec.state_size(), spec.space.size(), config, MixSeed(seed, a));
  }
}

void AgentRoster::Save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir / "roster.txt");
  if (!manifest) throw std::runtime_error("cannot write " + (dir / "roster.txt").string());
  manifest << "roster 1\n";
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    const std::string file = ids_[i].Name() + ".qnet";
    std::ofstream out(dir / file);
    if (!out) throw std::runtime_error("cannot write " + (dir / file).string());
    nn::SaveWeights(out, agents_[i].online());
    manifest << ids_[i].Name() << ' ' << file << '\n';
  }
}

void AgentRoster::Load(const std::filesystem::path& manifest_path) {
  std::ifstream manifest(manifest_path);
  if (!manifest) throw std::runtime_error("cannot read " + manifest_path.string());
  std::string tag;
  int version = 0;
  if (!(manifest >> tag >> version) || tag != "roster" || version != 1) {
    throw std::runtime_error(manifest_path.string() + " is not a roster manifest");
  }
  std::string name;
  std::string file;
  std::size_t loaded = 0;
  while (manifest >> name >> file) {
    auto it = std::find_if(ids_.begin(), ids_.end(), [&](const AgentId& id) { return id.Name() == name; });
    if (it == ids_.end()) throw std::runtime_error("manifest names unknown agent '" + name + "'");
    std::filesystem::path p = file;
    if (p.is_relative()) p = manifest_path.parent_path() / p;
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot read checkpoint " + p.string());
    agents_[static_cast<std::size_t>(it - ids_.begin())].LoadOnline(nn::LoadWeights(in));
    ++loaded;
  }
  if (loaded != agents_.size()) throw std::runtime_error("manifest does not cover every agent");
}

TabularQ::TabularQ(int num_states, int num_actions)
    : num_states_(num_states), num_actions_(num_actions) {
  if (num_states < 1 || num_actions < 1) throw std::invalid_argument("tabular Q needs states and actions");
  q_.assign(static_cast<std::size_t>(num_states) * num_actions, 0.0);
}

void TabularQ::Update(int s, int a, double reward, int next_s, double alpha, double gamma) {
  double best_next = at(next_s, 0);
  for (int b = 1; b < num_actions_; ++b) best_next = std::max(best_next, at(next_s, b));
  double& q = at(s, a);
  q += alpha * (reward + gamma * best_next - q);
}

OptimumResult ExhaustiveOptimum(const IabEnv& env, std::int64_t max_joint_actions) {
  std::int64_t total = 1;
  for (const auto& spec : env.agents()) {
    total *= spec.space.size();
    if (total > max_joint_actions) {
      throw std::invalid_argument("joint action space exceeds " + std::to_string(max_joint_actions));
    }
  }
  std::vector<int> codes(env.num_agents(), 0);
  OptimumResult best;
  bool found = false;
  for (std::int64_t joint = 0; joint < total; ++joint) {
    std::int64_t rem = joint;
    for (int a = env.num_agents() - 1; a >= 0; --a) {
      const int size = env.agents()[a].space.size();
      codes[a] = static_cast<int>(rem % size);
      rem /= size;
    }
    const Evaluation e = env.Evaluate(codes);
    ++best.evaluated;
    if (!e.violations.empty()) continue;
    if (!found || e.rates.sum_rate > best.sum_rate) {
      best.codes = codes;
      best.sum_rate = e.rates.sum_rate;
      found = true;
    }
  }
  if (!found) throw std::runtime_error("no constraint-clean joint action exists");
  return best;
}

}  // namespace iab
