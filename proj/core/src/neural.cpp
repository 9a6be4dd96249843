#include "iab/neural.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

#include "iab/random.hpp"

namespace iab::nn {
namespace {

void CheckSizes(const std::vector<int>& sizes) {
  if (sizes.size() < 2) throw std::invalid_argument("network needs at least input and output layers");
  for (int s : sizes) {
    if (s < 1) throw std::invalid_argument("layer sizes must be >= 1");
  }
}

struct Activations {
  std::vector<Eigen::MatrixXd> pre;   // z per layer
  std::vector<Eigen::MatrixXd> post;  // a per layer, post[0] is the input
};

Activations ForwardTrace(const QNetwork& net, const Eigen::MatrixXd& inputs) {
  Activations act;
  const auto& layers = net.layers();
  act.post.push_back(inputs);
  for (std::size_t i = 0; i < layers.size(); ++i) {
    Eigen::MatrixXd z = layers[i].weights * act.post.back();
    z.colwise() += layers[i].bias;
    act.pre.push_back(z);
    if (i + 1 < layers.size()) {
      act.post.push_back(z.cwiseMax(0.0));
    } else {
      act.post.push_back(std::move(z));
    }
  }
  return act;
}

// Unique states as columns plus, per sample, the column it maps to.
struct GroupedBatch {
  Eigen::MatrixXd inputs;
  std::vector<int> column;
};

GroupedBatch Group(int input_size, std::span<const TrainingSample> batch) {
  std::map<std::vector<double>, int> index;
  std::vector<std::span<const double>> unique;
  GroupedBatch g;
  g.column.reserve(batch.size());
  for (const auto& s : batch) {
    if (static_cast<int>(s.state.size()) != input_size) {
      throw std::invalid_argument("sample state has the wrong dimension");
    }
    auto [it, inserted] =
        index.try_emplace(std::vector<double>(s.state.begin(), s.state.end()),
                          static_cast<int>(unique.size()));
    if (inserted) unique.push_back(s.state);
    g.column.push_back(it->second);
  }
  g.inputs.resize(input_size, static_cast<Eigen::Index>(unique.size()));
  for (std::size_t c = 0; c < unique.size(); ++c) {
    for (int r = 0; r < input_size; ++r) g.inputs(r, static_cast<Eigen::Index>(c)) = unique[c][r];
  }
  return g;
}

std::string FormatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double ParseDouble(std::istream& in) {
  std::string tok;
  if (!(in >> tok)) throw std::runtime_error("checkpoint truncated");
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    throw std::runtime_error("bad number '" + tok + "' in checkpoint");
  }
  return v;
}

}  // namespace

QNetwork::QNetwork(std::vector<int> layer_sizes, std::uint64_t seed) : sizes_(std::move(layer_sizes)) {
  CheckSizes(sizes_);
  Rng rng = MakeRng(seed, streams::kNetworkInit);
  for (std::size_t i = 0; i + 1 < sizes_.size(); ++i) {
    const int in = sizes_[i];
    const int out = sizes_[i + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> u(-bound, bound);
    DenseLayer layer{Eigen::MatrixXd(out, in), Eigen::VectorXd(out)};
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c) layer.weights(r, c) = u(rng);
    }
    for (int r = 0; r < out; ++r) layer.bias(r) = u(rng);
    layers_.push_back(std::move(layer));
  }
}

QNetwork QNetwork::Zeros(std::vector<int> layer_sizes) {
  CheckSizes(layer_sizes);
  QNetwork net;
  net.sizes_ = std::move(layer_sizes);
  for (std::size_t i = 0; i + 1 < net.sizes_.size(); ++i) {
    net.layers_.push_back({Eigen::MatrixXd::Zero(net.sizes_[i + 1], net.sizes_[i]),
                           Eigen::VectorXd::Zero(net.sizes_[i + 1])});
  }
  return net;
}

std::size_t QNetwork::num_parameters() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weights.size() + l.bias.size();
  return n;
}

Eigen::VectorXd QNetwork::Forward(std::span<const double> state) const {
  if (static_cast<int>(state.size()) != input_size()) {
    throw std::invalid_argument("state has dimension " + std::to_string(state.size()) +
                                ", network expects " + std::to_string(input_size()));
  }
  Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(state.data(), input_size());
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Eigen::VectorXd z = layers_[i].weights * a + layers_[i].bias;
    a = i + 1 < layers_.size() ? Eigen::VectorXd(z.cwiseMax(0.0)) : z;
  }
  return a;
}

Eigen::MatrixXd QNetwork::Forward(const Eigen::MatrixXd& inputs) const {
  if (inputs.rows() != input_size()) throw std::invalid_argument("input batch has wrong dimension");
  Eigen::MatrixXd a = inputs;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Eigen::MatrixXd z = layers_[i].weights * a;
    z.colwise() += layers_[i].bias;
    a = i + 1 < layers_.size() ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z;
  }
  return a;
}

bool operator==(const QNetwork& a, const QNetwork& b) {
  if (a.sizes_ != b.sizes_) return false;
  for (std::size_t i = 0; i < a.layers_.size(); ++i) {
    if (a.layers_[i].weights != b.layers_[i].weights || a.layers_[i].bias != b.layers_[i].bias) {
      return false;
    }
  }
  return true;
}

HuberValue Huber(double residual, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("Huber delta must be > 0");
  const double a = std::abs(residual);
  if (a < delta) return {0.5 * residual * residual, residual};
  return {delta * (a - 0.5 * delta), residual > 0.0 ? delta : -delta};
}

Gradients Backward(const QNetwork& net, std::span<const TrainingSample> batch, HuberParams huber) {
  if (batch.empty()) throw std::invalid_argument("Backward needs a non-empty batch");
  const GroupedBatch g = Group(net.input_size(), batch);
  const Activations act = ForwardTrace(net, g.inputs);
  const Eigen::MatrixXd& q = act.post.back();

  const double scale = 1.0 / static_cast<double>(batch.size());
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(q.rows(), q.cols());
  Gradients grads;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const int a = batch[i].action;
    if (a < 0 || a >= net.output_size()) throw std::out_of_range("sample action out of range");
    const int col = g.column[i];
    const HuberValue h = Huber(batch[i].target - q(a, col), huber.delta);
    grads.loss += h.loss * scale;
    // residual = y - Q, so dL/dQ = -dL/dresidual.
    delta(a, col) -= h.grad * scale;
  }

  const auto& layers = net.layers();
  grads.layers.resize(layers.size());
  for (std::size_t i = layers.size(); i-- > 0;) {
    grads.layers[i].weights.noalias() = delta * act.post[i].transpose();
    grads.layers[i].bias = delta.rowwise().sum();
    if (i > 0) {
      Eigen::MatrixXd back = layers[i].weights.transpose() * delta;
      delta = back.cwiseProduct((act.pre[i - 1].array() > 0.0).cast<double>().matrix());
    }
  }
  return grads;
}

double BatchLoss(const QNetwork& net, std::span<const TrainingSample> batch, HuberParams huber) {
  if (batch.empty()) throw std::invalid_argument("BatchLoss needs a non-empty batch");
  double loss = 0.0;
  for (const auto& s : batch) {
    const Eigen::VectorXd q = net.Forward(s.state);
    loss += Huber(s.target - q(s.action), huber.delta).loss;
  }
  return loss / static_cast<double>(batch.size());
}

RmsProp::RmsProp(const QNetwork& net, RmsPropParams params) : params_(params) {
  for (const auto& l : net.layers()) {
    mean_square_.push_back({Eigen::MatrixXd::Zero(l.weights.rows(), l.weights.cols()),
                            Eigen::VectorXd::Zero(l.bias.size())});
  }
}

void RmsProp::Step(QNetwork& net, const Gradients& grads) {
  auto& layers = net.layers();
  if (grads.layers.size() != layers.size() || mean_square_.size() != layers.size()) {
    throw std::invalid_argument("gradient shapes do not match the network");
  }
  const double rho = params_.decay;
  const double lr = params_.learning_rate;
  const double eps = params_.epsilon;
  auto update = [&](auto& param, auto& v, const auto& g) {
    if (param.rows() != g.rows() || param.cols() != g.cols()) {
      throw std::invalid_argument("gradient shapes do not match the network");
    }
    v.array() = rho * v.array() + (1.0 - rho) * g.array().square();
    param.array() -= lr * g.array() / (v.array() + eps).sqrt();
  };
  for (std::size_t i = 0; i < layers.size(); ++i) {
    update(layers[i].weights, mean_square_[i].weights, grads.layers[i].weights);
    update(layers[i].bias, mean_square_[i].bias, grads.layers[i].bias);
  }
}

void SyncTarget(QNetwork& target, const QNetwork& online) {
  if (!target.layer_sizes().empty() && target.layer_sizes() != online.layer_sizes()) {
    throw std::invalid_argument("target and online networks differ in shape");
  }
  target = online;
}

void SaveWeights(std::ostream& out, const QNetwork& net) {
  out << "qnetwork 1\n";
  out << "layers " << net.layer_sizes().size();
  for (int s : net.layer_sizes()) out << ' ' << s;
  out << '\n';
  for (const auto& l : net.layers()) {
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weights.cols(); ++c) {
        out << (c ? " " : "") << FormatDouble(l.weights(r, c));
      }
      out << '\n';
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) out << (r ? " " : "") << FormatDouble(l.bias(r));
    out << '\n';
  }
}

QNetwork LoadWeights(std::istream& in) {
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "qnetwork" || version != 1) {
    throw std::runtime_error("not a qnetwork v1 checkpoint");
  }
  std::size_t count = 0;
  if (!(in >> tag >> count) || tag != "layers" || count < 2) {
    throw std::runtime_error("checkpoint has a bad layer header");
  }
  std::vector<int> sizes(count);
  for (auto& s : sizes) {
    if (!(in >> s)) throw std::runtime_error("checkpoint has a bad layer header");
  }
  QNetwork net = QNetwork::Zeros(sizes);
  for (auto& l : net.layers()) {
    for (Eigen::Index r = 0; r < l.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weights.cols(); ++c) l.weights(r, c) = ParseDouble(in);
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias(r) = ParseDouble(in);
  }
  return net;
}

}  // namespace iab::nn
