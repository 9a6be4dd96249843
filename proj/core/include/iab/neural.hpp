#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace iab::nn {

struct DenseLayer {
  Eigen::MatrixXd weights;  // out x in
  Eigen::VectorXd bias;
};

// Fully connected Q-approximator: rectifier on hidden layers, identity on the
// output layer, one output per action code.
class QNetwork {
 public:
  QNetwork() = default;
  // Weights and biases ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
  QNetwork(std::vector<int> layer_sizes, std::uint64_t seed);

  static QNetwork Zeros(std::vector<int> layer_sizes);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  std::size_t num_parameters() const;

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  Eigen::VectorXd Forward(std::span<const double> state) const;
  // One sample per column.
  Eigen::MatrixXd Forward(const Eigen::MatrixXd& inputs) const;

  friend bool operator==(const QNetwork& a, const QNetwork& b);

 private:
  std::vector<int> sizes_;
  std::vector<DenseLayer> layers_;
};

struct HuberParams {
  double delta = 1.0;
};

struct HuberValue {
  double loss = 0.0;
  double grad = 0.0;  // d loss / d residual
};

// 0.5 r^2 for |r| < delta, delta (|r| - delta / 2) otherwise.
HuberValue Huber(double residual, double delta = 1.0);

struct TrainingSample {
  std::span<const double> state;
  int action = 0;
  double target = 0.0;
};

struct Gradients {
  std::vector<DenseLayer> layers;
  double loss = 0.0;
};

// Gradient of the mean Huber loss of (target - Q(state)[action]) over the
// batch. Samples that share a state are propagated through the network
// together, which is exact because backpropagation is linear in the output
// gradient.
Gradients Backward(const QNetwork& net, std::span<const TrainingSample> batch,
                   HuberParams huber = {});

// Mean Huber loss only; used by gradient checks.
double BatchLoss(const QNetwork& net, std::span<const TrainingSample> batch,
                 HuberParams huber = {});

struct RmsPropParams {
  double learning_rate = 1e-3;
  double decay = 0.99;
  double epsilon = 1e-8;
};

// v <- rho v + (1 - rho) g^2;  theta <- theta - lr g / sqrt(v + eps).
class RmsProp {
 public:
  RmsProp() = default;
  RmsProp(const QNetwork& net, RmsPropParams params);

  void Step(QNetwork& net, const Gradients& grads);

  const RmsPropParams& params() const { return params_; }
  const std::vector<DenseLayer>& mean_square() const { return mean_square_; }

 private:
  RmsPropParams params_;
  std::vector<DenseLayer> mean_square_;
};

// Deep copy; provided for symmetry with SyncTarget.
inline QNetwork CloneWeights(const QNetwork& src) { return src; }
void SyncTarget(QNetwork& target, const QNetwork& online);

// Text checkpoint:
//   qnetwork 1
//   layers <count> <size_0> ... <size_n>
//   then per layer: weights row-major (one row per line), then the bias line.
// Numbers use the shortest round-trip representation.
void SaveWeights(std::ostream& out, const QNetwork& net);
QNetwork LoadWeights(std::istream& in);

}  // namespace iab::nn
