#include "gradient_check.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "iab/neural.hpp"
#include "iab/random.hpp"

namespace iab::testing {

double MaxRelativeGradientError(std::uint64_t seed) {
  Rng rng = MakeRng(seed);
  std::uniform_int_distribution<int> width(2, 6);
  std::vector<int> sizes{width(rng)};
  const int hidden = 1 + static_cast<int>(seed % 3);
  for (int i = 0; i < hidden; ++i) sizes.push_back(width(rng));
  sizes.push_back(width(rng));
  nn::QNetwork net(sizes, seed);

  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> action(0, sizes.back() - 1);
  std::vector<std::vector<double>> states(6, std::vector<double>(sizes.front()));
  for (auto& s : states) {
    for (auto& v : s) v = normal(rng);
  }
  std::vector<nn::TrainingSample> batch;
  for (int i = 0; i < 8; ++i) {
    // Reuse some states so grouped propagation is exercised too.
    const auto& s = states[i % states.size()];
    const double q = net.Forward(s)(0);
    batch.push_back({s, action(rng), q + normal(rng) * (i % 2 ? 0.3 : 3.0)});
  }

  const nn::Gradients g = nn::Backward(net, batch);
  const double h = 1e-5;
  double worst = 0.0;
  auto check = [&](double& param, double analytic) {
    const double saved = param;
    param = saved + h;
    const double up = nn::BatchLoss(net, batch);
    param = saved - h;
    const double down = nn::BatchLoss(net, batch);
    param = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
    worst = std::max(worst, std::abs(analytic - numeric) / denom);
  };
  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    auto& layer = net.layers()[i];
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) check(layer.weights(r, c), g.layers[i].weights(r, c));
      check(layer.bias(r), g.layers[i].bias(r));
    }
  }
  return worst;
}

}  // namespace iab::testing
