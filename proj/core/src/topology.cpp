#include "iab/topology.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "iab/random.hpp"

namespace iab {
namespace {

std::string FormatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Position UniformInDisc(Rng& rng, double radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::sqrt(unit(rng));
  const double theta = 2.0 * std::numbers::pi * unit(rng);
  return {r * std::cos(theta), r * std::sin(theta)};
}

Position UniformInAnnulus(Rng& rng, Position center, const UserRing& ring) {
  std::uniform_real_distribution<double> area(ring.min_m * ring.min_m,
                                              ring.max_m * ring.max_m);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double r = std::sqrt(area(rng));
  const double theta = angle(rng);
  return {center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
}

}  // namespace

double Distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

NetworkTopology::NetworkTopology(double radius_m, std::vector<Position> bs_positions,
                                 std::vector<std::vector<Position>> user_anchors)
    : radius_m_(radius_m),
      bs_(std::move(bs_positions)),
      anchors_(std::move(user_anchors)),
      users_(anchors_) {
  if (bs_.size() < 2) throw std::invalid_argument("topology needs a donor and at least one IAB node");
  if (anchors_.size() != bs_.size()) {
    throw std::invalid_argument("topology needs one user list per base station");
  }
  const std::size_t k = anchors_.front().size();
  if (k == 0) throw std::invalid_argument("topology needs at least one user per base station");
  for (const auto& users : anchors_) {
    if (users.size() != k) throw std::invalid_argument("every base station must serve the same number of users");
  }
}

int NetworkTopology::serving_bs(int l, int k) const {
  (void)users_.at(l).at(k);
  return l;
}

int NetworkTopology::NearestBs(Position p) const {
  int best = 0;
  double best_d = Distance(p, bs_[0]);
  for (int l = 1; l < num_bs(); ++l) {
    const double d = Distance(p, bs_[l]);
    if (d < best_d) {
      best = l;
      best_d = d;
    }
  }
  return best;
}

NetworkTopology NetworkTopology::WithUserPositions(
    std::vector<std::vector<Position>> users) const {
  if (users.size() != anchors_.size()) throw std::invalid_argument("user position table has wrong shape");
  for (std::size_t l = 0; l < users.size(); ++l) {
    if (users[l].size() != anchors_[l].size()) throw std::invalid_argument("user position table has wrong shape");
  }
  NetworkTopology out = *this;
  out.users_ = std::move(users);
  return out;
}

NetworkTopology BuildTopology(const TopologyParams& params, std::uint64_t seed) {
  if (params.num_iab < 1) throw std::invalid_argument("L must be >= 1");
  if (params.users_per_bs < 1) throw std::invalid_argument("K must be >= 1");
  if (!(params.radius_m > 0.0)) throw std::invalid_argument("R must be > 0");
  if (!(params.user_ring.min_m > 0.0 && params.user_ring.min_m < params.user_ring.max_m)) {
    throw std::invalid_argument("user ring must satisfy 0 < min < max");
  }

  Rng rng = MakeRng(seed, streams::kTopology);
  std::vector<Position> bs;
  bs.push_back({0.0, 0.0});
  for (int l = 0; l < params.num_iab; ++l) bs.push_back(UniformInDisc(rng, params.radius_m));

  // Users are drawn around their intended BS. A draw whose true nearest BS is
  // a different one would shift the per-BS counts away from K, so it is
  // redrawn; the budget bounds the total number of redraws.
  const NetworkTopology skeleton(params.radius_m, bs,
                                 std::vector<std::vector<Position>>(bs.size(), {Position{}}));
  int redraws = 0;
  std::vector<std::vector<Position>> users(bs.size());
  for (std::size_t l = 0; l < bs.size(); ++l) {
    while (static_cast<int>(users[l].size()) < params.users_per_bs) {
      const Position p = UniformInAnnulus(rng, bs[l], params.user_ring);
      if (skeleton.NearestBs(p) == static_cast<int>(l)) {
        users[l].push_back(p);
      } else if (++redraws > params.max_redraws) {
        throw std::runtime_error("could not place " + std::to_string(params.users_per_bs) +
                                 " users per base station within " +
                                 std::to_string(params.max_redraws) +
                                 " redraws; geometry is degenerate");
      }
    }
  }
  return NetworkTopology(params.radius_m, std::move(bs), std::move(users));
}

NetworkTopology PerturbUsers(const NetworkTopology& topology, const PerturbationParams& params,
                             std::uint64_t seed) {
  if (params.max_step_radius_m < 0.0) throw std::invalid_argument("perturbation radius must be >= 0");
  Rng rng = MakeRng(seed, streams::kPerturbation);
  std::uniform_real_distribution<double> radius(0.0, params.max_step_radius_m);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<std::vector<Position>> users(topology.num_bs());
  for (int l = 0; l < topology.num_bs(); ++l) {
    for (int k = 0; k < topology.users_per_bs(); ++k) {
      const Position a = topology.anchor(l, k);
      const double r = params.max_step_radius_m > 0.0 ? radius(rng) : 0.0;
      const double theta = angle(rng);
      users[l].push_back({a.x + r * std::cos(theta), a.y + r * std::sin(theta)});
    }
  }
  return topology.WithUserPositions(std::move(users));
}

void WriteTopology(std::ostream& out, const NetworkTopology& t) {
  out << "# iab-topology radius_m " << FormatDouble(t.radius_m()) << '\n';
  out << "# tier index x y serving_bs\n";
  out << "donor 0 " << FormatDouble(t.bs(0).x) << ' ' << FormatDouble(t.bs(0).y) << " 0\n";
  for (int l = 1; l < t.num_bs(); ++l) {
    out << "iab " << l << ' ' << FormatDouble(t.bs(l).x) << ' ' << FormatDouble(t.bs(l).y)
        << " 0\n";
  }
  for (int l = 0; l < t.num_bs(); ++l) {
    for (int k = 0; k < t.users_per_bs(); ++k) {
      out << "user " << k << ' ' << FormatDouble(t.user(l, k).x) << ' '
          << FormatDouble(t.user(l, k).y) << ' ' << l << '\n';
    }
  }
}

NetworkTopology ReadTopology(std::istream& in) {
  double radius = 0.0;
  std::vector<Position> bs;
  std::vector<std::vector<Position>> users;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream header(line.substr(1));
      std::string key;
      header >> key >> key;
      if (key == "radius_m") header >> radius;
      continue;
    }
    std::istringstream row(line);
    std::string tier;
    int index = 0;
    int serving = 0;
    Position p;
    if (!(row >> tier >> index >> p.x >> p.y >> serving)) {
      throw std::runtime_error("topology line " + std::to_string(line_no) + " is malformed");
    }
    if (tier == "donor" || tier == "iab") {
      if (index != static_cast<int>(bs.size())) {
        throw std::runtime_error("topology line " + std::to_string(line_no) +
                                 ": base stations must be listed in index order");
      }
      bs.push_back(p);
    } else if (tier == "user") {
      if (serving < 0) throw std::runtime_error("negative serving BS in topology");
      if (users.size() <= static_cast<std::size_t>(serving)) users.resize(serving + 1);
      if (index != static_cast<int>(users[serving].size())) {
        throw std::runtime_error("topology line " + std::to_string(line_no) +
                                 ": users must be listed in index order");
      }
      users[serving].push_back(p);
    } else {
      throw std::runtime_error("unknown tier '" + tier + "' in topology");
    }
  }
  users.resize(bs.size());
  return NetworkTopology(radius, std::move(bs), std::move(users));
}

}  // namespace iab
