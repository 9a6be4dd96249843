#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace iab {

enum class Tier { kDonor, kIab, kUser };

// Donor is BS 0, IAB nodes are BS 1..L. Users are indexed 0..K-1 within their
// serving BS.
struct NodeId {
  Tier tier = Tier::kDonor;
  int index = 0;
  friend bool operator==(const NodeId&, const NodeId&) = default;
};

struct Position {
  double x = 0.0;  // meters
  double y = 0.0;
  friend bool operator==(const Position&, const Position&) = default;
};

double Distance(Position a, Position b);

struct UserRing {
  double min_m = 10.0;
  double max_m = 50.0;
};

struct TopologyParams {
  int num_iab = 2;
  int users_per_bs = 2;
  double radius_m = 200.0;
  UserRing user_ring;
  int max_redraws = 1000;
};

struct PerturbationParams {
  double max_step_radius_m = 2.0;
};

// Geometry of the two-tier network. Users are stored grouped by serving BS,
// which makes the association map structural: user (l, k) is served by BS l.
// Each user keeps its anchor (initial) position next to its current one.
class NetworkTopology {
 public:
  NetworkTopology(double radius_m, std::vector<Position> bs_positions,
                  std::vector<std::vector<Position>> user_anchors);

  int num_iab() const { return static_cast<int>(bs_.size()) - 1; }
  int num_bs() const { return static_cast<int>(bs_.size()); }
  int users_per_bs() const { return static_cast<int>(anchors_.front().size()); }
  int num_users() const { return num_bs() * users_per_bs(); }
  double radius_m() const { return radius_m_; }

  const Position& bs(int l) const { return bs_.at(l); }
  const Position& user(int l, int k) const { return users_.at(l).at(k); }
  const Position& anchor(int l, int k) const { return anchors_.at(l).at(k); }
  int serving_bs(int l, int k) const;

  // Lowest index wins ties.
  int NearestBs(Position p) const;

  NetworkTopology WithUserPositions(std::vector<std::vector<Position>> users) const;

 private:
  double radius_m_;
  std::vector<Position> bs_;
  std::vector<std::vector<Position>> anchors_;
  std::vector<std::vector<Position>> users_;
};

NetworkTopology BuildTopology(const TopologyParams& params, std::uint64_t seed);

// Moves every user to anchor + U(0, r) * (cos U(0, 2pi), sin U(0, 2pi)).
// Offsets never accumulate and the association is left untouched.
NetworkTopology PerturbUsers(const NetworkTopology& topology,
                             const PerturbationParams& params, std::uint64_t seed);

// Plain-text table, one node per line: tier index x y serving_bs.
void WriteTopology(std::ostream& out, const NetworkTopology& topology);
NetworkTopology ReadTopology(std::istream& in);

}  // namespace iab
