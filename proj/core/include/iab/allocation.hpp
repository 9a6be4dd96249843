#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace iab {

inline constexpr int kNoSubchannel = -1;

// Uniform grid {0, p/(T-1), ..., p} in watts.
struct PowerLevels {
  double p_max_w = 0.0;
  std::vector<double> levels;

  int size() const { return static_cast<int>(levels.size()); }
  double operator[](int i) const { return levels.at(i); }
  bool Contains(double watts) const;
};

PowerLevels MakePowerLevels(double p_max_dbm, int num_levels);

struct LinkAssignment {
  int subchannel = kNoSubchannel;
  double power_w = 0.0;
  friend bool operator==(const LinkAssignment&, const LinkAssignment&) = default;
};

// Joint subchannel/power decision. The concatenation P = [P^DU; P^DN; P^NU]
// is kept as three blocks: donor access (K links), donor backhaul (one link
// per IAB node) and IAB access (K links per IAB node).
struct AllocationDecision {
  std::vector<LinkAssignment> donor_users;
  std::vector<LinkAssignment> donor_backhaul;
  std::vector<std::vector<LinkAssignment>> iab_users;

  static AllocationDecision Idle(int num_iab, int users_per_bs);

  int num_iab() const { return static_cast<int>(donor_backhaul.size()); }
  int users_per_bs() const { return static_cast<int>(donor_users.size()); }

  // Access link of user k at BS l (l = 0 is the donor).
  const LinkAssignment& access(int l, int k) const;
  LinkAssignment& access(int l, int k);

  // Total power BS `tx` radiates on subchannel n, over all its links.
  double TransmitPowerOn(int tx, int n) const;
};

// Binary subchannel allocation matrix. Rows are ordered
// [x_0 (K donor access links), x_1 .. x_L (K rows each), x_01 .. x_0L].
struct SubchannelMatrix {
  int num_rows = 0;
  int num_subchannels = 0;
  std::vector<std::uint8_t> x;

  std::uint8_t at(int row, int n) const { return x.at(static_cast<std::size_t>(row) * num_subchannels + n); }
  static int AccessRow(int l, int k, int users_per_bs) { return l * users_per_bs + k; }
  static int BackhaulRow(int l, int num_iab, int users_per_bs) {
    return (num_iab + 1) * users_per_bs + (l - 1);
  }
};

SubchannelMatrix BuildSubchannelMatrix(const AllocationDecision& d, int num_subchannels);

struct LinkChoice {
  int subchannel = kNoSubchannel;
  int level = 0;
  friend bool operator==(const LinkChoice&, const LinkChoice&) = default;
};

enum class ActionMode {
  // One (subchannel, level) pair per owned link, subchannels pairwise distinct.
  kJoint,
  // A single owned link is served per step; the others stay idle.
  kSingleLink,
};

// Number of joint assignments: N (N-1) ... (N-n+1) * T^n.
std::int64_t EnumerateActionSpace(int num_links, int num_subchannels, int num_levels);

// Enumerated action space of one agent. Joint-mode codes are ordered
// lexicographically in (subchannel tuple, level tuple): the rank of the
// injective subchannel tuple is the major digit, the level tuple (first link
// most significant) the minor one.
class ActionSpace {
 public:
  ActionSpace(int num_links, int num_subchannels, int num_levels,
              ActionMode mode = ActionMode::kJoint);

  int size() const { return size_; }
  int num_links() const { return num_links_; }
  int num_subchannels() const { return num_subchannels_; }
  int num_levels() const { return num_levels_; }
  ActionMode mode() const { return mode_; }

  std::vector<LinkChoice> Decode(int code) const;
  int Encode(std::span<const LinkChoice> choices) const;

 private:
  int num_links_;
  int num_subchannels_;
  int num_levels_;
  ActionMode mode_;
  int size_;
  int level_combos_;
};

enum class AgentRole { kDonorUsers, kDonorBackhaul, kIab };

struct AgentId {
  AgentRole role = AgentRole::kDonorUsers;
  int bs = 0;  // IAB index for kIab, 0 otherwise
  std::string Name() const;
  friend bool operator==(const AgentId&, const AgentId&) = default;
};

struct AgentAction {
  AgentId agent;
  std::vector<LinkChoice> assignment;
  int code = 0;
};

enum class ConstraintKind { kDonorBudget, kIabBudget, kOrthogonality, kPowerLevel };

struct Violation {
  ConstraintKind kind;
  int transmitter = 0;
  std::string detail;
};

// Checks the donor budget over P^DU and P^DN, each IAB budget over its P^NU
// row, per-transmitter subchannel orthogonality among links that radiate, and
// level membership.
std::vector<Violation> Validate(const AllocationDecision& d, const PowerLevels& donor_levels,
                                const PowerLevels& iab_levels);

// "tx rx subchannel power_w" rows; rx is "user:<l>:<k>" or "iab:<l>".
void WriteDecision(std::ostream& out, const AllocationDecision& d);

}  // namespace iab
