#include "iab/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "iab/channel.hpp"

namespace iab {
namespace {

// Number of ordered injective tuples of length `len` from `pool` items.
std::int64_t Permutations(int pool, int len) {
  std::int64_t p = 1;
  for (int i = 0; i < len; ++i) p *= pool - i;
  return p;
}

std::int64_t IntPow(int base, int exp) {
  std::int64_t p = 1;
  for (int i = 0; i < exp; ++i) {
    p *= base;
    if (p > std::numeric_limits<int>::max()) return p;
  }
  return p;
}

bool NearlyEqual(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

bool PowerLevels::Contains(double watts) const {
  for (double l : levels) {
    if (NearlyEqual(l, watts)) return true;
  }
  return false;
}

PowerLevels MakePowerLevels(double p_max_dbm, int num_levels) {
  if (num_levels < 2) throw std::invalid_argument("need at least 2 power levels (T >= 2)");
  PowerLevels p;
  p.p_max_w = DbmToWatts(p_max_dbm);
  p.levels.resize(num_levels);
  for (int i = 0; i < num_levels; ++i) p.levels[i] = i * p.p_max_w / (num_levels - 1);
  p.levels.back() = p.p_max_w;
  return p;
}

AllocationDecision AllocationDecision::Idle(int num_iab, int users_per_bs) {
  AllocationDecision d;
  d.donor_users.assign(users_per_bs, {});
  d.donor_backhaul.assign(num_iab, {});
  d.iab_users.assign(num_iab, std::vector<LinkAssignment>(users_per_bs));
  return d;
}

const LinkAssignment& AllocationDecision::access(int l, int k) const {
  return l == 0 ? donor_users.at(k) : iab_users.at(l - 1).at(k);
}

LinkAssignment& AllocationDecision::access(int l, int k) {
  return l == 0 ? donor_users.at(k) : iab_users.at(l - 1).at(k);
}

double AllocationDecision::TransmitPowerOn(int tx, int n) const {
  double p = 0.0;
  if (tx == 0) {
    for (const auto& a : donor_users) p += a.subchannel == n ? a.power_w : 0.0;
    for (const auto& a : donor_backhaul) p += a.subchannel == n ? a.power_w : 0.0;
  } else {
    for (const auto& a : iab_users.at(tx - 1)) p += a.subchannel == n ? a.power_w : 0.0;
  }
  return p;
}

SubchannelMatrix BuildSubchannelMatrix(const AllocationDecision& d, int num_subchannels) {
  const int L = d.num_iab();
  const int K = d.users_per_bs();
  SubchannelMatrix m;
  m.num_rows = (L + 1) * K + L;
  m.num_subchannels = num_subchannels;
  m.x.assign(static_cast<std::size_t>(m.num_rows) * num_subchannels, 0);
  auto mark = [&](int row, const LinkAssignment& a) {
    if (a.subchannel == kNoSubchannel) return;
    if (a.subchannel < 0 || a.subchannel >= num_subchannels) {
      throw std::out_of_range("subchannel index out of range");
    }
    m.x[static_cast<std::size_t>(row) * num_subchannels + a.subchannel] = 1;
  };
  for (int l = 0; l <= L; ++l) {
    for (int k = 0; k < K; ++k) mark(SubchannelMatrix::AccessRow(l, k, K), d.access(l, k));
  }
  for (int l = 1; l <= L; ++l) {
    mark(SubchannelMatrix::BackhaulRow(l, L, K), d.donor_backhaul[l - 1]);
  }
  return m;
}

std::int64_t EnumerateActionSpace(int num_links, int num_subchannels, int num_levels) {
  if (num_links < 1 || num_subchannels < 1 || num_levels < 1) {
    throw std::invalid_argument("action space dimensions must be >= 1");
  }
  if (num_links > num_subchannels) {
    throw std::invalid_argument("cannot assign " + std::to_string(num_links) +
                                " links to distinct subchannels out of " +
                                std::to_string(num_subchannels));
  }
  return Permutations(num_subchannels, num_links) * IntPow(num_levels, num_links);
}

ActionSpace::ActionSpace(int num_links, int num_subchannels, int num_levels, ActionMode mode)
    : num_links_(num_links),
      num_subchannels_(num_subchannels),
      num_levels_(num_levels),
      mode_(mode) {
  std::int64_t size = 0;
  if (mode == ActionMode::kJoint) {
    size = EnumerateActionSpace(num_links, num_subchannels, num_levels);
    level_combos_ = static_cast<int>(IntPow(num_levels, num_links));
  } else {
    if (num_links < 1 || num_subchannels < 1 || num_levels < 1) {
      throw std::invalid_argument("action space dimensions must be >= 1");
    }
    size = static_cast<std::int64_t>(num_links) * num_subchannels * num_levels;
    level_combos_ = num_levels;
  }
  if (size > std::numeric_limits<int>::max()) throw std::invalid_argument("action space too large");
  size_ = static_cast<int>(size);
}

std::vector<LinkChoice> ActionSpace::Decode(int code) const {
  if (code < 0 || code >= size_) {
    throw std::out_of_range("action code " + std::to_string(code) + " outside [0, " +
                            std::to_string(size_) + ")");
  }
  std::vector<LinkChoice> out(num_links_);
  if (mode_ == ActionMode::kSingleLink) {
    const int per_link = num_subchannels_ * num_levels_;
    const int link = code / per_link;
    const int rem = code % per_link;
    out[link] = {rem / num_levels_, rem % num_levels_};
    return out;
  }

  int perm_rank = code / level_combos_;
  int level_rank = code % level_combos_;
  for (int i = num_links_ - 1; i >= 0; --i) {
    out[i].level = level_rank % num_levels_;
    level_rank /= num_levels_;
  }
  std::vector<bool> used(num_subchannels_, false);
  for (int i = 0; i < num_links_; ++i) {
    const auto block = Permutations(num_subchannels_ - 1 - i, num_links_ - 1 - i);
    int skip = static_cast<int>(perm_rank / block);
    perm_rank = static_cast<int>(perm_rank % block);
    for (int n = 0; n < num_subchannels_; ++n) {
      if (used[n]) continue;
      if (skip-- == 0) {
        out[i].subchannel = n;
        used[n] = true;
        break;
      }
    }
  }
  return out;
}

int ActionSpace::Encode(std::span<const LinkChoice> choices) const {
  if (static_cast<int>(choices.size()) != num_links_) {
    throw std::invalid_argument("assignment length does not match the agent's links");
  }
  for (const auto& c : choices) {
    if (c.subchannel == kNoSubchannel && c.level == 0 && mode_ == ActionMode::kSingleLink) continue;
    if (c.subchannel < 0 || c.subchannel >= num_subchannels_ || c.level < 0 ||
        c.level >= num_levels_) {
      throw std::out_of_range("link choice out of range");
    }
  }

  if (mode_ == ActionMode::kSingleLink) {
    int active = -1;
    for (int i = 0; i < num_links_; ++i) {
      if (choices[i].subchannel != kNoSubchannel) {
        if (active >= 0) throw std::invalid_argument("single-link action serves more than one link");
        active = i;
      }
    }
    if (active < 0) throw std::invalid_argument("single-link action serves no link");
    return (active * num_subchannels_ + choices[active].subchannel) * num_levels_ +
           choices[active].level;
  }

  std::vector<bool> used(num_subchannels_, false);
  std::int64_t perm_rank = 0;
  for (int i = 0; i < num_links_; ++i) {
    const int n = choices[i].subchannel;
    if (used[n]) throw std::invalid_argument("joint action reuses a subchannel");
    int smaller_free = 0;
    for (int m = 0; m < n; ++m) smaller_free += used[m] ? 0 : 1;
    perm_rank += smaller_free * Permutations(num_subchannels_ - 1 - i, num_links_ - 1 - i);
    used[n] = true;
  }
  int level_rank = 0;
  for (const auto& c : choices) level_rank = level_rank * num_levels_ + c.level;
  return static_cast<int>(perm_rank * level_combos_ + level_rank);
}

std::string AgentId::Name() const {
  switch (role) {
    case AgentRole::kDonorUsers:
      return "donor-ue";
    case AgentRole::kDonorBackhaul:
      return "donor-iab";
    case AgentRole::kIab:
      return "iab-" + std::to_string(bs);
  }
  return "unknown";
}

std::vector<Violation> Validate(const AllocationDecision& d, const PowerLevels& donor_levels,
                                const PowerLevels& iab_levels) {
  std::vector<Violation> out;
  auto budget_exceeded = [](double total, double cap) {
    return total > cap * (1.0 + 1e-12);
  };
  auto check_orthogonal = [&](int tx, auto&&... groups) {
    std::vector<int> seen;
    auto scan = [&](const std::vector<LinkAssignment>& links) {
      for (const auto& a : links) {
        if (a.subchannel == kNoSubchannel || a.power_w == 0.0) continue;
        for (int s : seen) {
          if (s == a.subchannel) {
            out.push_back({ConstraintKind::kOrthogonality, tx,
                           "subchannel " + std::to_string(s) + " used twice by BS " +
                               std::to_string(tx)});
          }
        }
        seen.push_back(a.subchannel);
      }
    };
    (scan(groups), ...);
  };
  auto check_levels = [&](int tx, const std::vector<LinkAssignment>& links,
                          const PowerLevels& levels) {
    for (const auto& a : links) {
      if (!levels.Contains(a.power_w)) {
        out.push_back({ConstraintKind::kPowerLevel, tx,
                       "power " + std::to_string(a.power_w) + " W is not a level of BS " +
                           std::to_string(tx)});
      }
    }
  };

  double donor_total = 0.0;
  for (const auto& a : d.donor_users) donor_total += a.power_w;
  for (const auto& a : d.donor_backhaul) donor_total += a.power_w;
  if (budget_exceeded(donor_total, donor_levels.p_max_w)) {
    out.push_back({ConstraintKind::kDonorBudget, 0,
                   "donor radiates " + std::to_string(donor_total) + " W > " +
                       std::to_string(donor_levels.p_max_w) + " W"});
  }
  check_orthogonal(0, d.donor_users, d.donor_backhaul);
  check_levels(0, d.donor_users, donor_levels);
  check_levels(0, d.donor_backhaul, donor_levels);

  for (int l = 1; l <= d.num_iab(); ++l) {
    const auto& links = d.iab_users[l - 1];
    double total = 0.0;
    for (const auto& a : links) total += a.power_w;
    if (budget_exceeded(total, iab_levels.p_max_w)) {
      out.push_back({ConstraintKind::kIabBudget, l,
                     "IAB " + std::to_string(l) + " radiates " + std::to_string(total) +
                         " W > " + std::to_string(iab_levels.p_max_w) + " W"});
    }
    check_orthogonal(l, links);
    check_levels(l, links, iab_levels);
  }
  return out;
}

void WriteDecision(std::ostream& out, const AllocationDecision& d) {
  out << "# tx rx subchannel power_w\n";
  auto row = [&](int tx, const std::string& rx, const LinkAssignment& a) {
    out << tx << ' ' << rx << ' ' << a.subchannel << ' ' << a.power_w << '\n';
  };
  for (int k = 0; k < d.users_per_bs(); ++k) row(0, "user:0:" + std::to_string(k), d.donor_users[k]);
  for (int l = 1; l <= d.num_iab(); ++l) row(0, "iab:" + std::to_string(l), d.donor_backhaul[l - 1]);
  for (int l = 1; l <= d.num_iab(); ++l) {
    for (int k = 0; k < d.users_per_bs(); ++k) {
      row(l, "user:" + std::to_string(l) + ":" + std::to_string(k), d.iab_users[l - 1][k]);
    }
  }
}

}  // namespace iab
