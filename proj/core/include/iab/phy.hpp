#pragma once

#include <vector>

#include "iab/allocation.hpp"
#include "iab/channel.hpp"

namespace iab {

// -70 dB self-interference coupling applied to an IAB node's own transmit
// power.
inline constexpr double kDefaultSelfInterference = 1e-7;

struct PhyParams {
  // Self-interference factor per IAB node, indexed l - 1. 0 means perfect
  // cancellation, 1 none.
  std::vector<double> beta;
  // Share each IAB node's backhaul rate among its K users instead of capping
  // every user by the full backhaul rate.
  bool divide_backhaul = false;

  static PhyParams Uniform(int num_iab, double beta = kDefaultSelfInterference);
};

struct SinrComponents {
  double signal_w = 0.0;
  double cochannel_w = 0.0;
  double self_interference_w = 0.0;
  double dbs_leakage_w = 0.0;
  double noise_w = 0.0;

  double Sinr() const {
    return signal_w / (cochannel_w + self_interference_w + dbs_leakage_w + noise_w);
  }
};

// Donor -> IAB l backhaul on subchannel n. Interference is every other base
// station's access transmission on n received at IAB l, plus beta times the
// power IAB l itself radiates on n.
SinrComponents SinrBackhaul(int l, int n, const AllocationDecision& d,
                            const ChannelRealization& c, double beta);

// IAB l -> its user k on subchannel n. Interference is the other IAB nodes'
// transmissions on n plus beta times the donor's total power on n weighted by
// the donor -> user gain.
SinrComponents SinrIabUser(int l, int k, int n, const AllocationDecision& d,
                           const ChannelRealization& c, double beta);

// Donor -> its user k on subchannel n, interfered by every IAB transmission on n.
SinrComponents SinrDonorUser(int k, int n, const AllocationDecision& d,
                             const ChannelRealization& c);

// Spectral efficiencies in bit/s/Hz.
struct RateReport {
  int num_iab = 0;
  int users_per_bs = 0;
  std::vector<double> access;    // [l][k], l = 0..L
  std::vector<double> backhaul;  // [l - 1]
  std::vector<double> user;      // [l][k]: donor users' access rate, min(backhaul, access) at IABs
  double sum_rate = 0.0;

  int num_users() const { return (num_iab + 1) * users_per_bs; }
  double UserRate(int l, int k) const { return user.at(l * users_per_bs + k); }
  double AccessRate(int l, int k) const { return access.at(l * users_per_bs + k); }
  double BackhaulRate(int l) const { return backhaul.at(l - 1); }
  double MeanUserRate() const { return sum_rate / num_users(); }
};

RateReport UserRates(const AllocationDecision& d, const ChannelRealization& c,
                     const PhyParams& params);

}  // namespace iab
