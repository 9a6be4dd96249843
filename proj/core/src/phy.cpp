#include "iab/phy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iab {
namespace {

void CheckShapes(const AllocationDecision& d, const ChannelRealization& c) {
  if (d.num_iab() != c.num_iab() || d.users_per_bs() != c.users_per_bs() ||
      static_cast<int>(d.iab_users.size()) != c.num_iab()) {
    throw std::invalid_argument("allocation decision does not match the channel dimensions");
  }
  for (const auto& row : d.iab_users) {
    if (static_cast<int>(row.size()) != c.users_per_bs()) {
      throw std::invalid_argument("allocation decision does not match the channel dimensions");
    }
  }
}

double PowerOn(const LinkAssignment& a, int n) { return a.subchannel == n ? a.power_w : 0.0; }

// Access transmissions of BS j on subchannel n received at `rx`.
double AccessInterference(int j, int rx, int n, const AllocationDecision& d,
                          const ChannelRealization& c) {
  double p = 0.0;
  for (int k = 0; k < d.users_per_bs(); ++k) p += PowerOn(d.access(j, k), n);
  return p > 0.0 ? p * c.Gain(j, rx, n) : 0.0;
}

double LinkRate(const SubchannelMatrix& x, int row, auto&& sinr_on) {
  double r = 0.0;
  for (int n = 0; n < x.num_subchannels; ++n) {
    if (x.at(row, n)) r += std::log2(1.0 + sinr_on(n));
  }
  return r;
}

}  // namespace

PhyParams PhyParams::Uniform(int num_iab, double beta) {
  PhyParams p;
  p.beta.assign(num_iab, beta);
  return p;
}

SinrComponents SinrBackhaul(int l, int n, const AllocationDecision& d,
                            const ChannelRealization& c, double beta) {
  CheckShapes(d, c);
  const int rx = c.IabRx(l);
  SinrComponents s;
  s.signal_w = PowerOn(d.donor_backhaul.at(l - 1), n) * c.Gain(0, rx, n);
  for (int j = 0; j <= d.num_iab(); ++j) {
    if (j == l) continue;
    s.cochannel_w += AccessInterference(j, rx, n, d, c);
  }
  s.self_interference_w = beta * d.TransmitPowerOn(l, n);
  s.noise_w = c.noise_power_w();
  return s;
}

SinrComponents SinrIabUser(int l, int k, int n, const AllocationDecision& d,
                           const ChannelRealization& c, double beta) {
  CheckShapes(d, c);
  const int rx = c.UserRx(l, k);
  SinrComponents s;
  s.signal_w = PowerOn(d.access(l, k), n) * c.Gain(l, rx, n);
  for (int j = 1; j <= d.num_iab(); ++j) {
    if (j == l) continue;
    s.cochannel_w += AccessInterference(j, rx, n, d, c);
  }
  s.dbs_leakage_w = beta * d.TransmitPowerOn(0, n) * c.Gain(0, rx, n);
  s.noise_w = c.noise_power_w();
  return s;
}

SinrComponents SinrDonorUser(int k, int n, const AllocationDecision& d,
                             const ChannelRealization& c) {
  CheckShapes(d, c);
  const int rx = c.UserRx(0, k);
  SinrComponents s;
  s.signal_w = PowerOn(d.donor_users.at(k), n) * c.Gain(0, rx, n);
  for (int j = 1; j <= d.num_iab(); ++j) s.cochannel_w += AccessInterference(j, rx, n, d, c);
  s.noise_w = c.noise_power_w();
  return s;
}

RateReport UserRates(const AllocationDecision& d, const ChannelRealization& c,
                     const PhyParams& params) {
  CheckShapes(d, c);
  const int L = d.num_iab();
  const int K = d.users_per_bs();
  if (static_cast<int>(params.beta.size()) != L) {
    throw std::invalid_argument("need one self-interference factor per IAB node");
  }
  const SubchannelMatrix x = BuildSubchannelMatrix(d, c.num_subchannels());

  RateReport r;
  r.num_iab = L;
  r.users_per_bs = K;
  r.access.assign((L + 1) * K, 0.0);
  r.user.assign((L + 1) * K, 0.0);
  r.backhaul.assign(L, 0.0);

  for (int l = 1; l <= L; ++l) {
    const double beta = params.beta[l - 1];
    r.backhaul[l - 1] = LinkRate(x, SubchannelMatrix::BackhaulRow(l, L, K),
                                 [&](int n) { return SinrBackhaul(l, n, d, c, beta).Sinr(); });
  }
  for (int k = 0; k < K; ++k) {
    const double rate = LinkRate(x, SubchannelMatrix::AccessRow(0, k, K),
                                 [&](int n) { return SinrDonorUser(k, n, d, c).Sinr(); });
    r.access[k] = rate;
    r.user[k] = rate;
  }
  for (int l = 1; l <= L; ++l) {
    const double beta = params.beta[l - 1];
    const double cap = params.divide_backhaul ? r.backhaul[l - 1] / K : r.backhaul[l - 1];
    for (int k = 0; k < K; ++k) {
      const double access = LinkRate(x, SubchannelMatrix::AccessRow(l, k, K), [&](int n) {
        return SinrIabUser(l, k, n, d, c, beta).Sinr();
      });
      r.access[l * K + k] = access;
      r.user[l * K + k] = std::min(cap, access);
    }
  }
  for (double u : r.user) r.sum_rate += u;
  return r;
}

}  // namespace iab
