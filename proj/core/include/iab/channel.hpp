#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "iab/random.hpp"
#include "iab/topology.hpp"

namespace iab {

enum class LinkKind { kFromDonor, kFromIab };

// intercept + slope * log10(d), d in meters.
struct PathlossModel {
  double intercept_db = 0.0;
  double slope = 0.0;
};

struct FadingParams {
  PathlossModel donor_pathloss{34.0, 40.0};
  PathlossModel iab_pathloss{37.0, 30.0};
  double shadowing_sigma_db = 8.0;
  double noise_psd_dbm_per_hz = -174.0;
  double noise_figure_db = 10.0;
  double bandwidth_hz = 200e6;
  int num_subchannels = 4;
  // Test hook: |h|^2 == 1 on every subchannel and no shadowing.
  bool deterministic = false;
};

double DbmToWatts(double dbm);
double WattsToDbm(double watts);

// Distances below 1 m are clamped to 1 m.
double PathlossDb(LinkKind kind, double distance_m, const FadingParams& params = {});

// -174 dBm/Hz + 10 log10(W) + NF, in watts.
double NoisePowerW(const FadingParams& params);

// Unit-mean exponential variate: |h|^2 of a Rayleigh coefficient.
double DrawRayleighPowerGain(Rng& rng);

// Random parts of a realization, kept apart from geometry so that a moving
// user can be re-evaluated against the same shadowing and fading draws.
struct FadingDraws {
  int num_tx = 0;
  int num_rx = 0;
  int num_subchannels = 0;
  std::vector<double> shadowing_db;    // [tx][rx]
  std::vector<double> small_scale;     // [tx][rx][n]
};

// Linear power gains g[tx][rx][n]. Transmitters are the base stations 0..L.
// Receivers are the IAB nodes followed by all users grouped by serving BS;
// use IabRx / UserRx to index them. The IAB self-loop (tx == rx node) is not a
// radio link and holds 0.
class ChannelRealization {
 public:
  ChannelRealization(int num_iab, int users_per_bs, int num_subchannels, double noise_power_w);

  int num_iab() const { return num_iab_; }
  int users_per_bs() const { return users_per_bs_; }
  int num_subchannels() const { return num_subchannels_; }
  int num_tx() const { return num_iab_ + 1; }
  int num_rx() const { return num_iab_ + (num_iab_ + 1) * users_per_bs_; }
  double noise_power_w() const { return noise_power_w_; }

  // Receiver index of IAB node l (1..L).
  int IabRx(int l) const;
  // Receiver index of user k served by BS l (0..L).
  int UserRx(int l, int k) const;

  double Gain(int tx, int rx, int n) const { return gain_[Index(tx, rx, n)]; }
  void SetGain(int tx, int rx, int n, double g);

 private:
  std::size_t Index(int tx, int rx, int n) const {
    return (static_cast<std::size_t>(tx) * num_rx() + rx) * num_subchannels_ + n;
  }

  int num_iab_;
  int users_per_bs_;
  int num_subchannels_;
  double noise_power_w_;
  std::vector<double> gain_;
};

FadingDraws DrawFading(int num_iab, int users_per_bs, const FadingParams& params,
                       std::uint64_t seed);

ChannelRealization Realize(const NetworkTopology& topology, const FadingParams& params,
                           const FadingDraws& draws);

ChannelRealization DrawChannel(const NetworkTopology& topology, const FadingParams& params,
                               std::uint64_t seed);

// Plain-text listing: one "tx rx n gain" line per entry.
void WriteChannel(std::ostream& out, const ChannelRealization& channel);

}  // namespace iab
