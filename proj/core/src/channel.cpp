#include "iab/channel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace iab {

double DbmToWatts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double WattsToDbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double PathlossDb(LinkKind kind, double distance_m, const FadingParams& params) {
  if (!(distance_m > 0.0)) throw std::invalid_argument("pathloss distance must be > 0");
  const PathlossModel& m =
      kind == LinkKind::kFromDonor ? params.donor_pathloss : params.iab_pathloss;
  return m.intercept_db + m.slope * std::log10(std::max(distance_m, 1.0));
}

double NoisePowerW(const FadingParams& params) {
  const double dbm = params.noise_psd_dbm_per_hz + 10.0 * std::log10(params.bandwidth_hz) +
                     params.noise_figure_db;
  return DbmToWatts(dbm);
}

double DrawRayleighPowerGain(Rng& rng) {
  std::exponential_distribution<double> exp1(1.0);
  double g = exp1(rng);
  // The exponential has no atom at zero; guard the measure-zero case so gains
  // stay strictly positive.
  while (g <= 0.0) g = exp1(rng);
  return g;
}

ChannelRealization::ChannelRealization(int num_iab, int users_per_bs, int num_subchannels,
                                       double noise_power_w)
    : num_iab_(num_iab),
      users_per_bs_(users_per_bs),
      num_subchannels_(num_subchannels),
      noise_power_w_(noise_power_w) {
  if (num_iab < 1 || users_per_bs < 1 || num_subchannels < 1) {
    throw std::invalid_argument("channel dimensions must be >= 1");
  }
  if (!(noise_power_w > 0.0)) throw std::invalid_argument("noise power must be > 0");
  gain_.assign(static_cast<std::size_t>(num_tx()) * num_rx() * num_subchannels_, 0.0);
}

int ChannelRealization::IabRx(int l) const {
  if (l < 1 || l > num_iab_) throw std::out_of_range("IAB index out of range");
  return l - 1;
}

int ChannelRealization::UserRx(int l, int k) const {
  if (l < 0 || l > num_iab_ || k < 0 || k >= users_per_bs_) {
    throw std::out_of_range("user index out of range");
  }
  return num_iab_ + l * users_per_bs_ + k;
}

void ChannelRealization::SetGain(int tx, int rx, int n, double g) {
  if (tx < 0 || tx >= num_tx() || rx < 0 || rx >= num_rx() || n < 0 || n >= num_subchannels_) {
    throw std::out_of_range("gain index out of range");
  }
  if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("gain must be finite and >= 0");
  gain_[Index(tx, rx, n)] = g;
}

FadingDraws DrawFading(int num_iab, int users_per_bs, const FadingParams& params,
                       std::uint64_t seed) {
  if (params.num_subchannels < 1) throw std::invalid_argument("need at least one subchannel");
  FadingDraws d;
  d.num_tx = num_iab + 1;
  d.num_rx = num_iab + (num_iab + 1) * users_per_bs;
  d.num_subchannels = params.num_subchannels;
  d.shadowing_db.assign(static_cast<std::size_t>(d.num_tx) * d.num_rx, 0.0);
  d.small_scale.assign(d.shadowing_db.size() * d.num_subchannels, 1.0);
  if (params.deterministic) return d;

  Rng rng = MakeRng(seed, streams::kFading);
  std::normal_distribution<double> shadow(0.0, params.shadowing_sigma_db);
  for (double& s : d.shadowing_db) s = params.shadowing_sigma_db > 0.0 ? shadow(rng) : 0.0;
  for (double& h : d.small_scale) h = DrawRayleighPowerGain(rng);
  return d;
}

ChannelRealization Realize(const NetworkTopology& t, const FadingParams& params,
                           const FadingDraws& draws) {
  ChannelRealization c(t.num_iab(), t.users_per_bs(), params.num_subchannels,
                       NoisePowerW(params));
  if (draws.num_tx != c.num_tx() || draws.num_rx != c.num_rx() ||
      draws.num_subchannels != c.num_subchannels()) {
    throw std::invalid_argument("fading draws do not match the topology");
  }

  std::vector<Position> rx_pos(c.num_rx());
  for (int l = 1; l <= t.num_iab(); ++l) rx_pos[c.IabRx(l)] = t.bs(l);
  for (int l = 0; l < t.num_bs(); ++l) {
    for (int k = 0; k < t.users_per_bs(); ++k) rx_pos[c.UserRx(l, k)] = t.user(l, k);
  }

  for (int tx = 0; tx < c.num_tx(); ++tx) {
    const LinkKind kind = tx == 0 ? LinkKind::kFromDonor : LinkKind::kFromIab;
    for (int rx = 0; rx < c.num_rx(); ++rx) {
      if (tx >= 1 && rx == c.IabRx(tx)) continue;  // self-loop
      const std::size_t link = static_cast<std::size_t>(tx) * c.num_rx() + rx;
      const double loss_db = PathlossDb(kind, std::max(Distance(t.bs(tx), rx_pos[rx]), 1e-9), params) +
                             draws.shadowing_db[link];
      const double large_scale = std::pow(10.0, -loss_db / 10.0);
      for (int n = 0; n < c.num_subchannels(); ++n) {
        c.SetGain(tx, rx, n, large_scale * draws.small_scale[link * c.num_subchannels() + n]);
      }
    }
  }
  return c;
}

ChannelRealization DrawChannel(const NetworkTopology& topology, const FadingParams& params,
                               std::uint64_t seed) {
  return Realize(topology, params,
                 DrawFading(topology.num_iab(), topology.users_per_bs(), params, seed));
}

void WriteChannel(std::ostream& out, const ChannelRealization& c) {
  out << "# tx rx n gain noise_w=" << c.noise_power_w() << '\n';
  char buf[64];
  for (int tx = 0; tx < c.num_tx(); ++tx) {
    for (int rx = 0; rx < c.num_rx(); ++rx) {
      for (int n = 0; n < c.num_subchannels(); ++n) {
        auto res = std::to_chars(buf, buf + sizeof(buf), c.Gain(tx, rx, n));
        out << tx << ' ' << rx << ' ' << n << ' ' << std::string(buf, res.ptr) << '\n';
      }
    }
  }
}

}  // namespace iab
