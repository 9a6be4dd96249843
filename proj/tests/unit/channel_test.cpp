#include "iab/channel.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "iab/topology.hpp"

namespace iab {
namespace {

TEST(Units, DbmWattsRoundTrip) {
  EXPECT_DOUBLE_EQ(DbmToWatts(30.0), 1.0);
  EXPECT_DOUBLE_EQ(DbmToWatts(0.0), 1e-3);
  EXPECT_NEAR(DbmToWatts(46.0), 39.810717055, 1e-8);
  EXPECT_NEAR(WattsToDbm(DbmToWatts(33.0)), 33.0, 1e-12);
}

TEST(Pathloss, ReferenceValues) {
  EXPECT_DOUBLE_EQ(PathlossDb(LinkKind::kFromDonor, 1.0), 34.0);
  EXPECT_DOUBLE_EQ(PathlossDb(LinkKind::kFromIab, 10.0), 67.0);
  EXPECT_DOUBLE_EQ(PathlossDb(LinkKind::kFromDonor, 100.0), 114.0);
}

TEST(Pathloss, ClampsBelowOneMeterAndRejectsNonPositive) {
  EXPECT_DOUBLE_EQ(PathlossDb(LinkKind::kFromDonor, 0.25), 34.0);
  EXPECT_DOUBLE_EQ(PathlossDb(LinkKind::kFromIab, 0.5), 37.0);
  EXPECT_THROW(PathlossDb(LinkKind::kFromDonor, 0.0), std::invalid_argument);
  EXPECT_THROW(PathlossDb(LinkKind::kFromIab, -3.0), std::invalid_argument);
}

TEST(Noise, ThermalFloor) {
  FadingParams p;
  EXPECT_NEAR(WattsToDbm(NoisePowerW(p)), -80.99, 0.01);
  EXPECT_NEAR(NoisePowerW(p), 7.96e-12, 0.01e-12);
  p.bandwidth_hz = 1.0;
  p.noise_figure_db = 0.0;
  EXPECT_NEAR(WattsToDbm(NoisePowerW(p)), -174.0, 1e-9);
  p.bandwidth_hz = 10.0;
  EXPECT_NEAR(WattsToDbm(NoisePowerW(p)), -164.0, 1e-9);
}

TEST(Rayleigh, UnitMeanExponential) {
  Rng rng = MakeRng(2024);
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  int above_one = 0;
  for (int i = 0; i < n; ++i) {
    const double g = DrawRayleighPowerGain(rng);
    ASSERT_GE(g, 0.0);
    sum += g;
    sq += g * g;
    above_one += g > 1.0;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 1.0, 0.02);
  EXPECT_NEAR(sq / n - mean * mean, 1.0, 0.05);
  EXPECT_NEAR(static_cast<double>(above_one) / n, std::exp(-1.0), 0.01);
}

TEST(Fading, ShadowingHasConfiguredSpread) {
  FadingParams p;
  double sum = 0.0, sq = 0.0;
  int count = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const FadingDraws d = DrawFading(2, 2, p, seed);
    for (double s : d.shadowing_db) {
      sum += s;
      sq += s * s;
      ++count;
    }
  }
  const double mean = sum / count;
  EXPECT_NEAR(mean, 0.0, 0.3);
  EXPECT_NEAR(std::sqrt(sq / count - mean * mean), 8.0, 0.3);
}

class ChannelOnTopology : public ::testing::Test {
 protected:
  NetworkTopology topo_ = BuildTopology({2, 2, 200.0}, 17);
};

TEST_F(ChannelOnTopology, DeterministicHookGivesPurePathloss) {
  FadingParams p;
  p.deterministic = true;
  const ChannelRealization c = DrawChannel(topo_, p, 3);
  for (int tx = 0; tx <= 2; ++tx) {
    const LinkKind kind = tx == 0 ? LinkKind::kFromDonor : LinkKind::kFromIab;
    for (int l = 1; l <= 2; ++l) {
      const double expected = tx == l ? 0.0 : std::pow(10.0, -PathlossDb(kind, Distance(topo_.bs(tx), topo_.bs(l))) / 10.0);
      for (int n = 0; n < p.num_subchannels; ++n) {
        EXPECT_NEAR(c.Gain(tx, c.IabRx(l), n), expected, expected * 1e-12);
      }
    }
    for (int l = 0; l <= 2; ++l) {
      for (int k = 0; k < 2; ++k) {
        const double expected = std::pow(10.0, -PathlossDb(kind, Distance(topo_.bs(tx), topo_.user(l, k))) / 10.0);
        for (int n = 0; n < p.num_subchannels; ++n) {
          EXPECT_NEAR(c.Gain(tx, c.UserRx(l, k), n), expected, expected * 1e-12);
        }
      }
    }
  }
}

TEST_F(ChannelOnTopology, SeededDeterminism) {
  FadingParams p;
  std::ostringstream a, b, other;
  WriteChannel(a, DrawChannel(topo_, p, 5));
  WriteChannel(b, DrawChannel(topo_, p, 5));
  WriteChannel(other, DrawChannel(topo_, p, 6));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str(), other.str());
}

TEST_F(ChannelOnTopology, SelfLoopIsZeroAndOthersPositive) {
  const ChannelRealization c = DrawChannel(topo_, FadingParams{}, 5);
  for (int tx = 0; tx < c.num_tx(); ++tx) {
    for (int rx = 0; rx < c.num_rx(); ++rx) {
      for (int n = 0; n < c.num_subchannels(); ++n) {
        if (tx >= 1 && rx == c.IabRx(tx)) {
          EXPECT_EQ(c.Gain(tx, rx, n), 0.0);
        } else {
          EXPECT_GT(c.Gain(tx, rx, n), 0.0);
        }
      }
    }
  }
}

TEST_F(ChannelOnTopology, FadingVariesAcrossSubchannels) {
  const ChannelRealization c = DrawChannel(topo_, FadingParams{}, 8);
  const int rx = c.UserRx(1, 0);
  EXPECT_NE(c.Gain(1, rx, 0), c.Gain(1, rx, 1));
}

TEST(ChannelIndexing, ReceiverLayout) {
  ChannelRealization c(2, 3, 4, 1e-12);
  EXPECT_EQ(c.num_rx(), 2 + 3 * 3);
  EXPECT_EQ(c.IabRx(1), 0);
  EXPECT_EQ(c.IabRx(2), 1);
  EXPECT_EQ(c.UserRx(0, 0), 2);
  EXPECT_EQ(c.UserRx(2, 2), 10);
  EXPECT_THROW(c.IabRx(0), std::out_of_range);
  EXPECT_THROW(c.UserRx(3, 0), std::out_of_range);
}

TEST(ChannelText, OneLinePerEntry) {
  ChannelRealization c(1, 1, 2, 1e-12);
  c.SetGain(0, 0, 1, 0.5);
  std::ostringstream out;
  WriteChannel(out, c);
  int lines = 0;
  std::istringstream in(out.str());
  std::string line;
  while (std::getline(in, line)) lines += !line.empty() && line[0] != '#';
  EXPECT_EQ(lines, c.num_tx() * c.num_rx() * c.num_subchannels());
  EXPECT_NE(out.str().find("0 0 1 0.5"), std::string::npos);
}

}  // namespace
}  // namespace iab
