#include <blissthc/arch.hpp>
#include <blissthc/errors.hpp>
#include <blissthc/presets.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace blissthc;
using namespace blissthc::arch;

namespace {

cost::LogicalCost make_cost(double toffoli, std::int64_t memory, double av) {
  cost::LogicalCost c;
  c.toffoli = std::llround(toffoli);
  c.t_count = 4 * c.toffoli;
  c.memory_qubits = memory;
  c.av_blocks = av;
  return c;
}

HardwareParams hw_at(double alpha, double l) {
  HardwareParams hw;
  hw.alpha = alpha;
  hw.l_delay_m = l;
  return hw;
}

}  // namespace

TEST(Arch, ImsRequiredByHand) {
  // n d^2 c / (l r_IM)
  EXPECT_EQ(ims_required(2714, 60, hw_at(0.5, 1.0)), 1954080);
  EXPECT_EQ(ims_required(2714, 30, hw_at(0.5, 1.0)), 488520);
  EXPECT_EQ(ims_required(2714, 30, hw_at(0.5, 1000.0)), 489);
  EXPECT_EQ(logical_qubits_from_ims(1954080, 60, hw_at(0.5, 1.0)), 2714);
}

TEST(Arch, BaselineRuntimeAndDistance) {
  const auto c = make_cost(7.786e9, 1357, 1.678e12);
  const auto e = estimate_baseline(c, hw_at(0.5, 1.0));
  EXPECT_EQ(e.code_distance, 60);
  EXPECT_NEAR(e.runtime_seconds, 60.0 / 2e8 * 4 * 7.786e9, 1e-6);
  EXPECT_NEAR(e.recomputed_runtime(hw_at(0.5, 1.0)), e.runtime_seconds, 1e-6 * e.runtime_seconds);
  // brute force: smallest d with 2 m n_T <= p_f 10^(alpha d / 2)
  int d = 3;
  while (2.0 * 1357 * 4 * 7.786e9 > 0.1 * std::pow(10.0, 0.5 * d / 2.0)) ++d;
  EXPECT_EQ(d, 60);
  EXPECT_EQ(min_distance(ArchKind::baseline, c, hw_at(1.0, 1.0), 1357), 30);
}

TEST(Arch, ActiveVolumeRuntimeMatchesExplicitFormula) {
  const auto c = make_cost(1.714e9, 999, 2.28e11);
  const auto hw = hw_at(0.5, 1.0);
  const double t = runtime_av_from_ims(c.av_blocks, 999, 1954080, 50, hw);
  // tau d b / (n - m) with n = floor(n_IM r_IM tau / d^2) whole logical qubits
  const double n = std::floor(1954080.0 * 1e9 * 5e-9 / 2500.0);
  const double expected = 5e-9 * 50.0 * 2.28e11 / (n - 999.0);
  EXPECT_NEAR(t, expected, 1e-9 * expected);
  EXPECT_THROW(runtime_av_from_ims(c.av_blocks, 999, 100, 50, hw), InfeasibleError);
}

TEST(Arch, DistanceOutOfRangeIsInfeasible) {
  // at alpha = 0.1 even d = 100 only buys 10^4 blocks
  const auto c = make_cost(1e6, 1000, 1e9);
  EXPECT_THROW(min_distance(ArchKind::baseline, c, hw_at(0.1, 1.0), 1000), InfeasibleError);
  EXPECT_THROW(min_distance(ArchKind::active_volume, c, hw_at(0.1, 1.0), 1000, 1e7), InfeasibleError);
}

TEST(Arch, ReactionLimitWarning) {
  const auto c = make_cost(7.786e9, 1357, 1.678e12);
  EXPECT_FALSE(estimate_baseline(c, hw_at(0.5, 1.0)).reaction_limit_warning);
  EXPECT_TRUE(estimate_baseline(c, hw_at(0.5, 0.1)).reaction_limit_warning);
}

TEST(Arch, SpeedupDecompositionMultipliesToTotal) {
  const auto p = presets::p450();
  const auto c0 = p.row("THC", false).as_cost(), c1 = p.row("BLISS-THC", false).as_cost(),
             c2 = p.row("BLISS-THC", true).as_cost();
  const double total = speedup(c0, c2, SpeedupMode::fixed_qubits);
  EXPECT_NEAR(total, (2.0 - 999.0 / 1357.0) * 1357.0 * 4 * 7.786e9 / 2.28e11, 1e-9 * total);
  const auto f = speedup_decomposition({c0, c0, c1, c2}, 1357.0);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_NEAR(f[0] * f[1] * f[2], total, 1e-9 * total);
  EXPECT_EQ(speedup_decomposition({c0}, 1357.0), std::vector<double>{1.0});
}

TEST(Arch, MinImsIsMinimal) {
  const auto c = make_cost(1.714e9, 999, 2.285e11);
  const auto hw = hw_at(1.0, 2000.0);
  const auto s = min_ims_for_runtime(c, hw, 3600.0);
  EXPECT_LE(s.runtime_seconds, 3600.0);
  const int d = min_distance(ArchKind::active_volume, c, hw, 999, double(s.n_im - 1));
  EXPECT_GT(runtime_av_from_ims(c.av_blocks, 999, double(s.n_im - 1), d, hw), 3600.0);
}

TEST(Arch, FormatHms) {
  EXPECT_EQ(format_hms(9343.2), "2:35:44");
  EXPECT_EQ(format_hms(59.1), "0:01:00");
  EXPECT_EQ(format_hms(9343578.0), "2595:26:18");
}

TEST(Arch, HardwareJson) {
  const auto hw = hw_at(0.7, 12.0);
  const auto back = hardware_from_json(to_json(hw));
  EXPECT_EQ(back.alpha, 0.7);
  EXPECT_EQ(back.l_delay_m, 12.0);
  auto bad = to_json(hw);
  bad["p_fail"] = -0.1;
  EXPECT_THROW(hardware_from_json(bad), DomainError);
}
