#include "oracles.hpp"

#include <blissthc/errors.hpp>
#include <blissthc/quantizer.hpp>

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace blissthc;

TEST(Angles, RoundTrip) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto v = oracle::random_unit(2 + s % 5, s);
    const auto a = quant::chi_to_angles(v);
    const auto w = quant::angles_to_chi(a);
    // sign convention: last nonzero component positive
    const double sign = v(v.size() - 1) >= 0 ? 1.0 : -1.0;
    EXPECT_LT((w - sign * v).cwiseAbs().maxCoeff(), 1e-12);
    for (double x : a) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 0.5);
    }
  }
}

TEST(Angles, ZeroTailStopsEarly) {
  const Eigen::Vector3d v(0.0, -1.0, 0.0);
  const auto a = quant::chi_to_angles(v);
  EXPECT_DOUBLE_EQ(a(0), 0.25);
  EXPECT_DOUBLE_EQ(a(1), 0.0);
  EXPECT_LT((quant::angles_to_chi(a) - Eigen::Vector3d(0, 1, 0)).norm(), 1e-15);
}

TEST(Angles, ManualSphericalCoordinates) {
  // chi = (cos 2pi a, sin 2pi a cos 2pi b, sin 2pi a sin 2pi b)
  const double a = 0.1, b = 0.2;
  const double tp = 2 * std::numbers::pi;
  const Eigen::Vector3d chi(std::cos(tp * a), std::sin(tp * a) * std::cos(tp * b), std::sin(tp * a) * std::sin(tp * b));
  const auto ang = quant::chi_to_angles(chi);
  EXPECT_NEAR(ang(0), a, 1e-14);
  EXPECT_NEAR(ang(1), b, 1e-14);
}

TEST(Angles, UnitsRoundHalfUpAndClampTop) {
  EXPECT_EQ(quant::angle_units(0.0, 4), 0);
  EXPECT_EQ(quant::angle_units(1.5 / 32.0, 4), 2);
  EXPECT_EQ(quant::angle_units(0.5, 4), 15);
  EXPECT_THROW(quant::angle_units(0.6, 4), DomainError);
}

TEST(Angles, RoundingBound) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  for (int beth : {3, 8, 16}) {
    const Eigen::VectorXd a = Eigen::VectorXd::NullaryExpr(1000, [&] { return u(rng); });
    const auto r = quant::round_angles(a, beth);
    EXPECT_LE((r - a).cwiseAbs().maxCoeff(), std::ldexp(1.0, -(beth + 1)));
  }
}

TEST(RoundZeta, HitsTargetTotal) {
  const Eigen::Matrix2d zeta{{0.7, -0.2}, {-0.2, 0.35}};
  const Eigen::Vector2d t(0.4, -0.9);
  const double lambda = 0.4 + 0.9 + 0.5 * (0.7 + 0.35 + 0.4) - 0.25 * (0.7 + 0.35);
  for (int aleph : {4, 8, 12}) {
    const auto r = quant::round_zeta(zeta, t, aleph, lambda, 2, 2);
    std::int64_t total = r.t_units.cwiseAbs().sum();
    for (int i = 0; i < 2; ++i)
      for (int j = i; j < 2; ++j) total += std::abs(r.zeta_units(i, j));
    EXPECT_EQ(total + r.deficit, std::int64_t(5) << aleph);
    EXPECT_EQ(r.deficit, 0);
    const double u0 = lambda / std::ldexp(5.0, aleph);
    EXPECT_LE((r.t - t).cwiseAbs().maxCoeff(), u0 * (std::abs(r.x) + 0.5) + 1e-15);
  }
}

TEST(Quantize, ErrorShrinksWithPrecisionAndSerializes) {
  const auto H = oracle::random_hamiltonian(3, 2, 51);
  bliss::FactorizationConfig cfg;
  cfg.max_iterations = 300;
  const auto F = bliss::optimize(H, 4, cfg).first;
  const auto grid = quant::precision_grid(H, F, {8, 12, 16}, {8, 12, 16});
  EXPECT_GT(grid.at(0, 0).error, grid.at(2, 2).error);
  for (std::size_t ia = 0; ia < 3; ++ia)
    for (std::size_t ib = 1; ib < 3; ++ib) EXPECT_LE(grid.at(ia, ib).l2_two_body, grid.at(ia, ib - 1).l2_two_body * 1.05);
  const auto Q = quant::quantize(H, F, 10, 12);
  const auto j = quant::to_json(Q);
  EXPECT_EQ(quant::to_json(quant::quantized_from_json(j)).dump(), j.dump());
  const auto rec = quant::reconstruct_integrals(Q);
  EXPECT_EQ(rec.chi.rows(), 4);
  EXPECT_LT(tensor_core::frobenius_distance(rec.g, bliss::reconstruct_g(F)), 0.05);
}

TEST(Quantize, RejectsNonPositiveNorm) {
  EXPECT_THROW(quant::round_zeta(Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Zero(1), 8, 0.0, 1, 1), DomainError);
}

TEST(ErrorBudget, SplitAndValidate) {
  const auto b = quant::ErrorBudget::from_total(0.0016, 0.001);
  EXPECT_NEAR(b.epsilon_thc, 0.0006, 1e-18);
  EXPECT_THROW(quant::ErrorBudget::from_total(0.001, 0.002), DomainError);
}
