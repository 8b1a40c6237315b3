#include <blissthc/arch.hpp>
#include <blissthc/blockenc.hpp>
#include <blissthc/factorizer.hpp>
#include <blissthc/logical_cost.hpp>
#include <blissthc/presets.hpp>
#include <blissthc/quantizer.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace blissthc;

namespace {

tensor_core::ElectronicHamiltonian random_h(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  Eigen::MatrixXd h(n, n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q <= p; ++q) h(p, q) = h(q, p) = u(rng);
  // positive semidefinite two-body part from n symmetric factors
  tensor_core::Tensor4 g(n);
  for (std::size_t l = 0; l < n; ++l) {
    Eigen::MatrixXd L(n, n);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q <= p; ++q) L(p, q) = L(q, p) = u(rng);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t s = 0; s < n; ++s) g(p, q, r, s) += L(p, q) * L(r, s);
  }
  return {h, g, int(n)};
}

void BM_CostAndGradient(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  const auto H = random_h(n, 1);
  const bliss::ParameterLayout L{2 * n, n};
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  Eigen::VectorXd x(L.size()), g;
  for (auto& v : x) v = nd(rng);
  for (auto _ : state) benchmark::DoNotOptimize(bliss::cost_and_gradient(H, L, x, 1e-3, g));
}
BENCHMARK(BM_CostAndGradient)->Arg(4)->Arg(8)->Arg(16);

void BM_Optimize(benchmark::State& state) {
  const auto H = random_h(6, 3);
  bliss::FactorizationConfig cfg;
  cfg.max_iterations = 200;
  cfg.rho = 1e-4;
  for (auto _ : state) benchmark::DoNotOptimize(bliss::optimize(H, 12, cfg));
}
BENCHMARK(BM_Optimize)->Unit(benchmark::kMillisecond);

void BM_Quantize(benchmark::State& state) {
  const auto H = random_h(6, 4);
  bliss::FactorizationConfig cfg;
  cfg.max_iterations = 100;
  const auto F = bliss::optimize(H, 12, cfg).first;
  for (auto _ : state) benchmark::DoNotOptimize(quant::quantize(H, F, 12, 14));
}
BENCHMARK(BM_Quantize)->Unit(benchmark::kMicrosecond);

void BM_VerifyBlockEncoding(benchmark::State& state) {
  const auto inst = blockenc::BlockEncodingInstance::random(std::size_t(state.range(0)), 4, 5);
  for (auto _ : state) benchmark::DoNotOptimize(blockenc::verify_block_encoding(inst, 1e-10));
}
BENCHMARK(BM_VerifyBlockEncoding)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_CostAlgorithm(benchmark::State& state) {
  const auto p = presets::p450().circuit("BLISS-THC", true);
  const cost::CostTable t;
  for (auto _ : state) benchmark::DoNotOptimize(cost::cost_algorithm(p, t));
}
BENCHMARK(BM_CostAlgorithm);

void BM_MinImsForRuntime(benchmark::State& state) {
  auto c = presets::p450().row("BLISS-THC", true).as_cost();
  arch::HardwareParams hw;
  hw.alpha = 1.0;
  hw.l_delay_m = 2000.0;
  for (auto _ : state) benchmark::DoNotOptimize(arch::min_ims_for_runtime(c, hw, 73 * 3600.0));
}
BENCHMARK(BM_MinImsForRuntime)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
