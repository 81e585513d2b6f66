#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "lolb/classical_bounds.hpp"
#include "lolb/gibbs.hpp"
#include "lolb/oracle.hpp"
#include "lolb/quantum_bounds.hpp"

using namespace lolb;

namespace {

ProbArray random_distribution(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> x(n);
  double s = 0.0;
  for (auto& v : x) {
    v = expo(rng);
    s += v;
  }
  for (auto& v : x) v /= s;
  return ProbArray(std::move(x));
}

DensityOperator random_state(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd G(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) G(i, j) = std::complex<double>(normal(rng), normal(rng));
  Eigen::MatrixXcd W = G * G.adjoint();
  return DensityOperator(W / W.trace().real());
}

void BM_ClassicalEntropyBound(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const ProbArray p = random_distribution(rng, state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(entropy_lower_bound(p, 0.01));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ClassicalEntropyBound)->RangeMultiplier(8)->Range(64, 1 << 18)->Complexity();

void BM_QuantumEntropyBounds(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const int dim = static_cast<int>(state.range(0));
  for (auto _ : state) {
    state.PauseTiming();
    const DensityOperator rho = random_state(rng, dim);
    state.ResumeTiming();
    benchmark::DoNotOptimize(entropy_lower_bounds(rho, 0.05));
  }
}
BENCHMARK(BM_QuantumEntropyBounds)->Arg(4)->Arg(16)->Arg(64)->Arg(256);

void BM_GibbsSolve(benchmark::State& state) {
  const EnergySpectrum osc = EnergySpectrum::oscillator(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_beta(osc, 1.0));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GibbsSolve)->RangeMultiplier(4)->Range(64, 1 << 14)->Complexity();

void BM_OracleEntropyBall(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const ProbArray p = random_distribution(rng, state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(minimize_entropy_ball(p, 0.1, 7));
  }
}
BENCHMARK(BM_OracleEntropyBall)->Arg(8)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
