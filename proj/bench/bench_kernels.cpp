// Serial reference vs OpenMP kernels on the shapes the models use:
// 683 x 10 (logistic regression), 120 x 200 (audio, desk scale),
// 500 x 1000 (random effects), 456 x 2900 (audio, full scale).
#include <benchmark/benchmark.h>

#include <random>

#include "soul/linalg.hpp"
#include "soul/models/random_effects.hpp"
#include "soul/harness/generators.hpp"

using namespace soul;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c) {
  std::mt19937_64 gen(r * 7919 + c);
  std::normal_distribution<double> n;
  Matrix m(r, c);
  for (auto& v : m.data()) v = n(gen);
  return m;
}

template <void (*Kernel)(const Matrix&, std::span<const double>, std::span<double>), bool Transposed>
void run(benchmark::State& state) {
  const auto r = static_cast<std::size_t>(state.range(0));
  const auto c = static_cast<std::size_t>(state.range(1));
  const Matrix a = random_matrix(r, c);
  const Vector x(Transposed ? r : c, 1.0);
  Vector y(Transposed ? c : r);
  for (auto _ : state) {
    Kernel(a, x, y);
    benchmark::DoNotOptimize(y.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(r * c));
}

void shapes(benchmark::internal::Benchmark* b) {
  b->Args({683, 10})->Args({120, 200})->Args({500, 1000})->Args({456, 2900});
}

void re_gradient(benchmark::State& state) {
  const RandomEffectsInstance inst = gen_random_effects_problem(0, RandomEffectsSpec{});
  const RandomEffectsModel model(inst.problem);
  Vector theta(inst.beta_true);
  theta.push_back(0.1);
  Vector x(5, 0.1), gx(5), gt(theta.size());
  for (auto _ : state) {
    model.grad_x_log_posterior(x, theta, gx);
    model.grad_theta_log_joint(x, theta, gt);
    benchmark::DoNotOptimize(gt.data());
  }
}

}  // namespace

BENCHMARK(run<linalg::serial::gemv, false>)->Name("gemv/serial")->Apply(shapes);
BENCHMARK(run<linalg::parallel::gemv, false>)->Name("gemv/parallel")->Apply(shapes);
BENCHMARK(run<linalg::serial::gemv_t, true>)->Name("gemv_t/serial")->Apply(shapes);
BENCHMARK(run<linalg::parallel::gemv_t, true>)->Name("gemv_t/parallel")->Apply(shapes);
BENCHMARK(re_gradient)->Name("random_effects/both_gradients");

BENCHMARK_MAIN();
