#include <benchmark/benchmark.h>
#include <omp.h>

#include <vector>

#include "oscillab/kernel.hpp"
#include "oscillab/util.hpp"

namespace {

using namespace oscillab;

KernelMatrix test_kernel(int mx, int my, KernelStorageMode mode) {
  const PhasePtr phase = make_poly_phase(WPoly::monomial(2, 1, 1.0));
  CutoffSpec cs;
  cs.kind = CutoffKind::tensor_bump;
  const Cutoff cutoff = build_cutoff(cs);
  GridSpec grid;
  grid.x_lo = -1.0;
  grid.x_hi = 1.0;
  grid.y_lo = -1.0;
  grid.y_hi = 1.0;
  grid.mx = mx;
  grid.my = my;
  return build_kernel(phase, 256.0, cutoff, std::nullopt, grid, 0, mode);
}

std::vector<cd> random_vector(int n) {
  SplitMix64 rng(8412);
  std::vector<cd> v(n);
  for (auto& z : v) z = cd(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  return v;
}

void BM_kernel_fill(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    KernelMatrix K = test_kernel(512, 512, KernelStorageMode::dense);
    benchmark::DoNotOptimize(K.entry(0, 0));
  }
  omp_set_num_threads(omp_get_num_procs());
}
BENCHMARK(BM_kernel_fill)->Arg(1)->Arg(omp_get_num_procs())->Unit(benchmark::kMillisecond);

void BM_apply_parallel(benchmark::State& state) {
  const KernelMatrix K = test_kernel(768, 768, KernelStorageMode::dense);
  const std::vector<cd> in = random_vector(K.cols());
  std::vector<cd> out(K.rows());
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    K.apply(in.data(), out.data());
    benchmark::DoNotOptimize(out.data());
  }
  omp_set_num_threads(omp_get_num_procs());
}
BENCHMARK(BM_apply_parallel)->Arg(1)->Arg(omp_get_num_procs())->Unit(benchmark::kMillisecond);

void BM_apply_serial_reference(benchmark::State& state) {
  const KernelMatrix K = test_kernel(768, 768, KernelStorageMode::dense);
  const std::vector<cd> in = random_vector(K.cols());
  std::vector<cd> out(K.rows());
  for (auto _ : state) {
    K.apply_serial(in.data(), out.data());
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_apply_serial_reference)->Unit(benchmark::kMillisecond);

void BM_apply_matrix_free(benchmark::State& state) {
  const KernelMatrix K = test_kernel(768, 768, KernelStorageMode::matrix_free);
  const std::vector<cd> in = random_vector(K.cols());
  std::vector<cd> out(K.rows());
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    K.apply(in.data(), out.data());
    benchmark::DoNotOptimize(out.data());
  }
  omp_set_num_threads(omp_get_num_procs());
}
BENCHMARK(BM_apply_matrix_free)->Arg(1)->Arg(omp_get_num_procs())->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
