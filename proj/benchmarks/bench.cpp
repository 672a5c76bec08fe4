#include <benchmark/benchmark.h>

#include <numbers>

#include "hcontract/reach.hpp"

using namespace hcontract;

namespace {

void BM_Expm3(benchmark::State& state) {
  const Matrix a = hat3(Vector{0.3, -1.1, 0.7});
  for (auto _ : state) benchmark::DoNotOptimize(expm(a));
}
BENCHMARK(BM_Expm3);

void BM_SymEigMax(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = 1.0 / (1.0 + static_cast<double>(i + 2 * j));
  for (auto _ : state) benchmark::DoNotOptimize(sym_eig_max(m));
}
BENCHMARK(BM_SymEigMax)->Arg(2)->Arg(3)->Arg(6);

void BM_LinearizeSphereFd(benchmark::State& state) {
  const auto s = make_sphere2();
  const auto f = sphere_spiral(s);
  const Matrix g = expm(0.4 * so3_basis()[0]);
  for (auto _ : state) benchmark::DoNotOptimize(linearize(f, s, g));
}
BENCHMARK(BM_LinearizeSphereFd);

void BM_RKMK4Step(benchmark::State& state) {
  const auto so3 = make_so3_biinvariant();
  const auto f = open_loop_field(so3, attitude_demo_input);
  for (auto _ : state) benchmark::DoNotOptimize(integrate(f, so3, Matrix::identity(3), 0.01, 0.01));
}
BENCHMARK(BM_RKMK4Step);

void BM_CertifyCap(benchmark::State& state) {
  const auto s = make_sphere2();
  const auto f = sphere_height_gradient(s);
  const auto n = static_cast<std::size_t>(state.range(0));
  const Region cap = Region::polar_cap(std::numbers::pi / 3, n, n, Matrix::identity(3));
  CertifyOptions opt;
  opt.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(certify_region(f, s, cap, -0.5, opt));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_CertifyCap)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
