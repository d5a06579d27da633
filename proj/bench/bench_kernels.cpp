#include <benchmark/benchmark.h>

#include <array>
#include <cmath>

#include "kerrtda/kernels.hpp"
#include "kerrtda/rng.hpp"

namespace {

using namespace kerrtda;

// A noisy 2D loop, the typical shape of an embedded regular orbit.
PointCloud noisy_loop(std::size_t n) {
    Rng rng(42);
    PointCloud cloud(2);
    cloud.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double angle = 2.0 * M_PI * rng.uniform();
        const double r = 1.0 + 0.1 * (rng.uniform() - 0.5);
        const std::array<double, 2> p{r * std::cos(angle), r * std::sin(angle)};
        cloud.push_back(p);
    }
    return cloud;
}

template <auto Kernel>
void bm_pairwise(benchmark::State& state) {
    const PointCloud cloud = noisy_loop(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(cloud));
    state.SetComplexityN(state.range(0));
}

template <auto Kernel>
void bm_farthest_point(benchmark::State& state) {
    const PointCloud cloud = noisy_loop(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(cloud, 400, 0));
}

template <auto Kernel>
void bm_nearest(benchmark::State& state) {
    const PointCloud cloud = noisy_loop(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(cloud, -1.0));
}

}  // namespace

BENCHMARK(bm_pairwise<kernels::serial::pairwise_distances>)->Name("pairwise/serial")->Arg(400)->Arg(1000);
BENCHMARK(bm_pairwise<kernels::omp::pairwise_distances>)->Name("pairwise/omp")->Arg(400)->Arg(1000);
BENCHMARK(bm_farthest_point<kernels::serial::farthest_point_order>)->Name("maxmin/serial")->Arg(4000)->Arg(20000);
BENCHMARK(bm_farthest_point<kernels::omp::farthest_point_order>)->Name("maxmin/omp")->Arg(4000)->Arg(20000);
BENCHMARK(bm_nearest<kernels::serial::nearest_neighbors>)->Name("nearest/serial")->Arg(1000)->Arg(4000);
BENCHMARK(bm_nearest<kernels::omp::nearest_neighbors>)->Name("nearest/omp")->Arg(1000)->Arg(4000);

BENCHMARK_MAIN();
