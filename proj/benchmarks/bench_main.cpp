#include <benchmark/benchmark.h>

#include "sepkit/heads.hpp"
#include "sepkit/poset.hpp"
#include "sepkit/separability.hpp"
#include "sepkit/synth.hpp"

namespace {

void BM_FundamentalNumberExact(benchmark::State& state) {
    const auto k = static_cast<std::size_t>(state.range(0));
    const std::size_t n = std::size_t{1} << k;
    std::vector<sepkit::SeparableSet> sets;
    for (const auto& m : sepkit::construct_hypercube(k))
        sets.push_back(sepkit::separable_set(m, n));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sepkit::fundamental_number_exact(sets, n));
    }
}
BENCHMARK(BM_FundamentalNumberExact)->Arg(3)->Arg(4)->Arg(5);

void BM_TrainHead(benchmark::State& state) {
    sepkit::GaussianSpec spec;
    spec.means = {{0.0, 0.0}, {2.0, 1.0}};
    spec.sigma = 1.0;
    spec.samples_per_class = static_cast<std::size_t>(state.range(0));
    spec.seed = 1;
    const auto fs = sepkit::generate(spec);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sepkit::train_head(fs.classes[0], fs.classes[1], {}));
    }
}
BENCHMARK(BM_TrainHead)->Arg(100)->Arg(1000);

void BM_SeparabilityMatrix(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    sepkit::GaussianSpec spec;
    for (std::size_t c = 0; c < n; ++c) spec.means.push_back({3.0 * static_cast<double>(c)});
    spec.sigma = 1.0;
    spec.samples_per_class = 50;
    spec.seed = 2;
    const auto fs = sepkit::generate(spec);
    const auto bank = sepkit::train_bank(fs, {});
    for (auto _ : state) {
        benchmark::DoNotOptimize(sepkit::separability_matrix(fs, bank, 0.05));
    }
}
BENCHMARK(BM_SeparabilityMatrix)->Arg(4)->Arg(8);

void BM_HasseDiagram(benchmark::State& state) {
    const std::size_t n = 8;
    std::vector<sepkit::SeparableSet> sets;
    for (const auto& [p, m] : sepkit::hypercube_bank(3))
        sets.push_back(sepkit::separable_set(m, n));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sepkit::hasse_diagram(sets));
    }
}
BENCHMARK(BM_HasseDiagram);

}  // namespace

BENCHMARK_MAIN();
