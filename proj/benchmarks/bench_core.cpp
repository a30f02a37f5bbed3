#include <benchmark/benchmark.h>

#include "tentkit/coefficients.hpp"
#include "tentkit/families.hpp"
#include "tentkit/funcspaces.hpp"
#include "tentkit/semigroup.hpp"
#include "tentkit/spectral.hpp"

using namespace tentkit;

namespace {

GridSpec grid_for(int n, int points)
{
    const double h = 1.0 / points;
    return GridSpec::make(n, 1.0, points, 4.0 * h * h, 1.0 / 16.0, 17);
}

// Arguments: route, n, points.
void BM_SemigroupApply(benchmark::State& state)
{
    const auto method = static_cast<PropagationMethod>(state.range(0));
    const GridSpec g = grid_for(static_cast<int>(state.range(1)), static_cast<int>(state.range(2)));
    const char* preset = method == PropagationMethod::fourier ? "identity" : "checkerboard";
    const Semigroup sg(DiscreteGenerator(make_preset(preset, g, {})), method);
    const SpatialField f = bandlimited_field(g, 3, {2, 8, 8});
    const double t = 16.0 * g.h() * g.h();
    for (auto _ : state) benchmark::DoNotOptimize(sg.apply(f, t));
    state.SetLabel(to_string(method));
}
BENCHMARK(BM_SemigroupApply)
    ->Args({int(PropagationMethod::fourier), 1, 256})
    ->Args({int(PropagationMethod::hermitian_eigen), 1, 256})
    ->Args({int(PropagationMethod::pade), 1, 256})
    ->Args({int(PropagationMethod::uniformization), 1, 256})
    ->Args({int(PropagationMethod::fourier), 2, 32})
    ->Args({int(PropagationMethod::hermitian_eigen), 2, 32})
    ->Unit(benchmark::kMicrosecond);

void BM_TentNorm(benchmark::State& state)
{
    const GridSpec g = grid_for(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const SpaceTimeField E = heat_extension(bandlimited_field(g, 5, {2, 8, 8}), HeatSymbol::discrete);
    TentNormSpec spec;
    spec.beta = 0.0;
    spec.p = Exponent::finite(1.0);
    for (auto _ : state) benchmark::DoNotOptimize(tent_norm(E, spec));
}
BENCHMARK(BM_TentNorm)->Args({1, 256})->Args({2, 32})->Unit(benchmark::kMillisecond);

void BM_LittlewoodPaley(benchmark::State& state)
{
    const GridSpec g = grid_for(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const SpatialField f = bandlimited_field(g, 7, {2, 8, 8});
    const LPFamily fam = LPFamily::for_grid(g);
    const SpaceParams sp = SpaceParams::from_s(-0.5, Exponent::finite(1.5));
    for (auto _ : state) {
        benchmark::DoNotOptimize(hardy_sobolev_norm(f, sp, fam));
        benchmark::DoNotOptimize(besov_norm(f, sp, fam));
    }
}
BENCHMARK(BM_LittlewoodPaley)->Args({1, 256})->Args({2, 64})->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
