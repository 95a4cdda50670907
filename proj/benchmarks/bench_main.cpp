#include <benchmark/benchmark.h>

#include <vector>

#include "edi/ccdm.hpp"
#include "edi/fiber.hpp"
#include "edi/metrics.hpp"
#include "edi/rng.hpp"
#include "edi/sequence.hpp"
#include "edi/shaping.hpp"

using namespace edi;

namespace {

const AmplitudeAlphabet kPam4 = AmplitudeAlphabet::pam(4);

std::vector<bool> random_bits(std::size_t k, Rng& r) {
    std::vector<bool> b(k);
    for (auto&& x : b) x = r.below(2) == 1;
    return b;
}

void BM_CodecRoundTrip(benchmark::State& state) {
    const CcdmCodec codec(ps64_composition(std::size_t(state.range(0))));
    Rng r(1);
    const auto bits = random_bits(codec.input_bits(), r);
    for (auto _ : state) {
        auto cw = codec.encode_bits(bits);
        benchmark::DoNotOptimize(codec.decode_bits(cw));
    }
}
BENCHMARK(BM_CodecRoundTrip)->Arg(10)->Arg(100)->Arg(1000);

void BM_EmulatedSampling(benchmark::State& state) {
    const auto comp = ps64_composition(std::size_t(state.range(0)));
    const std::size_t blocks = 100000 / comp.blocklength();
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(sample_emulated_levels(comp, ++seed, blocks));
    state.SetItemsProcessed(std::int64_t(state.iterations() * blocks * comp.blocklength()));
}
BENCHMARK(BM_EmulatedSampling)->Arg(10)->Arg(1000);

EnergySequence bench_energies(std::size_t n, std::size_t t) {
    return energies(generate_ccdm_qam(ShapingSpec{kPam4, ps64_composition(n)}, t / n, 3));
}

void BM_WindowedEdi(benchmark::State& state) {
    const auto e = bench_energies(100, 1'000'000);
    const WindowSpec w(std::size_t(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(edi_empirical(e, w));
    state.SetItemsProcessed(std::int64_t(state.iterations() * e.size()));
}
BENCHMARK(BM_WindowedEdi)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_EmpiricalAutocorr(benchmark::State& state) {
    const auto e = bench_energies(100, 1'000'000);
    for (auto _ : state) benchmark::DoNotOptimize(empirical_autocorr(e, std::size_t(state.range(0))));
}
BENCHMARK(BM_EmpiricalAutocorr)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_AnalyticalEdi(benchmark::State& state) {
    const auto m = moments_from_composition(ps64_composition(10), kPam4).normalized();
    const WindowSpec w(std::size_t(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(edi_analytical_ccdm(m, 1000, w));
}
BENCHMARK(BM_AnalyticalEdi)->Arg(100)->Arg(10000);

void BM_Propagate(benchmark::State& state) {
    LinkConfig c;
    c.wdm_channels = 1;
    c.samples_per_symbol = 4;
    c.span_length = 20;
    c.step_size = 1000;
    const std::vector<SymbolSequence> tx{
        generate_ccdm_qam(ShapingSpec{kPam4, ps64_composition(10)}, std::size_t(state.range(0)) / 10, 5)};
    for (auto _ : state) benchmark::DoNotOptimize(propagate(tx, c, 1));
    state.SetItemsProcessed(std::int64_t(state.iterations() * state.range(0)));
}
BENCHMARK(BM_Propagate)->Arg(1 << 14)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
