// Microbenchmarks: detector throughput, codebook enumeration, bound evaluation.
#include <benchmark/benchmark.h>

#include <cstddef>
#include <utility>
#include <vector>

#include "icm/analysis.hpp"
#include "icm/channel.hpp"
#include "icm/codec.hpp"
#include "icm/detect.hpp"
#include "icm/rng.hpp"

namespace {

using namespace icm;

// A pool of pre-drawn fading + noise realizations so the detectors see fresh
// inputs without generation cost dominating the measurement.
struct DetectFixture {
    IcmParams params;
    double n0;
    std::vector<std::vector<cplx>> gains;
    std::vector<std::vector<cplx>> observations;
    std::size_t cursor = 0;

    explicit DetectFixture(const IcmParams& p, double snr_db, std::size_t pool = 512)
        : params(p), n0(n0_from_snr(p, {snr_db, SnrRef::per_symbol})) {
        const std::vector<Codeword> book = enumerate_codebook(p, true);
        RngStream rng(9, StreamPurpose::test, 0);
        for (std::size_t b = 0; b < pool; ++b) {
            ChannelRealization ch{draw_channel(p.n, rng), n0};
            std::vector<cplx> y = transmit(book[b % book.size()], ch, rng);
            gains.push_back(std::move(ch.gains));
            observations.push_back(std::move(y));
        }
    }

    std::size_t next() { return cursor = (cursor + 1) % observations.size(); }
};

void bm_detect_ml(benchmark::State& state, const IcmParams& p) {
    DetectFixture fx(p, 20.0);
    MlDetector det(p);
    for (auto _ : state) {
        const std::size_t s = fx.next();
        benchmark::DoNotOptimize(det.detect(fx.observations[s], fx.gains[s]));
    }
    state.SetItemsProcessed(state.iterations());
}

void bm_detect_lcml(benchmark::State& state, const IcmParams& p, LlrMode mode) {
    DetectFixture fx(p, 20.0);
    LcmlDetector det(p, mode);
    for (auto _ : state) {
        const std::size_t s = fx.next();
        benchmark::DoNotOptimize(det.detect(fx.observations[s], fx.gains[s], fx.n0));
    }
    state.SetItemsProcessed(state.iterations());
}

void bm_enumerate(benchmark::State& state, const IcmParams& p) {
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_codebook(p, true));
    state.SetItemsProcessed(state.iterations());
}

void bm_union_bound(benchmark::State& state, const IcmParams& p) {
    const std::vector<double> grid{10, 20, 30, 40};
    for (auto _ : state)
        benchmark::DoNotOptimize(union_bound_ber(p, grid, SnrRef::per_symbol));
    state.SetItemsProcessed(state.iterations());
}

const IcmParams kSmall = IcmParams::payload(4, 2, 5, 2);
const IcmParams kLarge = IcmParams::payload(4, 3, 8, 4);
const IcmParams kDiversity = IcmParams::diversity(4, 3, 8);

}  // namespace

BENCHMARK_CAPTURE(bm_detect_ml, icm4252, kSmall);
BENCHMARK_CAPTURE(bm_detect_ml, icm4384, kLarge);
BENCHMARK_CAPTURE(bm_detect_ml, icm438d, kDiversity);
BENCHMARK_CAPTURE(bm_detect_lcml, icm4252_exact, kSmall, LlrMode::exact);
BENCHMARK_CAPTURE(bm_detect_lcml, icm4252_approx, kSmall, LlrMode::approx);
BENCHMARK_CAPTURE(bm_detect_lcml, icm4384_exact, kLarge, LlrMode::exact);
BENCHMARK_CAPTURE(bm_enumerate, icm4252, kSmall);
BENCHMARK_CAPTURE(bm_enumerate, icm4384, kLarge);
BENCHMARK_CAPTURE(bm_union_bound, icm4252, kSmall);
BENCHMARK_CAPTURE(bm_union_bound, icm4342, IcmParams::payload(4, 3, 4, 2));

BENCHMARK_MAIN();
