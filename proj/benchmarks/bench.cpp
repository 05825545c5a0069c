#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include <random>
#include <vector>

#include "rfcount/detect.hpp"
#include "rfcount/features.hpp"
#include "rfcount/lda.hpp"
#include "rfcount/pipeline.hpp"
#include "rfcount/synth.hpp"
#include "rfcount/trace.hpp"

using namespace rfcount;

namespace {

SynthResult make_bench_trace(std::size_t n_events) {
    SynthConfig cfg;
    cfg.rng_seed = 1234;
    std::vector<int> groups;
    for (std::size_t i = 0; i < n_events; ++i) groups.push_back(static_cast<int>(i % 5) + 1);
    auto events = make_scenario(cfg, groups);
    std::int64_t last = 0;
    for (const auto& ev : events)
        last = std::max(last, ev.start_sample + ev.delay_r2 + ev.duration_r2);
    cfg.n_samples = static_cast<std::size_t>(last) + 60;
    return generate_trace(cfg, events);
}

FluctuationSeries random_series(std::size_t n) {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> noise(0.0, 2.0);
    FluctuationSeries f;
    f.aligned_to = "R1";
    f.values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) f.values.push_back(noise(rng));
    return f;
}

struct TrainingSet {
    Eigen::MatrixXd X;
    std::vector<int> labels;
};

TrainingSet random_training(std::size_t n_per_group) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> noise(0.0, 1.0);
    TrainingSet t;
    t.X.resize(static_cast<Eigen::Index>(5 * n_per_group), 10);
    for (int g = 0; g < 5; ++g)
        for (std::size_t i = 0; i < n_per_group; ++i) {
            Eigen::Index row = g * static_cast<Eigen::Index>(n_per_group) + i;
            for (int j = 0; j < 10; ++j) t.X(row, j) = 3.0 * g + noise(rng);
            t.labels.push_back(g + 1);
        }
    return t;
}

void BM_Fluctuations(benchmark::State& state) {
    SynthResult r = make_bench_trace(40);
    const ReceiverStream& stream = r.trace.at("R1");
    for (auto _ : state) benchmark::DoNotOptimize(fluctuations(stream));
    state.SetItemsProcessed(state.iterations() * stream.samples.size());
}
BENCHMARK(BM_Fluctuations);

void BM_WindowStats(benchmark::State& state) {
    FluctuationSeries f = random_series(100000);
    for (auto _ : state) benchmark::DoNotOptimize(window_stats(f, 10));
    state.SetItemsProcessed(state.iterations() * f.values.size());
}
BENCHMARK(BM_WindowStats);

void BM_DetectAndSegment(benchmark::State& state) {
    SynthResult r = make_bench_trace(40);
    auto stats = window_stats(fluctuations(r.trace.at("R1")), 10);
    for (auto _ : state) {
        auto decisions = detect(stats, DetectorMethod::std_threshold);
        benchmark::DoNotOptimize(
            segment_events(stats, decisions, DetectorMethod::std_threshold, "R1"));
    }
    state.SetItemsProcessed(state.iterations() * stats.size());
}
BENCHMARK(BM_DetectAndSegment);

void BM_LdaFit(benchmark::State& state) {
    TrainingSet t = random_training(50);
    for (auto _ : state) benchmark::DoNotOptimize(lda::fit(t.X, t.labels));
}
BENCHMARK(BM_LdaFit);

void BM_Classify(benchmark::State& state) {
    TrainingSet t = random_training(50);
    lda::Model model = lda::fit(t.X, t.labels);
    Eigen::VectorXd x = t.X.row(123).transpose();
    for (auto _ : state) benchmark::DoNotOptimize(lda::classify(model, x));
}
BENCHMARK(BM_Classify);

void BM_RunCount(benchmark::State& state) {
    SynthResult r = make_bench_trace(20);
    TrainingSet t = random_training(50);
    lda::Model model = lda::fit(t.X, t.labels);
    for (auto _ : state) benchmark::DoNotOptimize(run_count(r.trace, model));
    state.SetItemsProcessed(state.iterations() * r.trace.total_samples());
}
BENCHMARK(BM_RunCount);

void BM_TraceRoundTrip(benchmark::State& state) {
    SynthResult r = make_bench_trace(20);
    std::string csv = serialize_trace(r.trace);
    for (auto _ : state) benchmark::DoNotOptimize(parse_trace(csv));
    state.SetBytesProcessed(state.iterations() * csv.size());
}
BENCHMARK(BM_TraceRoundTrip);

}  // namespace

BENCHMARK_MAIN();
