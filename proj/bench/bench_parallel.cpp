#include <benchmark/benchmark.h>

#include "ofdma/channel.hpp"
#include "ofdma/proposed.hpp"
#include "ofdma/sim.hpp"

namespace {

ofdma::SystemConfig swap_config() {
    ofdma::SystemConfig config;
    config.num_users = 8;
    config.num_subcarriers = 32;
    config.total_power = 1.0;
    config.bandwidth = 1.0;
    config.noise_psd = 0.01 * config.num_subcarriers;
    config.snr_gap = 2.0;
    config.rate_ratios.assign(config.num_users, 1.0);
    config.rate_targets.assign(config.num_users, 10);
    config.max_bits_per_subcarrier = 6;
    return config;
}

void bench_improve(benchmark::State& state, ofdma::Execution execution) {
    const ofdma::SystemConfig config = swap_config();
    const auto channel = ofdma::generate_channel(config, 7, 6);
    std::vector<double> average(config.num_users, 0.0);
    for (int k = 0; k < config.num_users; ++k) {
        for (double h : channel.cnr.row(k)) average[k] += h;
        average[k] /= config.num_subcarriers;
    }
    const auto counts = ofdma::determine_counts(config, average);
    const auto initial = ofdma::initial_allocation(channel, counts);
    ofdma::ImproveOptions options;
    options.execution = execution;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            ofdma::improve_allocation(initial, channel, config, options));
    }
}

void BM_ImproveSerial(benchmark::State& state) {
    bench_improve(state, ofdma::Execution::kSerial);
}

void BM_ImproveParallel(benchmark::State& state) {
    bench_improve(state, ofdma::Execution::kParallel);
}

ofdma::ExperimentSpec sweep_spec() {
    ofdma::ExperimentSpec spec;
    spec.user_counts = {4, 8};
    spec.num_subcarriers = 32;
    spec.num_realizations = 10;
    spec.num_taps = 4;
    return spec;
}

void bench_sweep(benchmark::State& state, ofdma::Execution execution) {
    ofdma::ExperimentSpec spec = sweep_spec();
    spec.execution = execution;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ofdma::run_capacity_sweep(spec));
    }
}

void BM_SweepSerial(benchmark::State& state) {
    bench_sweep(state, ofdma::Execution::kSerial);
}

void BM_SweepParallel(benchmark::State& state) {
    bench_sweep(state, ofdma::Execution::kParallel);
}

}  // namespace

BENCHMARK(BM_ImproveSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ImproveParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
