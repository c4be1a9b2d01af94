#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ofdma/bitloading.hpp"
#include "ofdma/channel.hpp"
#include "ofdma/oracles.hpp"
#include "ofdma/params.hpp"
#include "ofdma/proposed.hpp"
#include "ofdma/sim.hpp"
#include "ofdma/waterfill.hpp"

namespace {

struct ExperimentCli {
    std::string methods;
    std::vector<int> users;
    int subcarriers = 0;
    int realizations = 0;
    std::uint64_t seed = 0;
    double snr_db = 0.0;
    double gap = 0.0;
    double gap_db = 0.0;
    double power = 0.0;
    std::vector<double> ratios;
    int taps = 0;
    int rate_target = 0;
    int bmax = 0;
    bool no_gap_in_capacity = false;
    bool serial = false;
    std::string out;
    std::string config;
};

void add_experiment_flags(CLI::App* cmd, ExperimentCli& cli) {
    cmd->add_option("--method", cli.methods,
                    "comma-separated methods (rootfinding, linear, joint, "
                    "bestgain-equal-power, proposed) or 'all'");
    cmd->add_option("--users", cli.users, "user counts K")->delimiter(',');
    cmd->add_option("--subcarriers", cli.subcarriers, "number of subcarriers N");
    cmd->add_option("--realizations", cli.realizations, "Monte-Carlo realizations");
    cmd->add_option("--seed", cli.seed, "master seed");
    cmd->add_option("--snr-db", cli.snr_db, "mean subchannel SNR in dB");
    auto* gap = cmd->add_option("--gap", cli.gap, "SNR gap, linear");
    auto* gap_db = cmd->add_option("--gap-db", cli.gap_db, "SNR gap in dB");
    gap->excludes(gap_db);
    gap_db->excludes(gap);
    cmd->add_option("--ratios", cli.ratios, "rate-ratio pattern, tiled across users")
        ->delimiter(',');
    cmd->add_option("--taps", cli.taps, "channel taps L");
    cmd->add_option("--rate-target", cli.rate_target, "bits per symbol per user (proposed)");
    cmd->add_option("--bmax", cli.bmax, "max bits per subcarrier");
    cmd->add_option("--power", cli.power, "total power budget, watts");
    cmd->add_flag("--no-gap-in-capacity", cli.no_gap_in_capacity,
                  "evaluate capacities without the SNR gap");
    cmd->add_flag("--serial", cli.serial, "run realizations serially");
    cmd->add_option("--out", cli.out, "CSV destination (stdout when omitted)");
    cmd->add_option("--config", cli.config, "key = value config file; flags override");
}

ofdma::ExperimentSpec build_spec(const CLI::App* cmd, const ExperimentCli& cli,
                                 ofdma::ExperimentSpec spec) {
    if (cmd->count("--config")) ofdma::apply_config_file(cli.config, spec);
    if (cmd->count("--method")) spec.methods = ofdma::parse_method_list(cli.methods);
    if (cmd->count("--users")) spec.user_counts = cli.users;
    if (cmd->count("--subcarriers")) spec.num_subcarriers = cli.subcarriers;
    if (cmd->count("--realizations")) spec.num_realizations = cli.realizations;
    if (cmd->count("--seed")) spec.master_seed = cli.seed;
    if (cmd->count("--snr-db")) spec.avg_snr_db = cli.snr_db;
    if (cmd->count("--gap")) spec.snr_gap = cli.gap;
    if (cmd->count("--gap-db")) spec.snr_gap = std::pow(10.0, cli.gap_db / 10.0);
    if (cmd->count("--ratios")) spec.ratio_pattern = cli.ratios;
    if (cmd->count("--taps")) spec.num_taps = cli.taps;
    if (cmd->count("--rate-target")) spec.rate_target_bits = cli.rate_target;
    if (cmd->count("--bmax")) spec.max_bits = cli.bmax;
    if (cmd->count("--power")) spec.total_power = cli.power;
    if (cli.no_gap_in_capacity) spec.gap_in_capacity = false;
    if (cli.serial) spec.execution = ofdma::Execution::kSerial;
    return spec;
}

void emit_rows(const std::vector<ofdma::CapacityRow>& rows, const std::string& out) {
    if (out.empty()) {
        std::cout << ofdma::to_csv(rows);
    } else {
        ofdma::write_csv(rows, out);
    }
}

int run_sweep(const CLI::App* cmd, const ExperimentCli& cli) {
    const ofdma::ExperimentSpec spec = build_spec(cmd, cli, ofdma::ExperimentSpec{});
    emit_rows(ofdma::run_capacity_sweep(spec), cli.out);
    return 0;
}

int run_fairness(const CLI::App* cmd, const ExperimentCli& cli) {
    ofdma::ExperimentSpec defaults;
    defaults.methods = {ofdma::Method::kRootfinding, ofdma::Method::kLinear,
                        ofdma::Method::kJoint, ofdma::Method::kBestgainEqualPower};
    defaults.user_counts = {16};
    defaults.ratio_pattern = {1.0, 2.0, 4.0};
    const ofdma::ExperimentSpec spec = build_spec(cmd, cli, defaults);
    const std::vector<ofdma::CapacityRow> rows = ofdma::run_fairness_experiment(spec);

    const int num_users = spec.user_counts.front();
    double ratio_sum = 0.0;
    for (int k = 0; k < num_users; ++k) {
        ratio_sum += spec.ratio_pattern[k % spec.ratio_pattern.size()];
    }
    std::cerr << "targets:";
    for (int k = 0; k < num_users; ++k) {
        char buffer[40];
        std::snprintf(buffer, sizeof buffer, "%.9g",
                      spec.ratio_pattern[k % spec.ratio_pattern.size()] / ratio_sum);
        std::cerr << ' ' << buffer;
    }
    std::cerr << '\n';

    emit_rows(rows, cli.out);
    return 0;
}

struct ParamsCli {
    std::uint64_t bandwidth = 10'000'000;
    int used = 840;
    std::string sampling_factor = "8/7";
    std::string cp_ratio = "1/8";
};

int run_params(const ParamsCli& cli) {
    ofdma::PrimitiveParams primitives;
    primitives.bandwidth_hz = cli.bandwidth;
    primitives.used_subcarriers = cli.used;
    primitives.sampling_factor = ofdma::parse_rational(cli.sampling_factor);
    primitives.cp_ratio = ofdma::parse_rational(cli.cp_ratio);
    const ofdma::DerivedParams derived = ofdma::derive_params(primitives);

    const auto line = [](const char* name, double value, const char* unit) {
        char buffer[48];
        std::snprintf(buffer, sizeof buffer, "%.9g", value);
        std::cout << name << ' ' << buffer << ' ' << unit << '\n';
    };
    std::cout << "fft_size " << derived.fft_size << " subcarriers\n";
    std::cout << "sampling_freq " << derived.sampling_freq_hz << " Hz\n";
    line("subcarrier_spacing", derived.subcarrier_spacing_hz, "Hz");
    line("useful_symbol_time", derived.useful_symbol_time_s, "s");
    line("guard_time", derived.guard_time_s, "s");
    line("symbol_time", derived.symbol_time_s, "s");
    line("sample_time", derived.sample_time_s, "s");
    return 0;
}

double next_unit(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

struct OracleCli {
    int instances = 100;
    std::uint64_t seed = 7;
};

int run_oracle(const OracleCli& cli) {
    bool all_ok = true;
    std::mt19937_64 rng(cli.seed);

    double worst_gap = 0.0;
    for (int i = 0; i < cli.instances; ++i) {
        const int m = 1 + static_cast<int>(rng() % 5);
        std::vector<double> cnr(m);
        for (double& h : cnr) h = 0.1 + 9.9 * next_unit(rng);
        const double budget = 0.1 + 4.9 * next_unit(rng);
        const ofdma::WaterfillSolution solution = ofdma::waterfill(cnr, budget);
        double achieved = 0.0;
        for (int n = 0; n < m; ++n) achieved += std::log2(1.0 + solution.powers[n] * cnr[n]);
        const double best = ofdma::waterfill_best_objective(cnr, budget);
        worst_gap = std::max(worst_gap, std::abs(best - achieved));
    }
    const bool wf_ok = worst_gap <= 1e-6;
    all_ok = all_ok && wf_ok;
    std::cout << "waterfill vs subset enumeration: " << (wf_ok ? "PASS" : "FAIL")
              << " (worst objective gap " << worst_gap << ")\n";

    int loading_checked = 0;
    double worst_excess = 0.0;
    for (int i = 0; i < cli.instances; ++i) {
        const int m = 1 + static_cast<int>(rng() % 4);
        const int max_bits = 1 + static_cast<int>(rng() % 4);
        std::vector<double> gains(m);
        for (double& g : gains) g = 0.2 + 4.8 * next_unit(rng);
        const int cap = std::min(8, m * max_bits);
        for (int target = 0; target <= cap; ++target) {
            const double greedy =
                ofdma::greedy_bitload(gains, target, 0.5, 2.0, max_bits).total_power();
            const double best = ofdma::min_power_bruteforce(gains, target, 0.5, 2.0, max_bits);
            worst_excess = std::max(worst_excess, greedy - best);
            ++loading_checked;
        }
    }
    const bool greedy_ok = worst_excess <= 1e-9;
    all_ok = all_ok && greedy_ok;
    std::cout << "greedy loading vs exhaustive search: " << (greedy_ok ? "PASS" : "FAIL")
              << " (" << loading_checked << " instances, worst excess " << worst_excess
              << ")\n";

    double worst_ratio = 1.0;
    for (int i = 0; i < cli.instances; ++i) {
        ofdma::SystemConfig config;
        config.num_users = 2;
        config.num_subcarriers = 4;
        config.total_power = 1.0;
        config.bandwidth = 1.0;
        config.noise_psd = 0.01;
        config.snr_gap = 2.0;
        config.rate_ratios = {1.0, 1.0};
        config.rate_targets = {1 + static_cast<int>(rng() % 4),
                               1 + static_cast<int>(rng() % 4)};
        config.max_bits_per_subcarrier = 2;
        const ofdma::ChannelRealization channel =
            ofdma::generate_channel(config, cli.seed + 1000 + i, 3);
        const ofdma::AllocationResult result = ofdma::proposed_allocate(config, channel);
        std::vector<double> average(2);
        for (int k = 0; k < 2; ++k) {
            const auto row = channel.cnr.row(k);
            for (double h : row) average[k] += h;
            average[k] /= static_cast<double>(row.size());
        }
        const ofdma::SubcarrierCounts counts = ofdma::determine_counts(config, average);
        const double best =
            ofdma::assignment_power_bruteforce(config, channel, counts.total);
        if (best > 0.0) worst_ratio = std::max(worst_ratio, result.total_power_used / best);
    }
    const bool proposed_ok = worst_ratio <= 1.10;
    all_ok = all_ok && proposed_ok;
    std::cout << "proposed vs assignment enumeration: " << (proposed_ok ? "PASS" : "FAIL")
              << " (worst power ratio " << worst_ratio << ")\n";

    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Downlink-OFDMA resource allocation experiments"};
    app.require_subcommand(1);

    ExperimentCli sweep_cli;
    CLI::App* sweep = app.add_subcommand("sweep", "mean total capacity versus user count");
    add_experiment_flags(sweep, sweep_cli);

    ExperimentCli fairness_cli;
    CLI::App* fairness =
        app.add_subcommand("fairness", "per-user rate shares against the targets");
    add_experiment_flags(fairness, fairness_cli);

    ParamsCli params_cli;
    CLI::App* params = app.add_subcommand("params", "derived OFDMA symbol parameters");
    params->add_option("--bw", params_cli.bandwidth, "nominal bandwidth, Hz");
    params->add_option("--nused", params_cli.used, "used subcarriers incl. DC");
    params->add_option("--sampling-factor", params_cli.sampling_factor, "rational, e.g. 8/7");
    params->add_option("--cp", params_cli.cp_ratio, "cyclic-prefix ratio: 1/32 1/16 1/8 1/4");

    OracleCli oracle_cli;
    CLI::App* oracle =
        app.add_subcommand("oracle", "brute-force cross-checks on small instances");
    oracle->add_option("--instances", oracle_cli.instances, "instances per check");
    oracle->add_option("--seed", oracle_cli.seed, "RNG seed for the instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(sweep)) return run_sweep(sweep, sweep_cli);
        if (app.got_subcommand(fairness)) return run_fairness(fairness, fairness_cli);
        if (app.got_subcommand(params)) return run_params(params_cli);
        if (app.got_subcommand(oracle)) return run_oracle(oracle_cli);
    } catch (const ofdma::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 3;
    } catch (const ofdma::ConvergenceError& e) {
        std::cerr << "no convergence: " << e.what() << '\n';
        return 4;
    } catch (const ofdma::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
