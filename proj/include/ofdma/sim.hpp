#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ofdma/types.hpp"

namespace ofdma {

enum class Method { kRootfinding, kLinear, kJoint, kBestgainEqualPower, kProposed };

/// Canonical names: rootfinding, linear, joint, bestgain-equal-power, proposed.
std::string method_name(Method method);
Method parse_method(const std::string& name);

/// Comma-separated list of canonical names; "all" expands to every method.
std::vector<Method> parse_method_list(const std::string& text);

/// Everything needed to reproduce one experiment. Per-realization channels
/// are seeded with master_seed + realization index, so every method inside
/// one run sees the same channel stream.
struct ExperimentSpec {
    std::vector<Method> methods = {Method::kRootfinding, Method::kLinear, Method::kJoint,
                                   Method::kBestgainEqualPower, Method::kProposed};
    std::vector<int> user_counts = {4, 8, 12, 16};
    int num_subcarriers = 64;
    int num_realizations = 100;
    std::uint64_t master_seed = 1;
    double avg_snr_db = 38.0;
    double snr_gap = 3.3;                      // linear
    std::vector<double> ratio_pattern = {1.0}; // tiled across users
    int num_taps = 6;
    double total_power = 1.0;
    int rate_target_bits = 8;  // per user per symbol, margin-adaptive method only
    int max_bits = 6;
    bool gap_in_capacity = true;  // apply the SNR gap when evaluating capacity
    Execution execution = Execution::kParallel;

    void validate() const;
};

/// Builds the per-K system configuration: unit mean-square channel gain and
/// noise scaled so the average subchannel SNR at equal power is avg_snr_db.
SystemConfig make_config(const ExperimentSpec& spec, int num_users);

/// Runs one allocator on one channel draw.
AllocationResult run_method(Method method, const SystemConfig& config,
                            const ChannelRealization& channel,
                            Execution execution = Execution::kSerial);

struct CapacityRow {
    std::string method;
    int num_users = 0;
    double capacity_mean = 0.0;  // bits/s/Hz
    double capacity_se = 0.0;
    double deviation = 0.0;  // max_k |mean ratio_k - target_k|
    std::vector<double> ratios;  // mean normalized per-user rate shares
};

/// One row per (method, K) pair, methods outermost.
std::vector<CapacityRow> run_capacity_sweep(const ExperimentSpec& spec);

/// Single-K variant reporting per-user rate shares against the targets.
std::vector<CapacityRow> run_fairness_experiment(const ExperimentSpec& spec);

std::string to_csv(const std::vector<CapacityRow>& rows);
void write_csv(const std::vector<CapacityRow>& rows, const std::string& destination);

/// Reads a line-oriented `key = value` file into the spec. '#' starts a
/// comment. Unknown keys are rejected so typos cannot silently vanish.
void apply_config_file(const std::string& path, ExperimentSpec& spec);

}  // namespace ofdma
