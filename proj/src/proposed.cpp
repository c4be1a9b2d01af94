#include "ofdma/proposed.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ofdma/bitloading.hpp"
#include "ofdma/waterfill.hpp"

namespace ofdma {

namespace {

// Flat-gain estimate of the power saved by spreading `bits` over one more
// subcarrier: c(2^{R/c}-1) - (c+1)(2^{R/(c+1)}-1), scaled by the cost of a
// unit of SNR at the user's average gain.
double extra_subcarrier_saving(int bits, int count, double average_cnr, double snr_gap) {
    if (bits <= 0) return 0.0;
    const double c = static_cast<double>(count);
    const double before = c * (std::exp2(bits / c) - 1.0);
    const double after = (c + 1.0) * (std::exp2(bits / (c + 1.0)) - 1.0);
    return snr_gap / average_cnr * (before - after);
}

std::vector<double> user_power_gains(const ChannelRealization& channel, int user,
                                     const std::vector<int>& subs) {
    std::vector<double> gains(subs.size());
    for (std::size_t i = 0; i < subs.size(); ++i) {
        const double h = channel.gains(user, subs[i]);
        gains[i] = h * h;
    }
    return gains;
}

double load_power(const ChannelRealization& channel, const SystemConfig& config, int user,
                  const std::vector<int>& subs) {
    const std::vector<double> gains = user_power_gains(channel, user, subs);
    return greedy_bitload(gains, config.rate_targets[user], channel.noise_power,
                          config.snr_gap, config.max_bits_per_subcarrier)
        .total_power();
}

struct SwapCandidate {
    double reduction = -1.0;
    int user_a = 0, user_b = 0;
    int sub_a = 0, sub_b = 0;
};

// Strict total order: larger reduction wins, exact ties go to the
// lexicographically smallest (user_a, user_b, sub_a, sub_b).
bool better_candidate(const SwapCandidate& lhs, const SwapCandidate& rhs) {
    if (lhs.reduction != rhs.reduction) return lhs.reduction > rhs.reduction;
    if (lhs.user_a != rhs.user_a) return lhs.user_a < rhs.user_a;
    if (lhs.user_b != rhs.user_b) return lhs.user_b < rhs.user_b;
    if (lhs.sub_a != rhs.sub_a) return lhs.sub_a < rhs.sub_a;
    return lhs.sub_b < rhs.sub_b;
}

struct SwapScanContext {
    const ChannelRealization* channel;
    const SystemConfig* config;
    const std::vector<std::vector<int>>* subs;
    const std::vector<double>* power;
};

SwapCandidate evaluate_pair(const SwapScanContext& ctx, int a, int b) {
    SwapCandidate best;
    const std::vector<int>& subs_a = (*ctx.subs)[a];
    const std::vector<int>& subs_b = (*ctx.subs)[b];
    std::vector<int> trial_a = subs_a;
    std::vector<int> trial_b = subs_b;
    for (std::size_t i = 0; i < subs_a.size(); ++i) {
        for (std::size_t j = 0; j < subs_b.size(); ++j) {
            trial_a[i] = subs_b[j];
            trial_b[j] = subs_a[i];
            const double swapped = load_power(*ctx.channel, *ctx.config, a, trial_a) +
                                   load_power(*ctx.channel, *ctx.config, b, trial_b);
            const double reduction = (*ctx.power)[a] + (*ctx.power)[b] - swapped;
            const SwapCandidate candidate{reduction, a, b, subs_a[i], subs_b[j]};
            if (better_candidate(candidate, best)) best = candidate;
            trial_a[i] = subs_a[i];
            trial_b[j] = subs_b[j];
        }
    }
    return best;
}

SwapCandidate best_swap_serial(const SwapScanContext& ctx,
                               const std::vector<std::pair<int, int>>& pairs) {
    SwapCandidate best;
    for (const auto& [a, b] : pairs) {
        const SwapCandidate candidate = evaluate_pair(ctx, a, b);
        if (better_candidate(candidate, best)) best = candidate;
    }
    return best;
}

SwapCandidate best_swap_parallel(const SwapScanContext& ctx,
                                 const std::vector<std::pair<int, int>>& pairs) {
    SwapCandidate best;
#ifdef _OPENMP
#pragma omp parallel
    {
        SwapCandidate local;
#pragma omp for schedule(dynamic) nowait
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const SwapCandidate candidate = evaluate_pair(ctx, pairs[i].first, pairs[i].second);
            if (better_candidate(candidate, local)) local = candidate;
        }
#pragma omp critical
        {
            // Candidates are bitwise identical across schedules, and the
            // comparison is a total order, so the merge order cannot matter.
            if (better_candidate(local, best)) best = local;
        }
    }
#else
    best = best_swap_serial(ctx, pairs);
#endif
    return best;
}

}  // namespace

SubcarrierCounts determine_counts(const SystemConfig& config,
                                  std::span<const double> average_cnr) {
    config.validate();
    const int num_users = config.num_users;
    if (config.rate_targets.size() != static_cast<std::size_t>(num_users))
        throw std::invalid_argument("determine_counts: rate_targets required per user");
    if (average_cnr.size() != static_cast<std::size_t>(num_users))
        throw std::invalid_argument("determine_counts: one average CNR per user required");
    for (double g : average_cnr)
        if (!(g > 0.0)) throw std::invalid_argument("determine_counts: average CNR must be > 0");

    SubcarrierCounts counts;
    counts.minimum.resize(num_users);
    counts.extra.assign(num_users, 0);
    int minimum_sum = 0;
    for (int k = 0; k < num_users; ++k) {
        const int target = config.rate_targets[k];
        counts.minimum[k] =
            (target + config.max_bits_per_subcarrier - 1) / config.max_bits_per_subcarrier;
        minimum_sum += counts.minimum[k];
    }
    if (minimum_sum > config.num_subcarriers)
        throw InfeasibleError("determine_counts: " + std::to_string(minimum_sum) +
                              " subcarriers needed for the bit targets but only " +
                              std::to_string(config.num_subcarriers) + " exist");

    counts.total = counts.minimum;
    for (int spare = config.num_subcarriers - minimum_sum; spare > 0; --spare) {
        int best = 0;
        double best_saving = -1.0;
        for (int k = 0; k < num_users; ++k) {
            const double saving = extra_subcarrier_saving(
                config.rate_targets[k], counts.total[k], average_cnr[k], config.snr_gap);
            if (saving > best_saving) {
                best_saving = saving;
                best = k;
            }
        }
        ++counts.extra[best];
        ++counts.total[best];
    }
    return counts;
}

Assignment initial_allocation(const ChannelRealization& channel,
                              const SubcarrierCounts& counts) {
    channel.validate();
    const int num_users = static_cast<int>(channel.cnr.rows());
    const int num_subcarriers = static_cast<int>(channel.cnr.cols());
    if (counts.total.size() != static_cast<std::size_t>(num_users))
        throw std::invalid_argument("initial_allocation: counts do not match the channel");
    if (std::accumulate(counts.total.begin(), counts.total.end(), 0) != num_subcarriers)
        throw std::invalid_argument("initial_allocation: counts must cover every subcarrier");

    // Per-user preference lists, best CNR first, ties to the lower index.
    std::vector<std::vector<int>> preference(num_users);
    for (int k = 0; k < num_users; ++k) {
        preference[k].resize(num_subcarriers);
        std::iota(preference[k].begin(), preference[k].end(), 0);
        std::stable_sort(preference[k].begin(), preference[k].end(),
                         [&](int a, int b) { return channel.cnr(k, a) > channel.cnr(k, b); });
    }

    Assignment assignment(num_subcarriers);
    std::vector<int> cursor(num_users, 0);
    std::vector<int> held(num_users, 0);
    int assigned = 0;
    while (assigned < num_subcarriers) {
        for (int k = 0; k < num_users && assigned < num_subcarriers; ++k) {
            if (held[k] == counts.total[k]) continue;  // this user is done
            const int n = preference[k][cursor[k]];
            ++cursor[k];
            if (assignment.owner[n] != kUnassigned) continue;  // taken; turn passes
            assignment.owner[n] = k;
            ++held[k];
            ++assigned;
        }
    }
    return assignment;
}

ImproveResult improve_allocation(const Assignment& assignment,
                                 const ChannelRealization& channel,
                                 const SystemConfig& config,
                                 const ImproveOptions& options) {
    config.validate();
    channel.validate();
    if (config.rate_targets.size() != static_cast<std::size_t>(config.num_users))
        throw std::invalid_argument("improve_allocation: rate_targets required per user");
    if (!assignment.complete())
        throw std::invalid_argument("improve_allocation: assignment must be complete");

    const int num_users = config.num_users;
    std::vector<std::vector<int>> subs(num_users);
    for (int k = 0; k < num_users; ++k) {
        subs[k] = assignment.subcarriers_of(k);
        // Counts must already carry each user's target or no swap can fix it.
        const long long capacity = static_cast<long long>(subs[k].size()) *
                                   config.max_bits_per_subcarrier;
        if (config.rate_targets[k] > capacity)
            throw InfeasibleError("improve_allocation: user " + std::to_string(k) +
                                  " cannot fit its bit target");
    }

    std::vector<double> power(num_users);
    for (int k = 0; k < num_users; ++k) power[k] = load_power(channel, config, k, subs[k]);

    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < num_users; ++a)
        for (int b = a + 1; b < num_users; ++b)
            if (!subs[a].empty() && !subs[b].empty()) pairs.emplace_back(a, b);

    ImproveResult result;
    result.assignment = assignment;
    const SwapScanContext ctx{&channel, &config, &subs, &power};
    while (result.swaps < options.max_swaps) {
        const SwapCandidate best = options.execution == Execution::kParallel
                                       ? best_swap_parallel(ctx, pairs)
                                       : best_swap_serial(ctx, pairs);
        const double current_total = std::accumulate(power.begin(), power.end(), 0.0);
        // Tiny relative threshold so float noise cannot drive a swap cycle.
        if (best.reduction <= 1e-12 * current_total) break;

        auto& subs_a = subs[best.user_a];
        auto& subs_b = subs[best.user_b];
        *std::find(subs_a.begin(), subs_a.end(), best.sub_a) = best.sub_b;
        *std::find(subs_b.begin(), subs_b.end(), best.sub_b) = best.sub_a;
        std::sort(subs_a.begin(), subs_a.end());
        std::sort(subs_b.begin(), subs_b.end());
        result.assignment.owner[best.sub_a] = best.user_b;
        result.assignment.owner[best.sub_b] = best.user_a;
        power[best.user_a] = load_power(channel, config, best.user_a, subs_a);
        power[best.user_b] = load_power(channel, config, best.user_b, subs_b);
        ++result.swaps;
    }
    return result;
}

AllocationResult proposed_allocate(const SystemConfig& config,
                                   const ChannelRealization& channel,
                                   Execution execution) {
    config.validate();
    channel.validate();
    if (config.rate_targets.size() != static_cast<std::size_t>(config.num_users))
        throw std::invalid_argument("proposed_allocate: rate_targets required per user");

    std::vector<double> average_cnr(config.num_users);
    for (int k = 0; k < config.num_users; ++k) {
        const auto row = channel.cnr.row(k);
        average_cnr[k] =
            std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size());
    }

    const SubcarrierCounts counts = determine_counts(config, average_cnr);
    const Assignment initial = initial_allocation(channel, counts);
    const ImproveResult improved =
        improve_allocation(initial, channel, config, {.execution = execution});

    AllocationResult result;
    result.assignment = improved.assignment;
    result.power = Matrix(config.num_users, config.num_subcarriers);
    result.rates.assign(config.num_users, 0.0);
    result.bits.assign(config.num_subcarriers, 0);
    for (int k = 0; k < config.num_users; ++k) {
        const std::vector<int> subs = result.assignment.subcarriers_of(k);
        if (subs.empty()) continue;
        const std::vector<double> gains = user_power_gains(channel, k, subs);
        const BitLoadResult load =
            greedy_bitload(gains, config.rate_targets[k], channel.noise_power,
                           config.snr_gap, config.max_bits_per_subcarrier);
        std::vector<double> cnr(subs.size());
        for (std::size_t i = 0; i < subs.size(); ++i) {
            result.bits[subs[i]] = load.bits[i];
            result.power(k, subs[i]) = load.powers[i];
            cnr[i] = channel.cnr(k, subs[i]);
        }
        result.rates[k] =
            user_rate(cnr, load.powers, config.num_subcarriers, config.snr_gap);
        result.total_power_used += load.total_power();
    }
    return result;
}

}  // namespace ofdma
