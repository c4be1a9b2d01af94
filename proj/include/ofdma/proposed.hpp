#pragma once

#include <climits>
#include <span>

#include "ofdma/types.hpp"

namespace ofdma {

/// How many subcarriers each user gets before any are placed: the minimum
/// needed to carry its bit target at the per-subcarrier cap, plus extras
/// handed out to whoever saves the most power by spreading bits thinner.
struct SubcarrierCounts {
    std::vector<int> minimum;
    std::vector<int> extra;
    std::vector<int> total;
};

/// Splits the N subcarriers into per-user counts. minimum[k] is
/// ceil(rate_target[k] / max_bits); every remaining subcarrier goes, one at
/// a time, to the user with the largest estimated power saving from one more
/// subcarrier at its average gain. Throws InfeasibleError when even the
/// minima do not fit.
SubcarrierCounts determine_counts(const SystemConfig& config,
                                  std::span<const double> average_cnr);

/// Constructive initial placement. Users take turns in index order; on its
/// turn a user examines the next subcarrier in its own best-gain-first list
/// and claims it if still free, otherwise the turn passes. Users stop once
/// their count is reached.
Assignment initial_allocation(const ChannelRealization& channel,
                              const SubcarrierCounts& counts);

struct ImproveOptions {
    Execution execution = Execution::kSerial;
    int max_swaps = INT_MAX;
};

struct ImproveResult {
    Assignment assignment;
    int swaps = 0;
};

/// Pairwise-swap local search on a complete assignment. Every candidate
/// exchange of two subcarriers between two users is scored by the change in
/// total transmit power, with each touched user re-loaded by greedy_bitload
/// at its bit target (untouched users keep their cached loads). The single
/// best strictly-improving swap is applied per round until none remains.
/// Per-user counts never change. The candidate scan runs serially or under
/// OpenMP; both pick the identical swap (ties broken lexicographically).
ImproveResult improve_allocation(const Assignment& assignment,
                                 const ChannelRealization& channel,
                                 const SystemConfig& config,
                                 const ImproveOptions& options = {});

/// Full margin-adaptive pipeline: counts, constructive placement, swap
/// improvement, then greedy bit loading per user. Achieved bits equal the
/// per-user targets exactly; powers follow from the loaded bits.
AllocationResult proposed_allocate(const SystemConfig& config,
                                   const ChannelRealization& channel,
                                   Execution execution = Execution::kSerial);

}  // namespace ofdma
