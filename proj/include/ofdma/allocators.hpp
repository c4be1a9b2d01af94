#pragma once

#include "ofdma/types.hpp"

namespace ofdma {

/// Greedy multiuser-diversity map: each subcarrier goes to the user with the
/// highest CNR on it, ties to the lowest user index.
Assignment assign_best_gain(const ChannelRealization& channel);

/// assign_best_gain plus a flat power split of total_power/N per subcarrier.
/// Serves as the unfairness baseline in the experiments.
AllocationResult bestgain_equal_power(const SystemConfig& config,
                                      const ChannelRealization& channel);

/// Proportional-rate allocation with the per-user power totals found by a
/// nested root search. Subcarrier phase: every user first takes its best
/// subcarrier, then the user furthest below its rate share picks next
/// (rates estimated at equal power per subcarrier). Power phase: bisection
/// on user 0's power total; each other user's total is matched by an inner
/// bisection so water-filled rates stay in the prescribed ratios and the
/// totals exhaust the budget.
AllocationResult rootfinding_allocate(const SystemConfig& config,
                                      const ChannelRealization& channel);

/// Low-complexity proportional-rate allocation. Subcarrier phase: quota
/// N_k proportional to the rate ratios, best-first picks up to the quota,
/// leftovers to the best user on each (at most one leftover per user until
/// everyone has one). Power phase: per-user totals from a linearized
/// high-SNR rate model over each user's effective flat channel, solved by
/// substitution, then water-filling within each user.
AllocationResult linear_allocate(const SystemConfig& config,
                                 const ChannelRealization& channel);

/// Joint allocation at equal power per subcarrier: each subcarrier granted
/// raises its owner's budget by total_power/N and the owner's water-filled
/// rate steers which user picks next.
AllocationResult joint_allocate(const SystemConfig& config,
                                const ChannelRealization& channel);

}  // namespace ofdma
