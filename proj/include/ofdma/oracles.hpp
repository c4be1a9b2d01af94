#pragma once

#include <span>
#include <vector>

#include "ofdma/types.hpp"

namespace ofdma {

/// Brute-force checks for the optimizing kernels. Each routine takes its own
/// route to the answer (enumeration over the full solution space) so it can
/// validate the fast path without sharing code with it. All are exponential
/// in the instance size and meant for small inputs only.

/// Best achievable sum rate Sigma log2(1 + p*H) for the given budget, found
/// by trying the closed-form level on every non-empty subset of subcarriers.
double waterfill_best_objective(std::span<const double> cnr, double budget);

/// Minimum total power over all integer bit vectors with the given sum and
/// a per-subcarrier cap. Throws InfeasibleError when no such vector exists.
double min_power_bruteforce(std::span<const double> gains, int target_bits,
                            double noise_power, double snr_gap, int max_bits);

/// Minimum total power over every assignment that gives user k exactly
/// counts[k] subcarriers, with each user's set loaded optimally.
double assignment_power_bruteforce(const SystemConfig& config,
                                   const ChannelRealization& channel,
                                   std::span<const int> counts);

/// Budget split (P_a, P_b) for two users so that their water-filled rates
/// sit in the ratio gamma_a : gamma_b, found by direct bisection on the
/// split point. Used to cross-check the proportional power phase.
std::pair<double, double> proportional_split_k2(std::span<const double> cnr_a,
                                                std::span<const double> cnr_b,
                                                double gamma_a, double gamma_b,
                                                double total_power,
                                                int total_subcarriers,
                                                double snr_gap);

}  // namespace ofdma
