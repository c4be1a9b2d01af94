#pragma once

#include <limits>
#include <span>
#include <vector>

#include "ofdma/types.hpp"

namespace ofdma {

/// Integer bit and power loads for one user's set of subchannels.
/// Powers always satisfy s_m = (sigma^2 * gap / g_m) * (2^b_m - 1).
struct BitLoadResult {
    std::vector<int> bits;
    std::vector<double> powers;   // watts
    double water_level = 0.0;     // zero for the greedy loader
    int iterations = 0;

    double total_power() const;
    int total_bits() const;
};

/// Continuous bits supportable at power s on a subchannel with power gain g:
/// log2(1 + s*g / (sigma^2 * gap)).
double bits_for_power(double power, double gain, double noise_power, double snr_gap);

/// Integer bits implied by a water level: round-half-up of max(log2(level*g), 0),
/// capped at max_bits.
int bits_for_level(double level, double gain,
                   int max_bits = std::numeric_limits<int>::max());

/// Transmit power needed for an integer bit load: (sigma^2 * gap / g) * (2^b - 1).
double power_for_bits(int bits, double gain, double noise_power, double snr_gap);

struct WaterlevelOptions {
    double step_size = 1.0;
    int max_iterations = 500;
};

/// Rate-maximizing loader driven by a scalar water level. Each iteration maps
/// the level to integer bits and powers, then nudges the level by
/// step * (budget - used) / (active * sigma^2 * gap). Stops when the bit
/// vector is stable and within budget; on any exit over budget, bits are
/// stripped greedily (largest power saving first) until the budget holds, so
/// the returned load never exceeds it. Throws ConvergenceError only if even
/// stripping cannot reach the budget.
BitLoadResult waterlevel_bitload(std::span<const double> gains, double power_budget,
                                 double noise_power, double snr_gap, int max_bits,
                                 const WaterlevelOptions& options = {});

/// Minimum-power loader: places exactly target_bits one bit at a time, always
/// on the subchannel whose next bit costs the least additional power, skipping
/// subchannels already at max_bits. Throws InfeasibleError when
/// target_bits > M * max_bits.
BitLoadResult greedy_bitload(std::span<const double> gains, int target_bits,
                             double noise_power, double snr_gap, int max_bits);

}  // namespace ofdma
