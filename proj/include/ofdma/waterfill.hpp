#pragma once

#include <span>
#include <vector>

#include "ofdma/types.hpp"

namespace ofdma {

/// Result of single-user water-filling. On every subcarrier with positive
/// power, power + 1/H equals the common water level; subcarriers left at
/// zero have 1/H at or above the level.
struct WaterfillSolution {
    std::vector<double> powers;  // watts, >= 0
    double water_level = 0.0;    // watts
    int active_count = 0;        // subcarriers with positive power

    double total_power() const;
};

/// Distributes `budget` watts over subcarriers with channel-to-noise ratios
/// `cnr` to maximize sum log2(1 + p*H). Exact closed form: candidates are
/// sorted by inverse CNR and the weakest are deactivated until the implied
/// level gives nonnegative power everywhere.
WaterfillSolution waterfill(std::span<const double> cnr, double budget);

/// Per-user spectral efficiency: sum over owned subcarriers of
/// (1/N) * log2(1 + p*H/gap), with N the total subcarrier count.
/// A gap of 1 is plain Shannon capacity.
double user_rate(std::span<const double> cnr, std::span<const double> powers,
                 int total_subcarriers, double snr_gap);

}  // namespace ofdma
