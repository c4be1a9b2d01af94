#include "ofdma/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ofdma {

double WaterfillSolution::total_power() const {
    return std::accumulate(powers.begin(), powers.end(), 0.0);
}

WaterfillSolution waterfill(std::span<const double> cnr, double budget) {
    const std::size_t m = cnr.size();
    for (double h : cnr)
        if (!(h > 0.0) || !std::isfinite(h))
            throw std::invalid_argument("waterfill: CNR values must be finite and > 0");
    if (budget < 0.0 || !std::isfinite(budget))
        throw std::invalid_argument("waterfill: budget must be finite and >= 0");
    if (m == 0) {
        if (budget > 0.0)
            throw std::invalid_argument("waterfill: positive budget but no subcarriers");
        return {};
    }

    std::vector<double> inverse(m);
    for (std::size_t i = 0; i < m; ++i) inverse[i] = 1.0 / cnr[i];

    WaterfillSolution solution;
    solution.powers.assign(m, 0.0);

    if (budget == 0.0) {
        solution.water_level = *std::min_element(inverse.begin(), inverse.end());
        return solution;
    }

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return inverse[a] < inverse[b]; });

    // Level for an active set of the `active` strongest subcarriers:
    // mu = (budget + sum of their 1/H) / active. Shrink the set while the
    // weakest member would get nonpositive power.
    std::size_t active = m;
    double inverse_sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) inverse_sum += inverse[order[i]];
    double level = (budget + inverse_sum) / static_cast<double>(active);
    while (active > 1 && level <= inverse[order[active - 1]]) {
        inverse_sum -= inverse[order[active - 1]];
        --active;
        level = (budget + inverse_sum) / static_cast<double>(active);
    }

    for (std::size_t i = 0; i < active; ++i) {
        const double p = level - inverse[order[i]];
        solution.powers[order[i]] = std::max(p, 0.0);
    }
    solution.water_level = level;
    solution.active_count = 0;
    for (double p : solution.powers)
        if (p > 0.0) ++solution.active_count;
    return solution;
}

double user_rate(std::span<const double> cnr, std::span<const double> powers,
                 int total_subcarriers, double snr_gap) {
    if (cnr.size() != powers.size())
        throw std::invalid_argument("user_rate: CNR and power lists must match in length");
    if (total_subcarriers < 1)
        throw std::invalid_argument("user_rate: total_subcarriers must be >= 1");
    if (!(snr_gap >= 1.0))
        throw std::invalid_argument("user_rate: snr_gap must be >= 1");
    double rate = 0.0;
    for (std::size_t i = 0; i < cnr.size(); ++i)
        rate += std::log2(1.0 + powers[i] * cnr[i] / snr_gap);
    return rate / total_subcarriers;
}

}  // namespace ofdma
