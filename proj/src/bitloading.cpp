#include "ofdma/bitloading.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace ofdma {

namespace {

void check_noise_and_gap(double noise_power, double snr_gap) {
    if (!(noise_power > 0.0))
        throw std::invalid_argument("noise_power must be > 0");
    if (!(snr_gap >= 1.0))
        throw std::invalid_argument("snr_gap must be >= 1");
}

}  // namespace

double BitLoadResult::total_power() const {
    return std::accumulate(powers.begin(), powers.end(), 0.0);
}

int BitLoadResult::total_bits() const {
    return std::accumulate(bits.begin(), bits.end(), 0);
}

double bits_for_power(double power, double gain, double noise_power, double snr_gap) {
    if (!(gain > 0.0)) throw std::invalid_argument("bits_for_power: gain must be > 0");
    check_noise_and_gap(noise_power, snr_gap);
    if (power < 0.0) throw std::invalid_argument("bits_for_power: power must be >= 0");
    return std::log2(1.0 + power * gain / (noise_power * snr_gap));
}

int bits_for_level(double level, double gain, int max_bits) {
    if (max_bits < 1) throw std::invalid_argument("bits_for_level: max_bits must be >= 1");
    const double scaled = level * gain;
    if (!(scaled > 0.0)) return 0;
    const double clamped = std::max(std::log2(scaled), 0.0);
    const int rounded = static_cast<int>(std::floor(clamped + 0.5));  // round half up
    return std::min(rounded, max_bits);
}

double power_for_bits(int bits, double gain, double noise_power, double snr_gap) {
    if (!(gain > 0.0)) throw std::invalid_argument("power_for_bits: gain must be > 0");
    check_noise_and_gap(noise_power, snr_gap);
    if (bits <= 0) return 0.0;
    return noise_power * snr_gap / gain * (std::exp2(static_cast<double>(bits)) - 1.0);
}

BitLoadResult waterlevel_bitload(std::span<const double> gains, double power_budget,
                                 double noise_power, double snr_gap, int max_bits,
                                 const WaterlevelOptions& options) {
    const std::size_t m = gains.size();
    for (double g : gains)
        if (!(g > 0.0)) throw std::invalid_argument("waterlevel_bitload: gains must be > 0");
    check_noise_and_gap(noise_power, snr_gap);
    if (!(power_budget > 0.0))
        throw std::invalid_argument("waterlevel_bitload: power_budget must be > 0");
    if (!(options.step_size > 0.0))
        throw std::invalid_argument("waterlevel_bitload: step_size must be > 0");
    if (max_bits < 1)
        throw std::invalid_argument("waterlevel_bitload: max_bits must be >= 1");
    if (m == 0) return {};

    const double noise_gap = noise_power * snr_gap;

    // Start near the continuous water level: budget/M above the mean inverse
    // gain, with the geometric mean standing in for the gain profile.
    double log_gain_sum = 0.0;
    for (double g : gains) log_gain_sum += std::log(g);
    const double geometric_mean_gain = std::exp(log_gain_sum / static_cast<double>(m));
    double level =
        power_budget / (static_cast<double>(m) * noise_gap) + 1.0 / geometric_mean_gain;

    BitLoadResult result;
    result.bits.assign(m, 0);
    result.powers.assign(m, 0.0);
    std::vector<int> previous_bits;

    int iteration = 0;
    while (iteration < options.max_iterations) {
        ++iteration;
        for (std::size_t i = 0; i < m; ++i)
            result.bits[i] = bits_for_level(level, gains[i], max_bits);
        for (std::size_t i = 0; i < m; ++i)
            result.powers[i] = power_for_bits(result.bits[i], gains[i], noise_power, snr_gap);
        const double used = result.total_power();
        if (!previous_bits.empty() && result.bits == previous_bits &&
            used <= power_budget) {
            break;
        }
        previous_bits = result.bits;
        int active = 0;
        for (int b : result.bits)
            if (b > 0) ++active;
        if (active == 0) active = static_cast<int>(m);  // all-off: still raise the level
        level += options.step_size * (power_budget - used) / (active * noise_gap);
    }
    result.iterations = iteration;
    result.water_level = level;

    // Post-correction on every exit path: drop bits, largest power saving
    // first, until the budget holds. The all-zero load costs nothing, so the
    // loop always lands on a feasible vector even when the iteration capped
    // out far above budget.
    double used = result.total_power();
    while (used > power_budget) {
        std::size_t best = m;
        double best_saving = -1.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (result.bits[i] == 0) continue;
            const double saving =
                result.powers[i] -
                power_for_bits(result.bits[i] - 1, gains[i], noise_power, snr_gap);
            if (saving > best_saving) {
                best_saving = saving;
                best = i;
            }
        }
        if (best == m) break;  // nothing loaded
        result.bits[best] -= 1;
        result.powers[best] = power_for_bits(result.bits[best], gains[best], noise_power, snr_gap);
        used = result.total_power();
    }
    if (used > power_budget)
        throw ConvergenceError("waterlevel_bitload: stuck above the power budget after " +
                               std::to_string(options.max_iterations) + " iterations");
    return result;
}

BitLoadResult greedy_bitload(std::span<const double> gains, int target_bits,
                             double noise_power, double snr_gap, int max_bits) {
    const std::size_t m = gains.size();
    for (double g : gains)
        if (!(g > 0.0)) throw std::invalid_argument("greedy_bitload: gains must be > 0");
    check_noise_and_gap(noise_power, snr_gap);
    if (target_bits < 0) throw std::invalid_argument("greedy_bitload: target_bits must be >= 0");
    if (max_bits < 1) throw std::invalid_argument("greedy_bitload: max_bits must be >= 1");
    if (static_cast<long long>(target_bits) >
        static_cast<long long>(m) * static_cast<long long>(max_bits))
        throw InfeasibleError("greedy_bitload: target of " + std::to_string(target_bits) +
                              " bits exceeds capacity of " + std::to_string(m) +
                              " subcarriers at " + std::to_string(max_bits) + " bits each");

    BitLoadResult result;
    result.bits.assign(m, 0);
    result.powers.assign(m, 0.0);

    // Incremental cost of bit b+1 on subchannel i is (sigma^2 gap / g_i) * 2^b,
    // increasing in b, so repeated cheapest-bit selection is exact.
    const double noise_gap = noise_power * snr_gap;
    for (int step = 0; step < target_bits; ++step) {
        std::size_t best = m;
        double best_cost = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (result.bits[i] >= max_bits) continue;
            const double cost =
                noise_gap / gains[i] * std::exp2(static_cast<double>(result.bits[i]));
            if (best == m || cost < best_cost) {
                best = i;
                best_cost = cost;
            }
        }
        result.bits[best] += 1;
    }
    for (std::size_t i = 0; i < m; ++i)
        result.powers[i] = power_for_bits(result.bits[i], gains[i], noise_power, snr_gap);
    result.iterations = target_bits;
    return result;
}

}  // namespace ofdma
