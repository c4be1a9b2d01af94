#include "ofdma/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ofdma/waterfill.hpp"

namespace ofdma {

double waterfill_best_objective(std::span<const double> cnr, double budget) {
    const int m = static_cast<int>(cnr.size());
    if (m == 0 || m > 20) {
        throw std::invalid_argument("waterfill_best_objective: 1..20 subcarriers supported");
    }
    for (double h : cnr) {
        if (!(h > 0.0)) throw std::invalid_argument("waterfill_best_objective: CNR must be > 0");
    }
    double best = 0.0;
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        double inverse_sum = 0.0;
        int active = 0;
        for (int i = 0; i < m; ++i) {
            if (mask & (1u << i)) {
                inverse_sum += 1.0 / cnr[i];
                ++active;
            }
        }
        const double level = (budget + inverse_sum) / active;
        double objective = 0.0;
        bool feasible = true;
        for (int i = 0; i < m && feasible; ++i) {
            if (!(mask & (1u << i))) continue;
            const double p = level - 1.0 / cnr[i];
            if (p < -1e-12 * level) {
                feasible = false;
            } else if (p > 0.0) {
                objective += std::log2(1.0 + p * cnr[i]);
            }
        }
        if (feasible) best = std::max(best, objective);
    }
    return best;
}

namespace {

double bit_power(int bits, double gain, double noise_power, double snr_gap) {
    return noise_power * snr_gap / gain * static_cast<double>((1u << bits) - 1u);
}

double min_power_recurse(std::span<const double> gains, std::size_t index, int remaining,
                         double noise_power, double snr_gap, int max_bits) {
    if (index == gains.size()) {
        return remaining == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    double best = std::numeric_limits<double>::infinity();
    const int cap = std::min(max_bits, remaining);
    for (int b = 0; b <= cap; ++b) {
        const double rest = min_power_recurse(gains, index + 1, remaining - b, noise_power,
                                              snr_gap, max_bits);
        if (std::isfinite(rest)) {
            best = std::min(best, bit_power(b, gains[index], noise_power, snr_gap) + rest);
        }
    }
    return best;
}

struct AssignmentSearch {
    const SystemConfig* config;
    const ChannelRealization* channel;
    std::vector<int> remaining;
    std::vector<std::vector<double>> user_gains;
    double best = std::numeric_limits<double>::infinity();

    void descend(int subcarrier) {
        const int num_subcarriers = config->num_subcarriers;
        if (subcarrier == num_subcarriers) {
            double total = 0.0;
            for (int k = 0; k < config->num_users; ++k) {
                total += min_power_bruteforce(user_gains[k], config->rate_targets[k],
                                              channel->noise_power, config->snr_gap,
                                              config->max_bits_per_subcarrier);
            }
            best = std::min(best, total);
            return;
        }
        for (int k = 0; k < config->num_users; ++k) {
            if (remaining[k] == 0) continue;
            --remaining[k];
            const double h = channel->gains(k, subcarrier);
            user_gains[k].push_back(h * h);
            descend(subcarrier + 1);
            user_gains[k].pop_back();
            ++remaining[k];
        }
    }
};

}  // namespace

double min_power_bruteforce(std::span<const double> gains, int target_bits,
                            double noise_power, double snr_gap, int max_bits) {
    if (target_bits < 0) throw std::invalid_argument("min_power_bruteforce: negative target");
    if (target_bits > static_cast<int>(gains.size()) * max_bits) {
        throw InfeasibleError("min_power_bruteforce: target exceeds capacity");
    }
    return min_power_recurse(gains, 0, target_bits, noise_power, snr_gap, max_bits);
}

double assignment_power_bruteforce(const SystemConfig& config,
                                   const ChannelRealization& channel,
                                   std::span<const int> counts) {
    config.validate();
    channel.validate();
    if (counts.size() != static_cast<std::size_t>(config.num_users)) {
        throw std::invalid_argument("assignment_power_bruteforce: one count per user required");
    }
    if (std::accumulate(counts.begin(), counts.end(), 0) != config.num_subcarriers) {
        throw std::invalid_argument("assignment_power_bruteforce: counts must cover all subcarriers");
    }
    AssignmentSearch search;
    search.config = &config;
    search.channel = &channel;
    search.remaining.assign(counts.begin(), counts.end());
    search.user_gains.resize(config.num_users);
    search.descend(0);
    return search.best;
}

std::pair<double, double> proportional_split_k2(std::span<const double> cnr_a,
                                                std::span<const double> cnr_b,
                                                double gamma_a, double gamma_b,
                                                double total_power,
                                                int total_subcarriers,
                                                double snr_gap) {
    if (!(gamma_a > 0.0) || !(gamma_b > 0.0) || !(total_power > 0.0)) {
        throw std::invalid_argument("proportional_split_k2: positive inputs required");
    }
    std::vector<double> eff_a(cnr_a.begin(), cnr_a.end());
    std::vector<double> eff_b(cnr_b.begin(), cnr_b.end());
    for (double& h : eff_a) h /= snr_gap;
    for (double& h : eff_b) h /= snr_gap;

    const auto rate_a = [&](double budget) {
        return user_rate(cnr_a, waterfill(eff_a, budget).powers, total_subcarriers, snr_gap);
    };
    const auto rate_b = [&](double budget) {
        return user_rate(cnr_b, waterfill(eff_b, budget).powers, total_subcarriers, snr_gap);
    };

    double lo = 0.0, hi = total_power;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double gap = rate_a(mid) / gamma_a - rate_b(total_power - mid) / gamma_b;
        (gap < 0.0 ? lo : hi) = mid;
    }
    const double split = 0.5 * (lo + hi);
    return {split, total_power - split};
}

}  // namespace ofdma
