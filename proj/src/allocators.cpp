#include "ofdma/allocators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "ofdma/waterfill.hpp"

namespace ofdma {

namespace {

// CNR divided by the SNR gap. Water-filling on these effective values
// maximizes the gap-adjusted rate, and user_rate(H, p, N, gap) evaluates
// the same expression.
std::vector<double> effective_cnr(const ChannelRealization& channel, int user,
                                  const std::vector<int>& subs, double snr_gap) {
    std::vector<double> eff(subs.size());
    for (std::size_t i = 0; i < subs.size(); ++i)
        eff[i] = channel.cnr(user, subs[i]) / snr_gap;
    return eff;
}

int best_unassigned_subcarrier(const ChannelRealization& channel, int user,
                               const std::vector<int>& owner) {
    int best = kUnassigned;
    double best_cnr = 0.0;
    for (std::size_t n = 0; n < owner.size(); ++n) {
        if (owner[n] != kUnassigned) continue;
        const double h = channel.cnr(user, n);
        if (best == kUnassigned || h > best_cnr) {
            best = static_cast<int>(n);
            best_cnr = h;
        }
    }
    return best;
}

int argmin_rate_share(const std::vector<double>& rates, const std::vector<double>& ratios,
                      const std::vector<bool>& eligible) {
    int best = -1;
    double best_share = 0.0;
    for (std::size_t k = 0; k < rates.size(); ++k) {
        if (!eligible[k]) continue;
        const double share = rates[k] / ratios[k];
        if (best < 0 || share < best_share) {
            best = static_cast<int>(k);
            best_share = share;
        }
    }
    return best;
}

double equal_power_rate_term(const SystemConfig& config, const ChannelRealization& channel,
                             int user, int subcarrier) {
    const double p = config.total_power / config.num_subcarriers;
    return std::log2(1.0 + p * channel.cnr(user, subcarrier) / config.snr_gap) /
           config.num_subcarriers;
}

// Water-fill each user's budget over its own subcarriers and assemble the
// full result. Budgets must sum to at most the configured total.
AllocationResult finalize_waterfilled(const SystemConfig& config,
                                      const ChannelRealization& channel,
                                      const Assignment& assignment,
                                      const std::vector<double>& budgets) {
    AllocationResult result;
    result.assignment = assignment;
    result.power = Matrix(config.num_users, config.num_subcarriers);
    result.rates.assign(config.num_users, 0.0);
    result.bits.assign(config.num_subcarriers, 0);
    for (int k = 0; k < config.num_users; ++k) {
        const std::vector<int> subs = assignment.subcarriers_of(k);
        if (subs.empty()) continue;
        const std::vector<double> eff = effective_cnr(channel, k, subs, config.snr_gap);
        const WaterfillSolution solution = waterfill(eff, budgets[k]);
        std::vector<double> cnr(subs.size());
        for (std::size_t i = 0; i < subs.size(); ++i) {
            result.power(k, subs[i]) = solution.powers[i];
            cnr[i] = channel.cnr(k, subs[i]);
        }
        result.rates[k] =
            user_rate(cnr, solution.powers, config.num_subcarriers, config.snr_gap);
        result.total_power_used += solution.total_power();
    }
    return result;
}

double waterfilled_rate(const std::vector<double>& eff, double budget, int total_subcarriers) {
    const WaterfillSolution solution = waterfill(eff, budget);
    double rate = 0.0;
    for (std::size_t i = 0; i < eff.size(); ++i)
        rate += std::log2(1.0 + solution.powers[i] * eff[i]);
    return rate / total_subcarriers;
}

// Smallest budget whose water-filled rate reaches `target`, by doubling then
// bisection. Rate is strictly increasing in budget so the bracket is clean.
double budget_for_rate(const std::vector<double>& eff, double target, int total_subcarriers,
                       double reference_budget) {
    if (target <= 0.0) return 0.0;
    double lo = 0.0;
    double hi = reference_budget > 0.0 ? reference_budget : 1.0;
    int doublings = 0;
    while (waterfilled_rate(eff, hi, total_subcarriers) < target && doublings < 400) {
        lo = hi;
        hi *= 2.0;
        ++doublings;
    }
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (waterfilled_rate(eff, mid, total_subcarriers) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

Assignment assign_best_gain(const ChannelRealization& channel) {
    channel.validate();
    const std::size_t num_users = channel.cnr.rows();
    const std::size_t num_subcarriers = channel.cnr.cols();
    Assignment assignment(num_subcarriers);
    for (std::size_t n = 0; n < num_subcarriers; ++n) {
        int best = 0;
        for (std::size_t k = 1; k < num_users; ++k)
            if (channel.cnr(k, n) > channel.cnr(best, n)) best = static_cast<int>(k);
        assignment.owner[n] = best;
    }
    return assignment;
}

AllocationResult bestgain_equal_power(const SystemConfig& config,
                                      const ChannelRealization& channel) {
    config.validate();
    const Assignment assignment = assign_best_gain(channel);
    AllocationResult result;
    result.assignment = assignment;
    result.power = Matrix(config.num_users, config.num_subcarriers);
    result.rates.assign(config.num_users, 0.0);
    result.bits.assign(config.num_subcarriers, 0);
    const double p = config.total_power / config.num_subcarriers;
    for (int n = 0; n < config.num_subcarriers; ++n) {
        const int k = assignment.owner[n];
        result.power(k, n) = p;
        result.rates[k] += equal_power_rate_term(config, channel, k, n);
        result.total_power_used += p;
    }
    return result;
}

AllocationResult rootfinding_allocate(const SystemConfig& config,
                                      const ChannelRealization& channel) {
    config.validate();
    channel.validate();
    const int num_users = config.num_users;
    const int num_subcarriers = config.num_subcarriers;

    // Subcarrier phase at assumed equal power per subcarrier.
    std::vector<int> owner(num_subcarriers, kUnassigned);
    std::vector<double> equal_power_rate(num_users, 0.0);
    int assigned = 0;
    for (int k = 0; k < num_users; ++k) {
        const int n = best_unassigned_subcarrier(channel, k, owner);
        owner[n] = k;
        equal_power_rate[k] += equal_power_rate_term(config, channel, k, n);
        ++assigned;
    }
    const std::vector<bool> all(num_users, true);
    while (assigned < num_subcarriers) {
        const int k = argmin_rate_share(equal_power_rate, config.rate_ratios, all);
        const int n = best_unassigned_subcarrier(channel, k, owner);
        owner[n] = k;
        equal_power_rate[k] += equal_power_rate_term(config, channel, k, n);
        ++assigned;
    }
    Assignment assignment;
    assignment.owner = std::move(owner);

    std::vector<double> budgets(num_users, 0.0);
    if (num_users == 1) {
        budgets[0] = config.total_power;
        return finalize_waterfilled(config, channel, assignment, budgets);
    }

    // Power phase: find user 0's total so that matching every other user's
    // water-filled rate to its ratio share exhausts the budget. The total
    // demanded is strictly increasing in user 0's share, so bisection works.
    std::vector<std::vector<double>> eff(num_users);
    for (int k = 0; k < num_users; ++k)
        eff[k] = effective_cnr(channel, k, assignment.subcarriers_of(k), config.snr_gap);

    const double total = config.total_power;
    const auto demand = [&](double anchor_budget, std::vector<double>& out) {
        out[0] = anchor_budget;
        const double anchor_rate =
            waterfilled_rate(eff[0], anchor_budget, num_subcarriers);
        double sum = anchor_budget;
        for (int k = 1; k < num_users; ++k) {
            const double target =
                anchor_rate * config.rate_ratios[k] / config.rate_ratios[0];
            out[k] = budget_for_rate(eff[k], target, num_subcarriers, total);
            sum += out[k];
        }
        return sum;
    };

    double lo = 0.0;
    double hi = total;
    std::vector<double> candidate(num_users, 0.0);
    const double tolerance = 1e-10 * total;
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (demand(mid, candidate) < total)
            lo = mid;
        else
            hi = mid;
    }
    demand(0.5 * (lo + hi), budgets);
    // Give the anchor user the exact residual so the totals sum to budget.
    double others = 0.0;
    for (int k = 1; k < num_users; ++k) others += budgets[k];
    budgets[0] = std::max(total - others, 0.0);
    return finalize_waterfilled(config, channel, assignment, budgets);
}

AllocationResult linear_allocate(const SystemConfig& config,
                                 const ChannelRealization& channel) {
    config.validate();
    channel.validate();
    const int num_users = config.num_users;
    const int num_subcarriers = config.num_subcarriers;
    const double ratio_sum =
        std::accumulate(config.rate_ratios.begin(), config.rate_ratios.end(), 0.0);

    // Step 1: quotas proportional to the rate ratios, at least one each,
    // trimmed from the largest holders until they fit.
    std::vector<int> quota(num_users);
    long long quota_sum = 0;
    for (int k = 0; k < num_users; ++k) {
        quota[k] = std::max(
            1LL, std::llround(num_subcarriers * config.rate_ratios[k] / ratio_sum));
        quota_sum += quota[k];
    }
    while (quota_sum > num_subcarriers) {
        int largest = 0;
        for (int k = 1; k < num_users; ++k)
            if (quota[k] > quota[largest]) largest = k;
        --quota[largest];
        --quota_sum;
    }

    // Step 2: one best subcarrier per user.
    std::vector<int> owner(num_subcarriers, kUnassigned);
    std::vector<int> held(num_users, 0);
    std::vector<double> equal_power_rate(num_users, 0.0);
    for (int k = 0; k < num_users; ++k) {
        const int n = best_unassigned_subcarrier(channel, k, owner);
        owner[n] = k;
        ++held[k];
        equal_power_rate[k] += equal_power_rate_term(config, channel, k, n);
    }

    // Step 3: fill quotas, always serving the user furthest below its share.
    std::vector<bool> below_quota(num_users);
    for (int k = 0; k < num_users; ++k) below_quota[k] = held[k] < quota[k];
    while (std::find(below_quota.begin(), below_quota.end(), true) != below_quota.end()) {
        const int k = argmin_rate_share(equal_power_rate, config.rate_ratios, below_quota);
        const int n = best_unassigned_subcarrier(channel, k, owner);
        owner[n] = k;
        ++held[k];
        equal_power_rate[k] += equal_power_rate_term(config, channel, k, n);
        below_quota[k] = held[k] < quota[k];
    }

    // Step 4: leftovers to the best user on each, one bonus per user until
    // every user has one, then unrestricted.
    std::vector<bool> got_extra(num_users, false);
    for (int n = 0; n < num_subcarriers; ++n) {
        if (owner[n] != kUnassigned) continue;
        const bool restricted =
            std::find(got_extra.begin(), got_extra.end(), false) != got_extra.end();
        int best = -1;
        for (int k = 0; k < num_users; ++k) {
            if (restricted && got_extra[k]) continue;
            if (best < 0 || channel.cnr(k, n) > channel.cnr(best, n)) best = k;
        }
        owner[n] = best;
        ++held[best];
        got_extra[best] = true;
    }
    Assignment assignment;
    assignment.owner = std::move(owner);

    // Power phase. Model each user as a flat channel at the geometric mean
    // of its CNRs with rate (n_k/N) log2(P_k H_k / (n_k gap)); the ratio
    // constraints then tie every P_k to P_0 through an exponent
    // e_k = (ratio_k n_0)/(ratio_0 n_k). First-order expansion makes each
    // P_k affine in a common scalar, the budget row closes the triangular
    // system, and the pass repeats from the refreshed point until it settles.
    std::vector<double> budgets(num_users, 0.0);
    if (num_users == 1) {
        budgets[0] = config.total_power;
    } else {
        std::vector<double> flat_cnr(num_users);
        for (int k = 0; k < num_users; ++k) {
            const std::vector<int> subs = assignment.subcarriers_of(k);
            double log_sum = 0.0;
            for (int n : subs) log_sum += std::log(channel.cnr(k, n));
            flat_cnr[k] = std::exp(log_sum / static_cast<double>(subs.size()));
        }
        const double gap = config.snr_gap;
        std::vector<double> exponent(num_users), scale(num_users);
        for (int k = 0; k < num_users; ++k) {
            const double count = static_cast<double>(held[k]);
            exponent[k] = config.rate_ratios[k] * static_cast<double>(held[0]) /
                          (config.rate_ratios[0] * count);
            scale[k] = count * gap / flat_cnr[k];
        }
        // Expansion point: user 0's flat-model SNR at the equal-power split.
        double t = config.total_power / num_subcarriers * flat_cnr[0] / gap;
        bool usable = std::isfinite(t) && t > 0.0;
        // A single substitution pass is exact when every exponent is 1 (counts
        // balance the ratios); otherwise re-expand at the previous solution
        // until the point stops moving.
        for (int pass = 0; usable && pass < 100; ++pass) {
            double offset_sum = 0.0;
            double slope_sum = 0.0;
            for (int k = 0; k < num_users; ++k) {
                const double term = scale[k] * std::pow(t, exponent[k]);
                slope_sum += exponent[k] * term / t;
                offset_sum += (1.0 - exponent[k]) * term;
            }
            const double next = (config.total_power - offset_sum) / slope_sum;
            if (!std::isfinite(next)) {
                usable = false;
                break;
            }
            if (next <= 0.0) {  // overshot below zero: damp instead
                t *= 0.5;
                continue;
            }
            const bool settled = std::abs(next - t) <= 1e-12 * std::max(t, next);
            t = next;
            if (settled) break;
        }
        double budget_sum = 0.0;
        if (usable) {
            for (int k = 0; k < num_users; ++k) {
                budgets[k] = scale[k] * std::pow(t, exponent[k]);
                if (!std::isfinite(budgets[k])) usable = false;
                budget_sum += budgets[k];
            }
        }
        if (!usable || !(budget_sum > 0.0)) {
            // Substitution broke down; fall back to a split by quota.
            for (int k = 0; k < num_users; ++k)
                budgets[k] = config.total_power * held[k] / num_subcarriers;
        } else {
            // The power-law budgets are positive by construction; rescale so
            // they meet the total exactly.
            for (int k = 0; k < num_users; ++k)
                budgets[k] *= config.total_power / budget_sum;
        }
    }
    return finalize_waterfilled(config, channel, assignment, budgets);
}

AllocationResult joint_allocate(const SystemConfig& config,
                                const ChannelRealization& channel) {
    config.validate();
    channel.validate();
    const int num_users = config.num_users;
    const int num_subcarriers = config.num_subcarriers;
    const double power_step = config.total_power / num_subcarriers;

    std::vector<int> owner(num_subcarriers, kUnassigned);
    std::vector<std::vector<double>> eff(num_users);
    std::vector<int> held(num_users, 0);
    std::vector<double> rate(num_users, 0.0);
    const std::vector<bool> all(num_users, true);

    for (int assigned = 0; assigned < num_subcarriers; ++assigned) {
        const int k = argmin_rate_share(rate, config.rate_ratios, all);
        const int n = best_unassigned_subcarrier(channel, k, owner);
        owner[n] = k;
        eff[k].push_back(channel.cnr(k, n) / config.snr_gap);
        ++held[k];
        rate[k] = waterfilled_rate(eff[k], held[k] * power_step, num_subcarriers);
    }

    Assignment assignment;
    assignment.owner = std::move(owner);
    std::vector<double> budgets(num_users);
    for (int k = 0; k < num_users; ++k) budgets[k] = held[k] * power_step;
    return finalize_waterfilled(config, channel, assignment, budgets);
}

}  // namespace ofdma
