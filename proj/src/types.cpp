#include "ofdma/types.hpp"

#include <cmath>
#include <string>

namespace ofdma {

void SystemConfig::validate() const {
    if (num_users < 1) throw std::invalid_argument("num_users must be >= 1");
    if (num_subcarriers < num_users)
        throw std::invalid_argument("num_subcarriers must be >= num_users");
    if (!(total_power > 0.0)) throw std::invalid_argument("total_power must be > 0");
    if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be > 0");
    if (!(noise_psd > 0.0)) throw std::invalid_argument("noise_psd must be > 0");
    if (!(snr_gap >= 1.0)) throw std::invalid_argument("snr_gap must be >= 1");
    if (max_bits_per_subcarrier < 1)
        throw std::invalid_argument("max_bits_per_subcarrier must be >= 1");
    if (rate_ratios.size() != static_cast<std::size_t>(num_users))
        throw std::invalid_argument("rate_ratios must have one entry per user");
    for (double g : rate_ratios)
        if (!(g > 0.0)) throw std::invalid_argument("rate_ratios entries must be > 0");
    if (!rate_targets.empty()) {
        if (rate_targets.size() != static_cast<std::size_t>(num_users))
            throw std::invalid_argument("rate_targets must have one entry per user");
        for (int r : rate_targets)
            if (r < 0) throw std::invalid_argument("rate_targets entries must be >= 0");
    }
}

int Assignment::count_of(int user) const {
    int count = 0;
    for (int o : owner)
        if (o == user) ++count;
    return count;
}

std::vector<int> Assignment::subcarriers_of(int user) const {
    std::vector<int> subs;
    for (std::size_t n = 0; n < owner.size(); ++n)
        if (owner[n] == user) subs.push_back(static_cast<int>(n));
    return subs;
}

bool Assignment::complete() const {
    for (int o : owner)
        if (o == kUnassigned) return false;
    return !owner.empty();
}

void ChannelRealization::validate() const {
    if (gains.empty() || gains.rows() != cnr.rows() || gains.cols() != cnr.cols())
        throw std::invalid_argument("channel matrices empty or mismatched");
    if (!(noise_power > 0.0)) throw std::invalid_argument("noise_power must be > 0");
    for (std::size_t k = 0; k < gains.rows(); ++k) {
        for (std::size_t n = 0; n < gains.cols(); ++n) {
            const double h = gains(k, n);
            const double H = cnr(k, n);
            if (!std::isfinite(h) || h <= 0.0 || !std::isfinite(H) || H <= 0.0)
                throw std::invalid_argument("channel entries must be finite and > 0 at (" +
                                            std::to_string(k) + "," + std::to_string(n) + ")");
        }
    }
}

}  // namespace ofdma
