#include "ofdma/channel.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace ofdma {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform in (0,1); offset keeps log() away from zero.
double next_unit(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

// Box-Muller on top of mt19937_64 output. std::normal_distribution is
// implementation-defined, so it cannot back a reproducibility contract.
std::complex<double> next_standard_complex(std::mt19937_64& rng) {
    const double u1 = next_unit(rng);
    const double u2 = next_unit(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace

ChannelRealization generate_channel(const SystemConfig& config, std::uint64_t seed,
                                    int num_taps) {
    config.validate();
    const int num_users = config.num_users;
    const int num_subcarriers = config.num_subcarriers;
    if (num_taps < 1 || num_taps > num_subcarriers)
        throw std::invalid_argument("num_taps must be in [1, num_subcarriers]");

    // Exponential power-delay profile, unit total average power.
    std::vector<double> tap_power(num_taps);
    double profile_sum = 0.0;
    for (int l = 0; l < num_taps; ++l) {
        tap_power[l] = std::exp(-static_cast<double>(l));
        profile_sum += tap_power[l];
    }
    for (double& p : tap_power) p /= profile_sum;

    Matrix gains(num_users, num_subcarriers);
    for (int k = 0; k < num_users; ++k) {
        std::mt19937_64 rng(seed ^ splitmix64(static_cast<std::uint64_t>(k)));
        std::vector<std::complex<double>> taps(num_taps);
        for (int l = 0; l < num_taps; ++l)
            taps[l] = std::sqrt(tap_power[l] / 2.0) * next_standard_complex(rng);

        // Direct DFT of the short impulse response; O(N * L) is plenty here.
        for (int n = 0; n < num_subcarriers; ++n) {
            std::complex<double> response{0.0, 0.0};
            for (int l = 0; l < num_taps; ++l) {
                const double angle =
                    -2.0 * std::numbers::pi * static_cast<double>(n) * l / num_subcarriers;
                response += taps[l] * std::complex<double>(std::cos(angle), std::sin(angle));
            }
            gains(k, n) = std::abs(response);
        }
    }
    return channel_to_noise(config, gains);
}

ChannelRealization channel_to_noise(const SystemConfig& config, const Matrix& gains) {
    config.validate();
    if (gains.rows() != static_cast<std::size_t>(config.num_users) ||
        gains.cols() != static_cast<std::size_t>(config.num_subcarriers))
        throw std::invalid_argument("gain matrix dimensions must match config");

    ChannelRealization channel;
    channel.gains = gains;
    channel.noise_power = config.noise_power();
    channel.cnr = Matrix(gains.rows(), gains.cols());
    for (std::size_t k = 0; k < gains.rows(); ++k) {
        for (std::size_t n = 0; n < gains.cols(); ++n) {
            const double h = gains(k, n);
            if (!std::isfinite(h) || h <= 0.0)
                throw std::invalid_argument("channel gains must be finite and > 0");
            channel.cnr(k, n) = h * h / channel.noise_power;
        }
    }
    channel.validate();
    return channel;
}

}  // namespace ofdma
