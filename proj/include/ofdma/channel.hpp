#pragma once

#include <cstdint>

#include "ofdma/types.hpp"

namespace ofdma {

/// Draws one multiuser frequency-selective fading realization.
///
/// Each user gets an independent num_taps-tap complex Gaussian impulse
/// response with an exponentially decaying power-delay profile (tap l has
/// power proportional to e^-l) normalized to unit total average power, so
/// the N-point frequency-domain amplitude gains average to unit power.
/// The per-user random stream is keyed by seed XOR splitmix64(user), making
/// the result a pure function of (config, seed, num_taps) regardless of
/// evaluation order.
ChannelRealization generate_channel(const SystemConfig& config, std::uint64_t seed,
                                    int num_taps);

/// Wraps a gain matrix: computes sigma^2 = N0*B/N and H = h^2 / sigma^2.
ChannelRealization channel_to_noise(const SystemConfig& config, const Matrix& gains);

}  // namespace ofdma
