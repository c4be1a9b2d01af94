#pragma once

#include <cstdint>
#include <string>

#include "ofdma/types.hpp"

namespace ofdma {

/// Exact ratio, used for the sampling factor and cyclic-prefix ratio so the
/// integer-valued derived quantities never see floating-point drift.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d);

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational&) const = default;
};

/// Parses "a/b" or a bare integer.
Rational parse_rational(const std::string& text);

/// The four quantities that characterize the OFDMA symbol.
struct PrimitiveParams {
    std::uint64_t bandwidth_hz = 10'000'000;  // nominal channel bandwidth
    int used_subcarriers = 840;               // including the DC subcarrier
    Rational sampling_factor{8, 7};
    Rational cp_ratio{1, 8};                  // guard time over useful time
};

struct DerivedParams {
    int fft_size = 0;                    // smallest power of two >= used_subcarriers
    std::uint64_t sampling_freq_hz = 0;  // floor(n*BW/8000) * 8000, exact
    double subcarrier_spacing_hz = 0.0;
    double useful_symbol_time_s = 0.0;
    double guard_time_s = 0.0;
    double symbol_time_s = 0.0;
    double sample_time_s = 0.0;
};

/// Computes the derived symbol parameters. The cyclic-prefix ratio must be
/// one of 1/32, 1/16, 1/8, 1/4.
DerivedParams derive_params(const PrimitiveParams& primitives);

}  // namespace ofdma
