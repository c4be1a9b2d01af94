#include "ofdma/params.hpp"

#include <numeric>
#include <stdexcept>

namespace ofdma {

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) {
        throw std::invalid_argument("rational denominator must be nonzero");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(std::stoll(text), 1);
        }
        const std::int64_t num = std::stoll(text.substr(0, slash));
        const std::int64_t den = std::stoll(text.substr(slash + 1));
        return Rational(num, den);
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("rational out of range: " + text);
    }
}

namespace {

bool is_supported_cp_ratio(const Rational& g) {
    return g.num == 1 && (g.den == 32 || g.den == 16 || g.den == 8 || g.den == 4);
}

}  // namespace

DerivedParams derive_params(const PrimitiveParams& primitives) {
    if (primitives.bandwidth_hz == 0) {
        throw std::invalid_argument("bandwidth must be positive");
    }
    if (primitives.used_subcarriers < 1) {
        throw std::invalid_argument("used subcarrier count must be at least 1");
    }
    if (primitives.sampling_factor.num <= 0) {
        throw std::invalid_argument("sampling factor must be positive");
    }
    if (!is_supported_cp_ratio(primitives.cp_ratio)) {
        throw std::invalid_argument("cyclic prefix ratio must be 1/32, 1/16, 1/8 or 1/4");
    }

    DerivedParams derived;

    int fft = 1;
    while (fft < primitives.used_subcarriers) {
        fft *= 2;
    }
    derived.fft_size = fft;

    // F_s = floor(n * BW / 8000) * 8000, kept in integers so the published
    // sampling frequencies come out exact.
    const std::uint64_t numerator =
        static_cast<std::uint64_t>(primitives.sampling_factor.num) * primitives.bandwidth_hz;
    const std::uint64_t denominator =
        static_cast<std::uint64_t>(primitives.sampling_factor.den) * 8000u;
    derived.sampling_freq_hz = numerator / denominator * 8000u;

    derived.subcarrier_spacing_hz =
        static_cast<double>(derived.sampling_freq_hz) / derived.fft_size;
    derived.useful_symbol_time_s = 1.0 / derived.subcarrier_spacing_hz;
    derived.guard_time_s = primitives.cp_ratio.value() * derived.useful_symbol_time_s;
    derived.symbol_time_s = derived.useful_symbol_time_s + derived.guard_time_s;
    derived.sample_time_s = derived.useful_symbol_time_s / derived.fft_size;
    return derived;
}

}  // namespace ofdma
