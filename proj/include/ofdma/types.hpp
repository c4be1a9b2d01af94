#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace ofdma {

inline constexpr int kUnassigned = -1;

/// Rate or subcarrier-count requirements cannot be met by any allocation.
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An iterative solver ran out of iterations without a usable state.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Selects the serial reference path or the OpenMP path for kernels that
/// have both. Results must be identical; only the wall clock may differ.
enum class Execution { kSerial, kParallel };

/// Dense row-major matrix of doubles, sized once at construction.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, value) {}

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }
    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    bool operator==(const Matrix&) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Static description of one downlink scenario: user and subcarrier counts,
/// the power budget, noise, the SNR gap, per-user proportional-rate weights
/// and (for the margin-adaptive allocator) per-user bit targets.
struct SystemConfig {
    int num_users = 1;
    int num_subcarriers = 1;
    double total_power = 1.0;   // watts
    double bandwidth = 1.0e6;   // hertz
    double noise_psd = 1.0e-8;  // watts/hertz
    double snr_gap = 1.0;       // linear, >= 1
    std::vector<double> rate_ratios;  // size K, all > 0
    std::vector<int> rate_targets;    // bits per OFDM symbol; may be empty
    int max_bits_per_subcarrier = 6;

    /// Per-subcarrier noise power sigma^2 = N0 * B / N.
    double noise_power() const { return noise_psd * bandwidth / num_subcarriers; }

    /// Throws std::invalid_argument on any violated field constraint.
    void validate() const;
};

/// Exclusive subcarrier-to-user map. owner[n] is a user index or kUnassigned.
struct Assignment {
    std::vector<int> owner;

    Assignment() = default;
    explicit Assignment(std::size_t num_subcarriers)
        : owner(num_subcarriers, kUnassigned) {}

    int count_of(int user) const;
    std::vector<int> subcarriers_of(int user) const;
    bool complete() const;

    bool operator==(const Assignment&) const = default;
};

/// One fading draw: amplitude gains h[k][n], the per-subcarrier noise power
/// sigma^2, and the channel-to-noise ratios H[k][n] = h[k][n]^2 / sigma^2.
struct ChannelRealization {
    Matrix gains;
    double noise_power = 0.0;
    Matrix cnr;

    void validate() const;
};

/// Output of every allocator: who owns each subcarrier, the transmit power
/// grid, per-user spectral efficiencies, and (for bit-loaded allocations)
/// the integer bits carried per subcarrier.
struct AllocationResult {
    Assignment assignment;
    Matrix power;               // p[k][n], watts; zero where owner differs
    std::vector<double> rates;  // bits/s/Hz per user
    std::vector<int> bits;      // per subcarrier; zero-filled for capacity-only methods
    double total_power_used = 0.0;
};

}  // namespace ofdma
