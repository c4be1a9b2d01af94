#include "ofdma/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "ofdma/allocators.hpp"
#include "ofdma/channel.hpp"
#include "ofdma/proposed.hpp"
#include "ofdma/waterfill.hpp"

namespace ofdma {

namespace {

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t\r\n");
    return text.substr(begin, end - begin + 1);
}

}  // namespace

std::string method_name(Method method) {
    switch (method) {
        case Method::kRootfinding: return "rootfinding";
        case Method::kLinear: return "linear";
        case Method::kJoint: return "joint";
        case Method::kBestgainEqualPower: return "bestgain-equal-power";
        case Method::kProposed: return "proposed";
    }
    throw std::invalid_argument("method_name: unknown method");
}

Method parse_method(const std::string& name) {
    if (name == "rootfinding") return Method::kRootfinding;
    if (name == "linear") return Method::kLinear;
    if (name == "joint") return Method::kJoint;
    if (name == "bestgain-equal-power") return Method::kBestgainEqualPower;
    if (name == "proposed") return Method::kProposed;
    throw std::invalid_argument("unknown method '" + name + "'");
}

std::vector<Method> parse_method_list(const std::string& text) {
    const std::string stripped = trim(text);
    if (stripped == "all") {
        return {Method::kRootfinding, Method::kLinear, Method::kJoint,
                Method::kBestgainEqualPower, Method::kProposed};
    }
    std::vector<Method> methods;
    std::size_t start = 0;
    while (start <= stripped.size()) {
        const std::size_t comma = stripped.find(',', start);
        const std::size_t end = comma == std::string::npos ? stripped.size() : comma;
        methods.push_back(parse_method(trim(stripped.substr(start, end - start))));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (methods.empty()) throw std::invalid_argument("empty method list");
    return methods;
}

void ExperimentSpec::validate() const {
    if (methods.empty()) throw std::invalid_argument("spec: no methods selected");
    if (user_counts.empty()) throw std::invalid_argument("spec: no user counts");
    if (num_subcarriers < 1) throw std::invalid_argument("spec: subcarrier count must be >= 1");
    for (int k : user_counts) {
        if (k < 1 || k > num_subcarriers) {
            throw std::invalid_argument("spec: user counts must lie in [1, num_subcarriers]");
        }
    }
    if (num_realizations < 1) throw std::invalid_argument("spec: need at least one realization");
    if (!(snr_gap >= 1.0)) throw std::invalid_argument("spec: SNR gap must be >= 1");
    if (ratio_pattern.empty()) throw std::invalid_argument("spec: empty ratio pattern");
    for (double g : ratio_pattern) {
        if (!(g > 0.0)) throw std::invalid_argument("spec: ratios must be > 0");
    }
    if (num_taps < 1 || num_taps > num_subcarriers) {
        throw std::invalid_argument("spec: taps must lie in [1, num_subcarriers]");
    }
    if (!(total_power > 0.0)) throw std::invalid_argument("spec: total power must be > 0");
    if (rate_target_bits < 0) throw std::invalid_argument("spec: rate target must be >= 0");
    if (max_bits < 1) throw std::invalid_argument("spec: max bits must be >= 1");
}

SystemConfig make_config(const ExperimentSpec& spec, int num_users) {
    SystemConfig config;
    config.num_users = num_users;
    config.num_subcarriers = spec.num_subcarriers;
    config.total_power = spec.total_power;
    // Unit-power fading, so sigma^2 = P_tot * 10^(-snr/10) / N puts the mean
    // subchannel SNR at the requested value under equal power P_tot/N.
    config.bandwidth = 1.0;
    config.noise_psd = spec.total_power * std::pow(10.0, -spec.avg_snr_db / 10.0);
    config.snr_gap = spec.snr_gap;
    config.rate_ratios.resize(num_users);
    for (int k = 0; k < num_users; ++k) {
        config.rate_ratios[k] = spec.ratio_pattern[k % spec.ratio_pattern.size()];
    }
    config.rate_targets.assign(num_users, spec.rate_target_bits);
    config.max_bits_per_subcarrier = spec.max_bits;
    config.validate();
    return config;
}

AllocationResult run_method(Method method, const SystemConfig& config,
                            const ChannelRealization& channel, Execution execution) {
    switch (method) {
        case Method::kRootfinding: return rootfinding_allocate(config, channel);
        case Method::kLinear: return linear_allocate(config, channel);
        case Method::kJoint: return joint_allocate(config, channel);
        case Method::kBestgainEqualPower: return bestgain_equal_power(config, channel);
        case Method::kProposed: return proposed_allocate(config, channel, execution);
    }
    throw std::invalid_argument("run_method: unknown method");
}

namespace {

struct Sample {
    double capacity = 0.0;
    std::vector<double> ratios;
};

/// Rates are recomputed from the returned power grid rather than trusted
/// from the allocator, so cached drift cannot reach the output.
Sample evaluate(Method method, const SystemConfig& config, const ChannelRealization& channel,
                double eval_gap) {
    const AllocationResult result = run_method(method, config, channel);
    Sample sample;
    sample.ratios.resize(config.num_users);
    std::vector<double> rates(config.num_users);
    for (int k = 0; k < config.num_users; ++k) {
        rates[k] = user_rate(channel.cnr.row(k), result.power.row(k),
                             config.num_subcarriers, eval_gap);
        sample.capacity += rates[k];
    }
    for (int k = 0; k < config.num_users; ++k) {
        sample.ratios[k] = sample.capacity > 0.0 ? rates[k] / sample.capacity
                                                 : 1.0 / config.num_users;
    }
    return sample;
}

CapacityRow aggregate(Method method, const SystemConfig& config,
                      const std::vector<Sample>& samples) {
    const int count = static_cast<int>(samples.size());
    CapacityRow row;
    row.method = method_name(method);
    row.num_users = config.num_users;
    for (const Sample& s : samples) row.capacity_mean += s.capacity;
    row.capacity_mean /= count;
    if (count > 1) {
        double variance = 0.0;
        for (const Sample& s : samples) {
            const double d = s.capacity - row.capacity_mean;
            variance += d * d;
        }
        variance /= count - 1;
        row.capacity_se = std::sqrt(variance / count);
    }
    row.ratios.assign(config.num_users, 0.0);
    for (const Sample& s : samples) {
        for (int k = 0; k < config.num_users; ++k) row.ratios[k] += s.ratios[k];
    }
    const double ratio_sum =
        std::accumulate(config.rate_ratios.begin(), config.rate_ratios.end(), 0.0);
    for (int k = 0; k < config.num_users; ++k) {
        row.ratios[k] /= count;
        const double target = config.rate_ratios[k] / ratio_sum;
        row.deviation = std::max(row.deviation, std::abs(row.ratios[k] - target));
    }
    return row;
}

}  // namespace

std::vector<CapacityRow> run_capacity_sweep(const ExperimentSpec& spec) {
    spec.validate();
    const double eval_gap = spec.gap_in_capacity ? spec.snr_gap : 1.0;
    const int num_methods = static_cast<int>(spec.methods.size());
    const int num_counts = static_cast<int>(spec.user_counts.size());
    const int realizations = spec.num_realizations;

    std::vector<std::vector<CapacityRow>> grid(num_methods,
                                               std::vector<CapacityRow>(num_counts));
    for (int ki = 0; ki < num_counts; ++ki) {
        const SystemConfig config = make_config(spec, spec.user_counts[ki]);
        std::vector<std::vector<Sample>> samples(num_methods,
                                                 std::vector<Sample>(realizations));
        std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) if (spec.execution == Execution::kParallel)
        for (int r = 0; r < realizations; ++r) {
            try {
                // One channel per realization, shared by every method, so the
                // comparison is paired and independent of the thread count.
                const ChannelRealization channel =
                    generate_channel(config, spec.master_seed + static_cast<std::uint64_t>(r),
                                     spec.num_taps);
                for (int mi = 0; mi < num_methods; ++mi) {
                    samples[mi][r] = evaluate(spec.methods[mi], config, channel, eval_gap);
                }
            } catch (...) {
#pragma omp critical
                if (!error) error = std::current_exception();
            }
        }
        if (error) std::rethrow_exception(error);
        for (int mi = 0; mi < num_methods; ++mi) {
            grid[mi][ki] = aggregate(spec.methods[mi], config, samples[mi]);
        }
    }

    std::vector<CapacityRow> rows;
    rows.reserve(static_cast<std::size_t>(num_methods) * num_counts);
    for (int mi = 0; mi < num_methods; ++mi) {
        for (int ki = 0; ki < num_counts; ++ki) rows.push_back(std::move(grid[mi][ki]));
    }
    return rows;
}

std::vector<CapacityRow> run_fairness_experiment(const ExperimentSpec& spec) {
    if (spec.user_counts.size() != 1) {
        throw std::invalid_argument("fairness experiment needs exactly one user count");
    }
    return run_capacity_sweep(spec);
}

namespace {

std::string format_value(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.9g", value);
    return buffer;
}

}  // namespace

std::string to_csv(const std::vector<CapacityRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("to_csv: no rows");
    std::string out = "method,K,capacity_mean,capacity_se,deviation,ratios...\n";
    for (const CapacityRow& row : rows) {
        out += row.method;
        out += ',';
        out += std::to_string(row.num_users);
        out += ',';
        out += format_value(row.capacity_mean);
        out += ',';
        out += format_value(row.capacity_se);
        out += ',';
        out += format_value(row.deviation);
        for (double ratio : row.ratios) {
            out += ',';
            out += format_value(ratio);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const std::vector<CapacityRow>& rows, const std::string& destination) {
    if (destination.empty()) throw IoError("write_csv: empty destination path");
    const std::string text = to_csv(rows);
    std::ofstream file(destination, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("write_csv: cannot open " + destination);
    file << text;
    file.flush();
    if (!file.good()) throw IoError("write_csv: write to " + destination + " failed");
}

namespace {

double parse_double_strict(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("");
        return value;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad numeric value for " + what + ": '" + text + "'");
    }
}

long long parse_int_strict(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const long long value = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument("");
        return value;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad integer value for " + what + ": '" + text + "'");
    }
}

std::uint64_t parse_uint64_strict(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        const unsigned long long value = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument("");
        return value;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad integer value for " + what + ": '" + text + "'");
    }
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& text, const std::string& what, Parse parse) {
    std::vector<T> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::size_t end = comma == std::string::npos ? text.size() : comma;
        values.push_back(parse(trim(text.substr(start, end - start)), what));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return values;
}

bool parse_bool(const std::string& text, const std::string& what) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw std::invalid_argument("bad boolean value for " + what + ": '" + text + "'");
}

void apply_entry(ExperimentSpec& spec, const std::string& key, const std::string& value) {
    if (key == "method") {
        spec.methods = parse_method_list(value);
    } else if (key == "user_counts") {
        const auto counts = parse_list<long long>(value, key, parse_int_strict);
        spec.user_counts.assign(counts.begin(), counts.end());
    } else if (key == "num_subcarriers") {
        spec.num_subcarriers = static_cast<int>(parse_int_strict(value, key));
    } else if (key == "num_realizations") {
        spec.num_realizations = static_cast<int>(parse_int_strict(value, key));
    } else if (key == "master_seed") {
        spec.master_seed = parse_uint64_strict(value, key);
    } else if (key == "avg_snr_db") {
        spec.avg_snr_db = parse_double_strict(value, key);
    } else if (key == "snr_gap") {
        spec.snr_gap = parse_double_strict(value, key);
    } else if (key == "snr_gap_db") {
        spec.snr_gap = std::pow(10.0, parse_double_strict(value, key) / 10.0);
    } else if (key == "rate_ratios") {
        spec.ratio_pattern = parse_list<double>(value, key, parse_double_strict);
    } else if (key == "taps") {
        spec.num_taps = static_cast<int>(parse_int_strict(value, key));
    } else if (key == "total_power") {
        spec.total_power = parse_double_strict(value, key);
    } else if (key == "rate_target_bits") {
        spec.rate_target_bits = static_cast<int>(parse_int_strict(value, key));
    } else if (key == "max_bits") {
        spec.max_bits = static_cast<int>(parse_int_strict(value, key));
    } else if (key == "gap_in_capacity") {
        spec.gap_in_capacity = parse_bool(value, key);
    } else if (key == "execution") {
        if (value == "serial") {
            spec.execution = Execution::kSerial;
        } else if (value == "parallel") {
            spec.execution = Execution::kParallel;
        } else {
            throw std::invalid_argument("execution must be 'serial' or 'parallel'");
        }
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

}  // namespace

void apply_config_file(const std::string& path, ExperimentSpec& spec) {
    std::ifstream file(path);
    if (!file) throw IoError("cannot read config file " + path);
    std::string line;
    int line_number = 0;
    while (std::getline(file, line)) {
        ++line_number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_number) +
                                        ": expected 'key = value'");
        }
        apply_entry(spec, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
}

}  // namespace ofdma
