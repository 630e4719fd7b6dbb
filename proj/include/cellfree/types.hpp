#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cellfree {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// Receive-combining / transmit-precoding families.
enum class Scheme { MR, MMSE, PMMSE, LMMSE, LPMMSE };

/// Level of AP cooperation: CPU-side processing or per-AP local processing.
enum class Mode { Centralized, Distributed };

enum class Direction { Uplink, Downlink, DownlinkGenie };

std::string_view to_string(Scheme s);
std::string_view to_string(Mode m);
std::string_view to_string(Direction d);

Scheme parse_scheme(std::string_view name);
Mode parse_mode(std::string_view name);
Direction parse_direction(std::string_view name);

/// Schemes whose per-AP complexity stays bounded as the number of UEs grows.
bool is_scalable(Scheme s);

/// Schemes that solve on the collective N|M_k| subspace at the CPU.
bool is_centralized_scheme(Scheme s);

inline constexpr Scheme kAllSchemes[] = {Scheme::MR, Scheme::MMSE, Scheme::PMMSE, Scheme::LMMSE,
                                          Scheme::LPMMSE};

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AdmissionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Complex-multiplication tally filled in by the instrumented estimation and
/// combining kernels.
struct OpCounter {
    std::uint64_t estimation = 0;
    std::uint64_t combining = 0;
};

}  // namespace cellfree
