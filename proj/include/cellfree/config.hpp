#pragma once

#include "cellfree/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cellfree {

/// Large-scale propagation constants. Gain in dB at distance d (metres) is
/// -ref_loss_db - slope_db * log10(d) + shadowing.
struct ChannelModel {
    double ref_loss_db = 30.5;
    double slope_db = 36.7;
    double shadowing_std_db = 4.0;
    double angular_spread_deg = 15.0;

    bool operator==(const ChannelModel&) const = default;
};

struct SimulationConfig {
    // network
    std::size_t num_aps = 0;
    std::size_t antennas_per_ap = 0;
    std::size_t num_ues = 0;
    double area_side_km = 2.0;
    double ap_height_m = 10.0;

    // coherence block
    std::size_t coherence_len = 0;
    std::size_t pilot_len = 0;
    std::size_t ul_data_len = 0;
    std::size_t dl_data_len = 0;

    // powers in watts
    double ue_power_w = 0.1;
    double ap_power_w = 1.0;
    double noise_ul_w = 0.0;
    double noise_dl_w = 0.0;

    ChannelModel channel;

    // cluster formation
    double neighbor_radius_km = 0.5;
    std::size_t neighbor_cap = 20;
    bool serve_all = false;

    // campaign
    std::uint64_t seed = 0;
    std::size_t num_setups = 1;
    std::size_t num_realizations = 100;
    std::vector<Scheme> schemes{Scheme::MR};
    Mode mode = Mode::Distributed;
    bool genie = false;

    double ul_prelog() const {
        return static_cast<double>(ul_data_len) / static_cast<double>(coherence_len);
    }
    double dl_prelog() const {
        return static_cast<double>(dl_data_len) / static_cast<double>(coherence_len);
    }

    bool operator==(const SimulationConfig&) const = default;
};

double dbm_to_watt(double dbm);
double watt_to_dbm(double w);

/// Thermal noise for a 20 MHz channel with a 7 dB noise figure.
inline constexpr double kDefaultNoiseDbm = -94.0;

/// Reads a key/value file. Sections in brackets prefix the keys that follow
/// them (`[frame]` + `pilot_len` is `frame.pilot_len`); dotted keys are
/// accepted anywhere. `#` and `;` start comments.
SimulationConfig parse_config(const std::filesystem::path& path);
SimulationConfig parse_config_text(std::string_view text);

/// Throws ValidationError on the first violated invariant.
void validate(const SimulationConfig& cfg);

/// Canonical text form; parse_config_text(to_text(c)) == c.
std::string to_text(const SimulationConfig& cfg);

/// FNV-1a over the canonical text.
std::uint64_t config_hash(const SimulationConfig& cfg);

}  // namespace cellfree
