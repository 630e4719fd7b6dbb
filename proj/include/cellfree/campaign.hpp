#pragma once

#include "cellfree/config.hpp"
#include "cellfree/dcc.hpp"
#include "cellfree/estimation.hpp"
#include "cellfree/performance.hpp"
#include "cellfree/topology.hpp"
#include "cellfree/types.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace cellfree {

struct SEEntry {
    std::size_t ue = 0;  // setup * K + k
    Scheme scheme = Scheme::MR;
    Direction direction = Direction::Uplink;
    double se = 0.0;
    double std_error = 0.0;
};

/// Per-UE spectral efficiencies of a campaign. Entries are ordered by scheme
/// (config order), then direction, then UE.
struct SEReport {
    std::vector<SEEntry> entries;
    std::vector<std::pair<Scheme, Direction>> columns;
    std::size_t num_setups = 0;
    std::size_t ues_per_setup = 0;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    std::string config_text;

    std::vector<double> values(Scheme s, Direction d) const;
    double mean(Scheme s, Direction d) const;
    /// Mean over the UEs of each setup.
    std::vector<double> setup_means(Scheme s, Direction d) const;
    bool operator==(const SEReport&) const;
};

/// Everything about one network drop that stays fixed across realizations.
struct SetupState {
    Topology topo;
    ClusterAssignment assign;
    std::vector<double> ue_power;
    std::unique_ptr<EstimationStatistics> stats;
    ProcessingContext ctx;
};

/// Topology, access procedure (or serve-all benchmark) and statistics of
/// setup `index`; depends only on (cfg.seed, index).
std::unique_ptr<SetupState> build_setup(const SimulationConfig& cfg, std::size_t index);

/// Evaluation options for a setup following the configured mode and powers.
EvaluationOptions evaluation_options(const SimulationConfig& cfg, const SetupState& setup, std::size_t index,
                                     std::size_t threads);

struct CampaignOptions {
    std::size_t threads = 1;
    std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Runs every setup of the campaign. Throws std::invalid_argument("no
/// realizations") when the realization count is zero.
SEReport run_campaign(const SimulationConfig& cfg, const CampaignOptions& opt = {});

/// Writes se.csv (ue,scheme,direction,se,stderr), cdf_<scheme>_<direction>.csv
/// (se,cdf) and metadata.json into `dir`, creating it when needed.
void emit_results(const SEReport& report, const std::filesystem::path& dir);

/// File-name form of a scheme/direction pair, e.g. "p-mmse_ul".
std::string column_tag(Scheme s, Direction d);

/// Shortest round-trip decimal text.
std::string format_double(double v);

}  // namespace cellfree
