#pragma once

#include "cellfree/campaign.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cellfree {

/// One campaign of a scenario, e.g. "MMSE (All)" in centralized mode with every
/// AP serving every UE.
struct CampaignSpec {
    std::string name;
    SimulationConfig cfg;
};

/// Comparison of two labelled SE columns.
struct OrderingClaim {
    std::string better;  // label such as "P-MMSE" or "MR (All)"
    std::string worse;
    Direction direction = Direction::Uplink;
};

/// Mean-ratio claim: mean(numerator) / mean(denominator) in [lo, hi].
struct RatioClaim {
    std::string name;
    std::string numerator;
    Direction num_direction = Direction::Uplink;
    std::string denominator;
    Direction den_direction = Direction::Uplink;
    double lo = 0.0;
    double hi = 1e300;
};

/// Downlink hardening bound as a fraction of the genie-aided SE: the mean
/// ratio of `better` exceeds that of `worse`.
struct HardeningClaim {
    std::string better;
    std::string worse;
};

struct Scenario {
    std::string name;
    std::string description;
    bool full_scale = false;
    std::vector<CampaignSpec> campaigns;
    std::vector<OrderingClaim> orderings;
    std::vector<RatioClaim> ratios;
    std::vector<HardeningClaim> hardening;
    /// Sign test that the genie-aided SE is at least the bound for every
    /// downlink column.
    bool check_genie_dominance = false;
};

struct ScenarioOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> num_setups;
    std::optional<std::size_t> num_realizations;
};

std::vector<std::string> scenario_names();

/// Throws std::invalid_argument for an unknown name.
Scenario make_scenario(std::string_view name, const ScenarioOverrides& ov = {});

struct ColumnSummary {
    std::string label;  // "LP-MMSE", "MR (All)", ...
    std::string campaign;
    Scheme scheme = Scheme::MR;
    Direction direction = Direction::Uplink;
    double mean = 0.0;
    std::vector<double> setup_means;
};

struct PropertyResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ScenarioReport {
    std::string name;
    std::vector<std::pair<std::string, SEReport>> reports;
    std::vector<ColumnSummary> columns;
    std::vector<PropertyResult> properties;

    const ColumnSummary& column(std::string_view label, Direction d) const;
    bool passed() const;
};

/// Smallest c with P(Binomial(n, 1/2) >= c) < alpha.
std::size_t sign_test_threshold(std::size_t n, double alpha = 0.05);

ScenarioReport run_scenario(const Scenario& sc, const CampaignOptions& opt = {});

/// summary.csv (label,direction,mean_se), properties.csv (property,pass,detail)
/// and one subdirectory of per-campaign results.
void emit_scenario(const ScenarioReport& rep, const std::filesystem::path& dir);

}  // namespace cellfree
