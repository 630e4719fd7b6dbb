#pragma once

#include "cellfree/config.hpp"
#include "cellfree/dcc.hpp"
#include "cellfree/types.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cellfree {

/// Complex scalars AP l exchanges with the CPU per coherence block.
struct FronthaulLoad {
    std::uint64_t pilot = 0;
    std::uint64_t uplink = 0;
    std::uint64_t downlink = 0;

    std::uint64_t total() const { return pilot + uplink + downlink; }
    bool operator==(const FronthaulLoad&) const = default;
};

/// Centralized: (tau_p N, tau_u N, tau_d N); distributed: (0, tau_u |D_l|, tau_d |D_l|).
std::vector<FronthaulLoad> fronthaul_load(Mode mode, const ClusterAssignment& a, const SimulationConfig& cfg);

/// Complex multiplications for one UE per coherence block.
struct ComplexityCount {
    std::uint64_t estimation = 0;
    std::uint64_t combining = 0;

    bool operator==(const ComplexityCount&) const = default;
};

/// Evaluates the per-UE cost formulas for a fixed assignment. Partner sets
/// are computed once at construction.
class CostModel {
public:
    CostModel(const ClusterAssignment& a, std::size_t antennas);

    ComplexityCount count(Scheme s, std::size_t k) const;

    std::size_t cluster_size(std::size_t k) const { return a_->serving_aps[k].size(); }
    std::size_t partner_count(std::size_t k) const { return partners_[k].size(); }
    std::size_t served_sum(std::size_t k) const;

private:
    const ClusterAssignment* a_;
    std::size_t N_;
    std::vector<std::vector<std::size_t>> partners_;
};

ComplexityCount multiplication_count(Scheme s, std::size_t k, const ClusterAssignment& a, std::size_t antennas);

struct ScalabilityReport {
    bool scalable = true;
    std::vector<std::string> violations;
};

/// True iff every assignment of the sweep has max_l |D_l| <= tau_p, a master
/// inside every M_k, |M_k| <= cap + 1, and P-MMSE / LP-MMSE counts below the
/// K-independent bounds implied by |P_k| <= (tau_p - 1)|M_k| + 1 and
/// sum_{l in M_k} |D_l| <= tau_p |M_k|.
ScalabilityReport assert_scalable(std::span<const ClusterAssignment> sweep, std::size_t antennas,
                                  std::size_t neighbor_cap);

}  // namespace cellfree
