#pragma once

#include "cellfree/config.hpp"
#include "cellfree/topology.hpp"
#include "cellfree/types.hpp"

#include <optional>
#include <set>
#include <span>
#include <vector>

namespace cellfree {

inline constexpr int kUnassigned = -1;

/// Dynamic cooperation clusters. AP l uses all N antennas for UE i iff
/// i is in served_by_ap[l]; the block-diagonal D matrices are never formed.
struct ClusterAssignment {
    ClusterAssignment() = default;
    ClusterAssignment(std::size_t num_aps, std::size_t num_ues, std::size_t pilot_len);

    std::size_t num_aps = 0;
    std::size_t num_ues = 0;
    std::size_t pilot_len = 0;

    std::vector<int> pilot_of;                        // t_k, 0-based
    std::vector<int> master_of;
    std::vector<std::set<std::size_t>> served_by_ap;  // D_l
    std::vector<std::set<std::size_t>> serving_aps;   // M_k

    bool admitted(std::size_t k) const { return master_of[k] != kUnassigned; }
    bool serves(std::size_t l, std::size_t k) const { return served_by_ap[l].count(k) != 0; }

    /// UE that AP l serves on pilot t. Under the one-UE-per-pilot rule there is
    /// at most one; the lowest index is returned otherwise.
    std::optional<std::size_t> ue_on_pilot(std::size_t l, std::size_t t) const;

    void serve(std::size_t k, std::size_t l);
    void drop(std::size_t k, std::size_t l);
};

/// S_t: UEs assigned to each pilot.
struct PilotBook {
    std::vector<std::vector<std::size_t>> sharers;
};

PilotBook pilot_book(const ClusterAssignment& a);

struct AccessPolicy {
    double neighbor_radius_km = 0.5;
    std::size_t neighbor_cap = 20;
    double noise_w = 0.0;
    std::vector<double> ue_power;

    static AccessPolicy from_config(const SimulationConfig& cfg);
};

/// argmax of the UE's large-scale gains; ties go to the lowest AP index.
std::size_t appoint_master(std::span<const double> beta_row);

/// argmin over unblocked pilots of the contamination trace; ties go to the
/// lowest pilot. Throws AdmissionError("master at capacity") when every
/// pilot is blocked.
std::size_t assign_pilot(std::span<const double> traces, const std::vector<bool>& blocked);

/// tr(Psi_tl) for every pilot t at AP l, counting admitted UEs only.
std::vector<double> pilot_traces(std::size_t l, const ClusterAssignment& a, const Topology& topo,
                                 const AccessPolicy& policy);

/// Pilots on which AP l already serves a UE it is master of.
std::vector<bool> master_blocked_pilots(std::size_t l, const ClusterAssignment& a);

/// APs within the wrap-around radius of the master (master excluded),
/// nearest first, at most `cap` of them.
std::vector<std::size_t> neighbor_aps(std::size_t master, const Topology& topo, double radius_km,
                                      std::size_t cap);

/// Records the master/pilot decision and applies the per-AP serve rule at the
/// master and each neighbor. A UE is never evicted from its master AP.
void form_cluster(std::size_t ue, std::size_t pilot, std::size_t master, std::span<const std::size_t> neighbors,
                  const Topology& topo, ClusterAssignment& a);

/// Master appointment, pilot choice and cluster formation for one UE.
void admit_ue(std::size_t ue, const Topology& topo, ClusterAssignment& a, const AccessPolicy& policy);

/// Admission with a pre-chosen pilot (the initial orthogonal batch).
void admit_ue_with_pilot(std::size_t ue, std::size_t pilot, const Topology& topo, ClusterAssignment& a,
                         const AccessPolicy& policy);

/// Removes a UE from every cluster so it can be admitted again.
void remove_ue(std::size_t ue, ClusterAssignment& a);

/// Initial batch of min(K, tau_p) UEs on distinct pilots, then the remaining
/// UEs one at a time in index order.
ClusterAssignment run_access(const Topology& topo, std::size_t pilot_len, const AccessPolicy& policy);

/// Benchmark clustering where every AP serves every UE. Pilots follow the same
/// initial-batch and least-contamination rule.
ClusterAssignment serve_all_assignment(const Topology& topo, std::size_t pilot_len, const AccessPolicy& policy);

/// P_k = { i : M_k and M_i intersect }.
std::vector<std::vector<std::size_t>> compute_partners(const ClusterAssignment& a);

/// Human-readable invariant violations; empty when the assignment is consistent
/// and respects one-UE-per-pilot at every AP.
std::vector<std::string> check_invariants(const ClusterAssignment& a);

}  // namespace cellfree
