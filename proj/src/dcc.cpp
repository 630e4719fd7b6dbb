#include "cellfree/dcc.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace cellfree {

ClusterAssignment::ClusterAssignment(std::size_t aps, std::size_t ues, std::size_t pilots)
    : num_aps(aps),
      num_ues(ues),
      pilot_len(pilots),
      pilot_of(ues, kUnassigned),
      master_of(ues, kUnassigned),
      served_by_ap(aps),
      serving_aps(ues) {}

std::optional<std::size_t> ClusterAssignment::ue_on_pilot(std::size_t l, std::size_t t) const {
    for (std::size_t i : served_by_ap[l])
        if (pilot_of[i] == static_cast<int>(t)) return i;
    return std::nullopt;
}

void ClusterAssignment::serve(std::size_t k, std::size_t l) {
    served_by_ap[l].insert(k);
    serving_aps[k].insert(l);
}

void ClusterAssignment::drop(std::size_t k, std::size_t l) {
    served_by_ap[l].erase(k);
    serving_aps[k].erase(l);
}

PilotBook pilot_book(const ClusterAssignment& a) {
    PilotBook book;
    book.sharers.resize(a.pilot_len);
    for (std::size_t k = 0; k < a.num_ues; ++k)
        if (a.pilot_of[k] != kUnassigned) book.sharers[static_cast<std::size_t>(a.pilot_of[k])].push_back(k);
    return book;
}

AccessPolicy AccessPolicy::from_config(const SimulationConfig& cfg) {
    AccessPolicy p;
    p.neighbor_radius_km = cfg.neighbor_radius_km;
    p.neighbor_cap = cfg.neighbor_cap;
    p.noise_w = cfg.noise_ul_w;
    p.ue_power.assign(cfg.num_ues, cfg.ue_power_w);
    return p;
}

std::size_t appoint_master(std::span<const double> beta_row) {
    if (beta_row.empty()) throw std::invalid_argument("appoint_master: no APs");
    std::size_t best = 0;
    for (std::size_t l = 1; l < beta_row.size(); ++l)
        if (beta_row[l] > beta_row[best]) best = l;
    return best;
}

std::size_t assign_pilot(std::span<const double> traces, const std::vector<bool>& blocked) {
    std::optional<std::size_t> best;
    for (std::size_t t = 0; t < traces.size(); ++t) {
        if (t < blocked.size() && blocked[t]) continue;
        if (!best || traces[t] < traces[*best]) best = t;
    }
    if (!best) throw AdmissionError("master at capacity: every pilot is taken by a UE it is master of");
    return *best;
}

std::vector<double> pilot_traces(std::size_t l, const ClusterAssignment& a, const Topology& topo,
                                 const AccessPolicy& policy) {
    const double n = static_cast<double>(topo.antennas());
    const double tau = static_cast<double>(a.pilot_len);
    std::vector<double> tr(a.pilot_len, n * policy.noise_w);
    for (std::size_t i = 0; i < a.num_ues; ++i) {
        if (a.pilot_of[i] == kUnassigned) continue;
        tr[static_cast<std::size_t>(a.pilot_of[i])] += tau * policy.ue_power[i] * n * topo.beta(i, l);
    }
    return tr;
}

std::vector<bool> master_blocked_pilots(std::size_t l, const ClusterAssignment& a) {
    std::vector<bool> blocked(a.pilot_len, false);
    for (std::size_t i : a.served_by_ap[l])
        if (a.master_of[i] == static_cast<int>(l)) blocked[static_cast<std::size_t>(a.pilot_of[i])] = true;
    return blocked;
}

std::vector<std::size_t> neighbor_aps(std::size_t master, const Topology& topo, double radius_km,
                                      std::size_t cap) {
    const auto& aps = topo.placement.aps;
    std::vector<std::pair<double, std::size_t>> near;
    for (std::size_t l = 0; l < aps.size(); ++l) {
        if (l == master) continue;
        const double d = wraparound_distance(aps[master], aps[l], topo.side_km, 0.0);
        if (d <= radius_km) near.emplace_back(d, l);
    }
    std::sort(near.begin(), near.end());
    if (near.size() > cap) near.resize(cap);
    std::vector<std::size_t> out;
    out.reserve(near.size());
    for (const auto& [d, l] : near) out.push_back(l);
    return out;
}

void form_cluster(std::size_t ue, std::size_t pilot, std::size_t master, std::span<const std::size_t> neighbors,
                  const Topology& topo, ClusterAssignment& a) {
    a.pilot_of[ue] = static_cast<int>(pilot);
    a.master_of[ue] = static_cast<int>(master);

    if (auto occ = a.ue_on_pilot(master, pilot); occ && *occ != ue) {
        if (a.master_of[*occ] == static_cast<int>(master))
            throw AdmissionError("form_cluster: master AP already anchors a UE on pilot " + std::to_string(pilot));
        a.drop(*occ, master);
    }
    a.serve(ue, master);

    for (std::size_t l : neighbors) {
        if (l == master) continue;
        auto occ = a.ue_on_pilot(l, pilot);
        if (!occ) {
            a.serve(ue, l);
        } else if (a.master_of[*occ] != static_cast<int>(l) && topo.beta(ue, l) > topo.beta(*occ, l)) {
            a.drop(*occ, l);
            a.serve(ue, l);
        }
    }
}

namespace {

std::vector<double> beta_row(const Topology& topo, std::size_t k) {
    std::vector<double> row(topo.num_aps());
    for (std::size_t l = 0; l < row.size(); ++l) row[l] = topo.beta(k, l);
    return row;
}

void require_fresh(std::size_t ue, const ClusterAssignment& a) {
    if (ue >= a.num_ues) throw std::out_of_range("admit_ue: UE index out of range");
    if (a.admitted(ue)) throw AdmissionError("admit_ue: UE " + std::to_string(ue) + " is already admitted");
}

}  // namespace

void admit_ue(std::size_t ue, const Topology& topo, ClusterAssignment& a, const AccessPolicy& policy) {
    require_fresh(ue, a);
    const auto row = beta_row(topo, ue);
    const std::size_t master = appoint_master(row);
    const auto traces = pilot_traces(master, a, topo, policy);
    const auto blocked = master_blocked_pilots(master, a);
    const std::size_t pilot = assign_pilot(traces, blocked);
    const auto nbrs = neighbor_aps(master, topo, policy.neighbor_radius_km, policy.neighbor_cap);
    form_cluster(ue, pilot, master, nbrs, topo, a);
}

void admit_ue_with_pilot(std::size_t ue, std::size_t pilot, const Topology& topo, ClusterAssignment& a,
                         const AccessPolicy& policy) {
    require_fresh(ue, a);
    if (pilot >= a.pilot_len) throw std::out_of_range("admit_ue_with_pilot: pilot index out of range");
    const auto row = beta_row(topo, ue);
    const std::size_t master = appoint_master(row);
    if (master_blocked_pilots(master, a)[pilot])
        throw AdmissionError("admit_ue_with_pilot: pilot already anchored at the master AP");
    const auto nbrs = neighbor_aps(master, topo, policy.neighbor_radius_km, policy.neighbor_cap);
    form_cluster(ue, pilot, master, nbrs, topo, a);
}

void remove_ue(std::size_t ue, ClusterAssignment& a) {
    for (std::size_t l : std::set<std::size_t>(a.serving_aps[ue])) a.drop(ue, l);
    a.pilot_of[ue] = kUnassigned;
    a.master_of[ue] = kUnassigned;
}

ClusterAssignment run_access(const Topology& topo, std::size_t pilot_len, const AccessPolicy& policy) {
    ClusterAssignment a(topo.num_aps(), topo.num_ues(), pilot_len);
    const std::size_t batch = std::min(pilot_len, topo.num_ues());
    for (std::size_t k = 0; k < batch; ++k) admit_ue_with_pilot(k, k, topo, a, policy);
    for (std::size_t k = batch; k < topo.num_ues(); ++k) admit_ue(k, topo, a, policy);
    return a;
}

ClusterAssignment serve_all_assignment(const Topology& topo, std::size_t pilot_len, const AccessPolicy& policy) {
    AccessPolicy masters_only = policy;
    masters_only.neighbor_cap = 0;
    ClusterAssignment a = run_access(topo, pilot_len, masters_only);
    for (std::size_t k = 0; k < a.num_ues; ++k)
        for (std::size_t l = 0; l < a.num_aps; ++l) a.serve(k, l);
    return a;
}

std::vector<std::vector<std::size_t>> compute_partners(const ClusterAssignment& a) {
    std::vector<std::vector<std::size_t>> partners(a.num_ues);
    for (std::size_t k = 0; k < a.num_ues; ++k) {
        std::set<std::size_t> p;
        for (std::size_t l : a.serving_aps[k]) p.insert(a.served_by_ap[l].begin(), a.served_by_ap[l].end());
        partners[k].assign(p.begin(), p.end());
    }
    return partners;
}

std::vector<std::string> check_invariants(const ClusterAssignment& a) {
    std::vector<std::string> bad;
    for (std::size_t l = 0; l < a.num_aps; ++l) {
        if (a.served_by_ap[l].size() > a.pilot_len)
            bad.push_back("AP " + std::to_string(l) + " serves more UEs than there are pilots");
        std::vector<int> seen(a.pilot_len, 0);
        for (std::size_t k : a.served_by_ap[l]) {
            if (!a.serving_aps[k].count(l))
                bad.push_back("D/M mismatch for UE " + std::to_string(k) + " at AP " + std::to_string(l));
            if (a.pilot_of[k] == kUnassigned)
                bad.push_back("AP " + std::to_string(l) + " serves unadmitted UE " + std::to_string(k));
            else if (++seen[static_cast<std::size_t>(a.pilot_of[k])] > 1)
                bad.push_back("AP " + std::to_string(l) + " serves two UEs on pilot " + std::to_string(a.pilot_of[k]));
        }
    }
    for (std::size_t k = 0; k < a.num_ues; ++k) {
        if (!a.admitted(k)) continue;
        if (a.serving_aps[k].empty()) bad.push_back("UE " + std::to_string(k) + " has no serving AP");
        if (!a.serving_aps[k].count(static_cast<std::size_t>(a.master_of[k])))
            bad.push_back("UE " + std::to_string(k) + " is not served by its master");
        for (std::size_t l : a.serving_aps[k])
            if (!a.served_by_ap[l].count(k))
                bad.push_back("M/D mismatch for UE " + std::to_string(k) + " at AP " + std::to_string(l));
    }
    return bad;
}

}  // namespace cellfree
