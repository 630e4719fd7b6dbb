#pragma once

#include "cellfree/config.hpp"
#include "cellfree/dcc.hpp"
#include "cellfree/estimation.hpp"
#include "cellfree/power.hpp"
#include "cellfree/processing.hpp"
#include "cellfree/rng.hpp"
#include "cellfree/topology.hpp"

#include <memory>
#include <vector>

namespace cellfree::testing {

/// A network drop with statistics and processing context. Not movable: the
/// context points into the other members.
struct Instance {
    SimulationConfig cfg;
    Topology topo;
    ClusterAssignment assign;
    std::vector<double> power;
    std::unique_ptr<EstimationStatistics> stats;
    ProcessingContext ctx;
    std::size_t redraws = 0;  // drops rejected because a master ran out of pilots

    Instance() = default;
    Instance(const Instance&) = delete;
    Instance& operator=(const Instance&) = delete;
};

inline SimulationConfig small_config(std::size_t L, std::size_t N, std::size_t K, std::size_t tau, double side_km) {
    SimulationConfig c;
    c.num_aps = L;
    c.antennas_per_ap = N;
    c.num_ues = K;
    c.pilot_len = tau;
    c.coherence_len = 200;
    c.ul_data_len = 100;
    c.dl_data_len = 90;
    c.area_side_km = side_km;
    c.noise_ul_w = c.noise_dl_w = dbm_to_watt(kDefaultNoiseDbm);
    return c;
}

/// Topology and clustering drawn from `rng`; `power` empty means full power.
/// Drops where admission fails are redrawn.
inline std::unique_ptr<Instance> make_instance(const SimulationConfig& cfg, Engine& rng,
                                               std::vector<double> power = {}, std::size_t max_redraws = 1000) {
    auto in = std::make_unique<Instance>();
    in->cfg = cfg;
    const AccessPolicy policy = AccessPolicy::from_config(cfg);
    for (;;) {
        in->topo = build_topology(cfg, rng);
        try {
            in->assign = cfg.serve_all ? serve_all_assignment(in->topo, cfg.pilot_len, policy)
                                       : run_access(in->topo, cfg.pilot_len, policy);
            break;
        } catch (const AdmissionError&) {
            if (++in->redraws == max_redraws) throw;
        }
    }
    in->power = power.empty() ? ul_full_power(cfg) : std::move(power);
    in->stats = std::make_unique<EstimationStatistics>(in->topo, in->assign, in->power, cfg.noise_ul_w);
    in->ctx = make_context(in->topo, in->assign, *in->stats);
    return in;
}

/// Instance over explicit statistics. `pilots[k]` is UE k's pilot and
/// `clusters[k]` its serving APs; the first entry is the master.
inline std::unique_ptr<Instance> manual_instance(Topology topo, std::size_t pilot_len, const std::vector<int>& pilots,
                                                 const std::vector<std::vector<std::size_t>>& clusters,
                                                 std::vector<double> power, double noise) {
    auto in = std::make_unique<Instance>();
    in->cfg.num_aps = topo.num_aps();
    in->cfg.antennas_per_ap = topo.antennas();
    in->cfg.num_ues = topo.num_ues();
    in->cfg.pilot_len = pilot_len;
    in->cfg.coherence_len = 200;
    in->cfg.ul_data_len = 190;
    in->cfg.noise_ul_w = in->cfg.noise_dl_w = noise;
    in->topo = std::move(topo);
    in->assign = ClusterAssignment(in->topo.num_aps(), in->topo.num_ues(), pilot_len);
    for (std::size_t k = 0; k < pilots.size(); ++k) {
        in->assign.pilot_of[k] = pilots[k];
        in->assign.master_of[k] = static_cast<int>(clusters[k].front());
        for (std::size_t l : clusters[k]) in->assign.serve(k, l);
    }
    in->power = std::move(power);
    in->stats = std::make_unique<EstimationStatistics>(in->topo, in->assign, in->power, noise);
    in->ctx = make_context(in->topo, in->assign, *in->stats);
    return in;
}

/// One AP, one UE, one antenna: R = r, pilot 0 of `pilot_len`.
inline std::unique_ptr<Instance> scalar_instance(double r = 2.0, double p = 0.1, std::size_t pilot_len = 10,
                                                 double noise = 1.0) {
    Topology topo(1, 1, 1, {CMat::Constant(1, 1, r)});
    return manual_instance(std::move(topo), pilot_len, {0}, {{0}}, {p}, noise);
}

/// Estimates from explicit per-pair vectors, index k * L + l.
inline ChannelEstimates estimates_from(std::size_t L, std::size_t K, std::vector<CVec> hhat) {
    ChannelEstimates e;
    e.num_aps = L;
    e.num_ues = K;
    e.hhat = std::move(hhat);
    e.present.assign(L * K, 1);
    return e;
}

}  // namespace cellfree::testing
