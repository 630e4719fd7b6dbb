#pragma once

#include "cellfree/config.hpp"
#include "cellfree/dcc.hpp"
#include "cellfree/performance.hpp"
#include "cellfree/topology.hpp"

#include <span>
#include <vector>

namespace cellfree {

class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// p_i = P for every UE.
std::vector<double> ul_full_power(const SimulationConfig& cfg);

/// rho_i = rho / tau_p for every UE.
std::vector<double> dl_centralized_equal(const SimulationConfig& cfg);

/// K x L matrix rho_kl = rho sqrt(beta_kl) / sum_{i in D_l} sqrt(beta_il) for
/// k in D_l, zero otherwise.
Eigen::MatrixXd dl_distributed_proportional(const ClusterAssignment& a, const Topology& topo, double ap_power);

/// Gamma (diagonal), Sigma and the uplink SINR targets gamma_k built from the
/// uplink moments with precoders wbar_i = D_i v_i / sqrt(E||D_i v_i||^2).
struct DualityMatrices {
    Eigen::MatrixXd gamma;
    Eigen::MatrixXd sigma;
    std::vector<double> target;
};

DualityMatrices duality_matrices(const UplinkMoments& m, std::span<const double> p, double noise_ul);

/// Downlink moments of the dual precoders with powers rho, derived from the
/// uplink moments without sampling.
DownlinkMoments dual_downlink_moments(const UplinkMoments& m, std::span<const double> rho);

struct DualityResult {
    std::vector<double> rho;
    DualityMatrices matrices;
    std::vector<double> ul_sinr;
    std::vector<double> dl_sinr;
};

/// rho = (Gamma - Sigma)^-1 1 sigma_dl^2. Verifies the total-power identity to
/// 1e-9 and per-UE SINR equality to `sinr_tol` (relative). Throws
/// InfeasibleError when Gamma - Sigma is singular and NumericError when a
/// power is negative beyond -1e-12 or a check fails.
DualityResult duality_power(const UplinkMoments& m, std::span<const double> p, double noise_ul, double noise_dl,
                            double sinr_tol = 1e-6);

/// Per-AP transmit power sum_{i in D_l} rho_i E||wbar_il||^2 for centralized
/// precoders, with E||wbar_il||^2 = E||v_il||^2 / E||D_i v_i||^2.
std::vector<double> centralized_ap_power(const ProcessingContext& ctx, std::span<const double> rho,
                                         const SchemeResult& r);

}  // namespace cellfree
