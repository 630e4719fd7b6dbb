#pragma once

#include "cellfree/dcc.hpp"
#include "cellfree/rng.hpp"
#include "cellfree/topology.hpp"
#include "cellfree/types.hpp"

#include <span>
#include <vector>

namespace cellfree {

/// Channel statistics that stay fixed for a network drop: Psi_tl, the MMSE
/// filters sqrt(p tau_p) R Psi^-1, estimate covariances p tau_p R Psi^-1 R and
/// error covariances C = R - p tau_p R Psi^-1 R, for every (k, l) pair.
class EstimationStatistics {
public:
    EstimationStatistics() = default;
    EstimationStatistics(const Topology& topo, const ClusterAssignment& a, std::span<const double> ue_power,
                         double noise_w);

    std::size_t num_aps() const { return L_; }
    std::size_t num_ues() const { return K_; }
    std::size_t antennas() const { return N_; }
    std::size_t pilot_len() const { return tau_; }
    double noise() const { return noise_; }
    double power(std::size_t k) const { return p_[k]; }
    std::span<const double> powers() const { return p_; }
    int pilot_of(std::size_t k) const { return pilot_[k]; }

    const CMat& psi(std::size_t t, std::size_t l) const { return psi_[t * L_ + l]; }
    const CMat& filter(std::size_t k, std::size_t l) const { return filter_[k * L_ + l]; }
    const CMat& estimate_cov(std::size_t k, std::size_t l) const { return est_cov_[k * L_ + l]; }
    const CMat& error_cov(std::size_t k, std::size_t l) const { return err_cov_[k * L_ + l]; }

    /// R_il Psi_tl^-1 R_kl for the shared pilot t; zero when t_i != t_k.
    CMat cross_term(std::size_t i, std::size_t k, std::size_t l, const Topology& topo) const;

private:
    std::size_t L_ = 0, K_ = 0, N_ = 0, tau_ = 0;
    double noise_ = 0.0;
    std::vector<double> p_;
    std::vector<int> pilot_;
    std::vector<CMat> psi_;
    std::vector<Eigen::LLT<CMat>> psi_chol_;
    std::vector<CMat> filter_;
    std::vector<CMat> est_cov_;
    std::vector<CMat> err_cov_;
};

/// Psi_tl = sum_{i in S_t} tau_p p_i R_il + sigma^2 I.
CMat pilot_correlation(std::span<const std::size_t> sharers, std::size_t l, const Topology& topo,
                       std::span<const double> ue_power, std::size_t pilot_len, double noise_w);

/// C = R - p tau_p R Psi^-1 R.
CMat error_covariance(const CMat& R, const CMat& psi, double power, std::size_t pilot_len);

/// Despread pilot observations y_tl, index t * L + l.
struct PilotObservation {
    std::size_t num_aps = 0;
    std::vector<CVec> y;
    const CVec& at(std::size_t t, std::size_t l) const { return y[t * num_aps + l]; }
};

/// y_tl = sum_{i in S_t} sqrt(tau_p p_i) h_il + n_tl with n_tl ~ CN(0, sigma^2 I).
PilotObservation despread_pilots(const ChannelRealization& h, const ClusterAssignment& a,
                                 std::span<const double> ue_power, double noise_w, Engine& rng);

/// h_hat = F y with F the precomputed filter. Counts N^2 multiplications.
CVec mmse_estimate(const CMat& filter, const CVec& y, OpCounter* counter = nullptr);

/// Received pilot block at one AP (N x tau_p) for the DFT pilot book,
/// sum_i sqrt(p_i) h_il phi_{t_i}^T + noise.
CMat received_pilot_block(const ChannelRealization& h, std::size_t l, const ClusterAssignment& a,
                          std::span<const double> ue_power, double noise_w, Engine& rng);

/// Correlates the block with pilot t, normalized to unit-norm pilot energy.
/// Counts N tau_p multiplications.
CVec despread(const CMat& block, std::size_t t, OpCounter* counter = nullptr);

/// Per-realization estimates, index k * L + l. Unrequested pairs stay empty.
struct ChannelEstimates {
    std::size_t num_aps = 0, num_ues = 0;
    std::vector<CVec> hhat;
    std::vector<char> present;

    const CVec& at(std::size_t k, std::size_t l) const { return hhat[k * num_aps + l]; }
    bool has(std::size_t k, std::size_t l) const { return present[k * num_aps + l] != 0; }
};

/// Estimates every pair flagged in `demand` (K*L mask; empty means all).
ChannelEstimates estimate_channels(const EstimationStatistics& stats, const PilotObservation& obs,
                                   std::span<const char> demand = {});

}  // namespace cellfree
