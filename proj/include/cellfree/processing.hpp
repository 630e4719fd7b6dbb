#pragma once

#include "cellfree/dcc.hpp"
#include "cellfree/estimation.hpp"
#include "cellfree/topology.hpp"
#include "cellfree/types.hpp"

#include <span>
#include <vector>

namespace cellfree {

/// Per-setup quantities shared by every combiner: sorted cluster lists and
/// the estimation-error sums that enter Z_k, Z'_k and the local Gram matrices.
struct ProcessingContext {
    const Topology* topo = nullptr;
    const ClusterAssignment* assign = nullptr;
    const EstimationStatistics* stats = nullptr;

    std::size_t num_aps = 0, num_ues = 0, antennas = 0;
    double noise = 0.0;
    std::vector<std::vector<std::size_t>> aps_of;    // M_k, sorted
    std::vector<std::vector<std::size_t>> ues_of;    // D_l, sorted
    std::vector<std::vector<std::size_t>> partners;  // P_k, sorted
    std::vector<CMat> total_cov;                     // sum_i p_i C_il + sigma^2 I, per AP
    std::vector<CMat> local_cov;                     // sum_{i in D_l} p_i C_il + sigma^2 I, per AP
    std::vector<std::vector<CMat>> partner_cov;      // per UE, per AP in M_k: sum_{i in P_k} p_i C_il + sigma^2 I

    double power(std::size_t k) const { return stats->power(k); }
};

ProcessingContext make_context(const Topology& topo, const ClusterAssignment& a, const EstimationStatistics& stats);

/// Collective vector restricted to the APs in `aps`: blocks of N entries in
/// the order of `aps`. Zero blocks of D_k are never stored.
struct Combiner {
    std::vector<std::size_t> aps;
    CVec v;

    auto block(std::size_t j, std::size_t n) const {
        return v.segment(static_cast<Eigen::Index>(j * n), static_cast<Eigen::Index>(n));
    }
};

/// [h_{i,l}]_{l in aps} stacked.
CVec stack_estimate(const ChannelEstimates& est, std::size_t i, std::span<const std::size_t> aps, std::size_t n);
CVec stack_channel(const ChannelRealization& h, std::size_t i, std::span<const std::size_t> aps);

/// Solves A x = b for Hermitian PSD A. Cholesky when A is positive definite,
/// otherwise the Hermitian pseudo-inverse with eigenvalues below
/// 1e-12 * lambda_max discarded.
CVec pseudo_solve(const CMat& A, const CVec& b);
CMat hermitian_pinv(const CMat& A);

Combiner mr_combiner(std::size_t k, const ProcessingContext& ctx, const ChannelEstimates& est);
Combiner mmse_combiner(std::size_t k, const ProcessingContext& ctx, const ChannelEstimates& est);
Combiner pmmse_combiner(std::size_t k, const ProcessingContext& ctx, const ChannelEstimates& est);
CVec lpmmse_combiner(std::size_t k, std::size_t l, const ProcessingContext& ctx, const ChannelEstimates& est);
CVec lmmse_combiner(std::size_t k, std::size_t l, const ProcessingContext& ctx, const ChannelEstimates& est);

/// Combiners of all K UEs for one realization. Factorizations are shared:
/// per cluster M_k for MMSE and P-MMSE, per AP for L-MMSE and LP-MMSE.
std::vector<Combiner> compute_combiners(Scheme s, const ProcessingContext& ctx, const ChannelEstimates& est);

/// Instantaneous SINR with analytic Z_k over all K error covariances.
/// `v` may be any vector on the M_k blocks.
double instantaneous_sinr(std::size_t k, const CVec& v, const ProcessingContext& ctx, const ChannelEstimates& est);

/// Largest value of instantaneous_sinr over all v.
double max_sinr(std::size_t k, const ProcessingContext& ctx, const ChannelEstimates& est);

/// w = v / sqrt(norm). Throws NumericError for a non-positive norm.
CVec normalize_precoder(const CVec& v, double norm);

/// Computes UE k's combiner from the raw pilot blocks of every AP while
/// tallying complex multiplications. Estimation counts are literal; Gram
/// updates count (n^2+n)/2 each, and each factorization plus solve is charged
/// (n^3-n)/3 + n^2.
Combiner instrumented_combiner(Scheme s, std::size_t k, const ProcessingContext& ctx,
                               std::span<const CMat> pilot_blocks, OpCounter& counter);

}  // namespace cellfree
