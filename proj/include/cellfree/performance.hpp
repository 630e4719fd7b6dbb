#pragma once

#include "cellfree/processing.hpp"
#include "cellfree/types.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace cellfree {

/// Mergeable running mean and co-moment matrix of D-dimensional samples.
/// Merging follows the pairwise update of Chan et al., so partial results of
/// realization batches combine in any fixed order.
template <std::size_t D>
class MomentStats {
public:
    void add(const std::array<double, D>& x) {
        ++n_;
        const double inv = 1.0 / static_cast<double>(n_);
        std::array<double, D> delta{};
        for (std::size_t i = 0; i < D; ++i) {
            delta[i] = x[i] - mean_[i];
            mean_[i] += delta[i] * inv;
        }
        for (std::size_t i = 0; i < D; ++i)
            for (std::size_t j = 0; j < D; ++j) m2_[i][j] += delta[i] * (x[j] - mean_[j]);
    }

    void merge(const MomentStats& o) {
        if (o.n_ == 0) return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
        const double n = na + nb;
        std::array<double, D> delta{};
        for (std::size_t i = 0; i < D; ++i) delta[i] = o.mean_[i] - mean_[i];
        for (std::size_t i = 0; i < D; ++i)
            for (std::size_t j = 0; j < D; ++j) m2_[i][j] += o.m2_[i][j] + delta[i] * delta[j] * na * nb / n;
        for (std::size_t i = 0; i < D; ++i) mean_[i] += delta[i] * nb / n;
        n_ += o.n_;
    }

    std::uint64_t count() const { return n_; }
    double mean(std::size_t i) const { return mean_[i]; }
    /// Unbiased sample covariance.
    double cov(std::size_t i, std::size_t j) const { return n_ > 1 ? m2_[i][j] / static_cast<double>(n_ - 1) : 0.0; }

private:
    std::uint64_t n_ = 0;
    std::array<double, D> mean_{};
    std::array<std::array<double, D>, D> m2_{};
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Expectations entering the use-and-then-forget bound.
/// cross(k, i) = E|v_k^H D_k h_i|^2.
struct UplinkMoments {
    std::vector<cd> signal;  // E{v_k^H D_k h_k}
    Eigen::MatrixXd cross;
    std::vector<double> norm;  // E||D_k v_k||^2
};

/// Expectations entering the hardening bound, transmit powers included.
/// cross(k, i) = E|h_k^H D_i w_i|^2.
struct DownlinkMoments {
    std::vector<cd> signal;  // E{h_k^H D_k w_k}
    Eigen::MatrixXd cross;
};

double ul_sinr_from_moments(std::size_t k, const UplinkMoments& m, std::span<const double> p, double noise_ul);
double dl_sinr_from_moments(std::size_t k, const DownlinkMoments& m, double noise_dl);

/// Closed-form MR moments of the uplink bound.
UplinkMoments ul_mr_closed_form_moments(const ProcessingContext& ctx);
std::vector<double> ul_se_mr_closed_form(const ProcessingContext& ctx, double prelog);

/// Exact moments of an MR-type precoder w_il = a(i, l) * hhat_il on l in M_i.
DownlinkMoments dl_mr_moments(const ProcessingContext& ctx, const Eigen::MatrixXd& amplitude);

/// Closed-form MR moments with per-AP powers rho(k, l) and per-AP unit-power
/// normalization.
DownlinkMoments dl_mr_closed_form_moments(const ProcessingContext& ctx, const Eigen::MatrixXd& rho);
std::vector<double> dl_se_mr_closed_form(const ProcessingContext& ctx, const Eigen::MatrixXd& rho, double prelog);

/// E||v_kl||^2 = tr(p tau_p R Psi^-1 R) for MR, per UE in M_k order.
std::vector<std::vector<double>> mr_norms_per_ap(const ProcessingContext& ctx);

struct EvaluationOptions {
    std::vector<Scheme> schemes;
    Mode mode = Mode::Distributed;
    bool uplink = true;
    bool downlink = false;
    bool genie = false;
    double ul_prelog = 0.0;
    double dl_prelog = 0.0;
    double noise_dl = 0.0;
    std::vector<double> rho_ue;  // centralized: total power per UE
    Eigen::MatrixXd rho_ap;      // distributed: K x L per-AP powers
    std::uint64_t seed = 0;
    std::uint64_t setup_index = 0;
    std::size_t num_realizations = 0;
    std::size_t threads = 1;
    std::size_t batch_size = 16;
    /// Known precoder normalizations. When set they replace the first-pass
    /// estimates of E||D_k v_k||^2 (centralized) or E||v_kl||^2 (distributed,
    /// l in M_k order), for every scheme.
    std::vector<double> norm_collective;
    std::vector<std::vector<double>> norm_per_ap;
};

struct SchemeResult {
    Scheme scheme = Scheme::MR;
    std::vector<Estimate> ul;     // instantaneous-SINR average (centralized) or use-and-then-forget (distributed)
    std::vector<Estimate> dl;     // hardening bound
    std::vector<Estimate> genie;  // instantaneous effective channel known at the UE
    UplinkMoments ul_moments;
    DownlinkMoments dl_moments;
    std::vector<std::vector<double>> ap_norm;  // E||v_kl||^2, l in M_k order
    std::vector<Estimate> precoder_power;      // mean ||wbar_k||^2 (per-AP average when distributed)
};

/// Estimates every pair any requested scheme needs: all pairs for centralized
/// evaluation or unscalable schemes, otherwise only pairs inside the clusters
/// (and partner sets for P-MMSE).
std::vector<char> estimate_demand(std::span<const Scheme> schemes, Mode mode, const ProcessingContext& ctx);

struct RealizationData {
    ChannelRealization channel;
    PilotObservation pilots;
};

/// Channel and pilot observation of realization r of a setup. Depends only on
/// (seed, setup, r).
RealizationData draw_realization(const ProcessingContext& ctx, std::uint64_t seed, std::uint64_t setup,
                                 std::uint64_t realization);

/// Monte-Carlo evaluation of one setup. Realizations are processed in fixed
/// batches whose partial statistics are merged in batch order, so results do
/// not depend on the thread count. A second pass over the same realizations
/// evaluates the precoders normalized by the first-pass means.
std::vector<SchemeResult> evaluate_setup(const ProcessingContext& ctx, const EvaluationOptions& opt);

/// SE and delta-method standard error of the use-and-then-forget bound from
/// samples of (Re x, Im x, q, n) where q = sum_i p_i |v^H D h_i|^2.
Estimate uatf_se(const MomentStats<4>& s, double p_k, double noise_ul, double prelog);

/// SE and delta-method standard error of the hardening bound from samples of
/// (Re g_kk, Im g_kk, sum_i |g_ki|^2).
Estimate hardening_se(const MomentStats<3>& s, double noise_dl, double prelog);

struct CdfSamples {
    std::vector<double> values;
    std::vector<double> levels;
    double mean = 0.0;
};

CdfSamples cdf_statistics(std::vector<double> values);

}  // namespace cellfree
