#include "cellfree/estimation.hpp"

#include <cmath>
#include <numbers>

namespace cellfree {

CMat pilot_correlation(std::span<const std::size_t> sharers, std::size_t l, const Topology& topo,
                       std::span<const double> ue_power, std::size_t pilot_len, double noise_w) {
    const auto n = static_cast<Eigen::Index>(topo.antennas());
    CMat psi = CMat::Identity(n, n) * noise_w;
    const double tau = static_cast<double>(pilot_len);
    for (std::size_t i : sharers) psi += tau * ue_power[i] * topo.corr(i, l);
    return psi;
}

CMat error_covariance(const CMat& R, const CMat& psi, double power, std::size_t pilot_len) {
    Eigen::LLT<CMat> chol(psi);
    if (chol.info() != Eigen::Success) throw NumericError("error_covariance: Psi is not positive definite");
    return R - power * static_cast<double>(pilot_len) * R * chol.solve(R);
}

EstimationStatistics::EstimationStatistics(const Topology& topo, const ClusterAssignment& a,
                                           std::span<const double> ue_power, double noise_w)
    : L_(topo.num_aps()),
      K_(topo.num_ues()),
      N_(topo.antennas()),
      tau_(a.pilot_len),
      noise_(noise_w),
      p_(ue_power.begin(), ue_power.end()),
      pilot_(a.pilot_of) {
    if (p_.size() != K_) throw std::invalid_argument("EstimationStatistics: one power per UE expected");
    const PilotBook book = pilot_book(a);
    psi_.reserve(tau_ * L_);
    psi_chol_.reserve(tau_ * L_);
    for (std::size_t t = 0; t < tau_; ++t) {
        for (std::size_t l = 0; l < L_; ++l) {
            psi_.push_back(pilot_correlation(book.sharers[t], l, topo, p_, tau_, noise_));
            psi_chol_.emplace_back(psi_.back());
            if (psi_chol_.back().info() != Eigen::Success)
                throw NumericError("EstimationStatistics: Psi is not positive definite");
        }
    }
    const double tau = static_cast<double>(tau_);
    filter_.resize(K_ * L_);
    est_cov_.resize(K_ * L_);
    err_cov_.resize(K_ * L_);
    for (std::size_t k = 0; k < K_; ++k) {
        if (pilot_[k] == kUnassigned) throw std::invalid_argument("EstimationStatistics: UE without pilot");
        const auto t = static_cast<std::size_t>(pilot_[k]);
        for (std::size_t l = 0; l < L_; ++l) {
            const CMat& R = topo.corr(k, l);
            const auto& chol = psi_chol_[t * L_ + l];
            // R and Psi are Hermitian, so R Psi^-1 = (Psi^-1 R)^H.
            const CMat psi_inv_r = chol.solve(R);
            filter_[k * L_ + l] = std::sqrt(p_[k] * tau) * psi_inv_r.adjoint();
            CMat b = p_[k] * tau * R * psi_inv_r;
            b = (b + b.adjoint()).eval() / 2.0;
            est_cov_[k * L_ + l] = b;
            err_cov_[k * L_ + l] = R - b;
        }
    }
}

CMat EstimationStatistics::cross_term(std::size_t i, std::size_t k, std::size_t l, const Topology& topo) const {
    const auto n = static_cast<Eigen::Index>(N_);
    if (pilot_[i] != pilot_[k]) return CMat::Zero(n, n);
    const auto t = static_cast<std::size_t>(pilot_[k]);
    return topo.corr(i, l) * psi_chol_[t * L_ + l].solve(topo.corr(k, l));
}

PilotObservation despread_pilots(const ChannelRealization& h, const ClusterAssignment& a,
                                 std::span<const double> ue_power, double noise_w, Engine& rng) {
    const std::size_t L = h.num_aps;
    const auto N = static_cast<Eigen::Index>(h.antennas);
    const double tau = static_cast<double>(a.pilot_len);
    const double noise_amp = std::sqrt(noise_w);
    const PilotBook book = pilot_book(a);
    PilotObservation obs;
    obs.num_aps = L;
    obs.y.reserve(a.pilot_len * L);
    for (std::size_t t = 0; t < a.pilot_len; ++t) {
        for (std::size_t l = 0; l < L; ++l) {
            CVec y = noise_amp * complex_normal_vector(rng, N);
            for (std::size_t i : book.sharers[t]) y += std::sqrt(tau * ue_power[i]) * h.at(i, l);
            obs.y.push_back(std::move(y));
        }
    }
    return obs;
}

CVec mmse_estimate(const CMat& filter, const CVec& y, OpCounter* counter) {
    if (counter) counter->estimation += static_cast<std::uint64_t>(filter.rows() * filter.cols());
    return filter * y;
}

namespace {

cd pilot_symbol(std::size_t t, std::size_t n, std::size_t tau) {
    const double ang = -2.0 * std::numbers::pi * static_cast<double>(t * n % tau) / static_cast<double>(tau);
    return std::polar(1.0, ang);
}

}  // namespace

CMat received_pilot_block(const ChannelRealization& h, std::size_t l, const ClusterAssignment& a,
                          std::span<const double> ue_power, double noise_w, Engine& rng) {
    const auto N = static_cast<Eigen::Index>(h.antennas);
    const std::size_t tau = a.pilot_len;
    const double noise_amp = std::sqrt(noise_w);
    CMat block(N, static_cast<Eigen::Index>(tau));
    for (std::size_t n = 0; n < tau; ++n) block.col(static_cast<Eigen::Index>(n)) = noise_amp * complex_normal_vector(rng, N);
    for (std::size_t i = 0; i < h.num_ues; ++i) {
        if (a.pilot_of[i] == kUnassigned) continue;
        const auto t = static_cast<std::size_t>(a.pilot_of[i]);
        const CVec hs = std::sqrt(ue_power[i]) * h.at(i, l);
        for (std::size_t n = 0; n < tau; ++n) block.col(static_cast<Eigen::Index>(n)) += hs * pilot_symbol(t, n, tau);
    }
    return block;
}

CVec despread(const CMat& block, std::size_t t, OpCounter* counter) {
    const auto N = block.rows();
    const auto tau = static_cast<std::size_t>(block.cols());
    CVec y = CVec::Zero(N);
    for (std::size_t n = 0; n < tau; ++n) {
        const cd c = std::conj(pilot_symbol(t, n, tau));
        for (Eigen::Index m = 0; m < N; ++m) y(m) += block(m, static_cast<Eigen::Index>(n)) * c;
    }
    if (counter) counter->estimation += static_cast<std::uint64_t>(N) * tau;
    return y / std::sqrt(static_cast<double>(tau));
}

ChannelEstimates estimate_channels(const EstimationStatistics& stats, const PilotObservation& obs,
                                   std::span<const char> demand) {
    const std::size_t K = stats.num_ues(), L = stats.num_aps();
    if (!demand.empty() && demand.size() != K * L)
        throw std::invalid_argument("estimate_channels: demand mask must have K*L entries");
    ChannelEstimates est;
    est.num_aps = L;
    est.num_ues = K;
    est.hhat.resize(K * L);
    est.present.assign(K * L, 0);
    for (std::size_t k = 0; k < K; ++k) {
        const auto t = static_cast<std::size_t>(stats.pilot_of(k));
        for (std::size_t l = 0; l < L; ++l) {
            const std::size_t idx = k * L + l;
            if (!demand.empty() && !demand[idx]) continue;
            est.hhat[idx] = stats.filter(k, l) * obs.at(t, l);
            est.present[idx] = 1;
        }
    }
    return est;
}

}  // namespace cellfree
