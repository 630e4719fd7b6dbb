#include "cellfree/power.hpp"

#include <cmath>
#include <numeric>

namespace cellfree {

std::vector<double> ul_full_power(const SimulationConfig& cfg) { return std::vector<double>(cfg.num_ues, cfg.ue_power_w); }

std::vector<double> dl_centralized_equal(const SimulationConfig& cfg) {
    if (cfg.pilot_len == 0) throw std::invalid_argument("dl_centralized_equal: pilot_len must be positive");
    return std::vector<double>(cfg.num_ues, cfg.ap_power_w / static_cast<double>(cfg.pilot_len));
}

Eigen::MatrixXd dl_distributed_proportional(const ClusterAssignment& a, const Topology& topo, double ap_power) {
    Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a.num_ues), static_cast<Eigen::Index>(a.num_aps));
    for (std::size_t l = 0; l < a.num_aps; ++l) {
        double total = 0.0;
        for (std::size_t i : a.served_by_ap[l]) total += std::sqrt(topo.beta(i, l));
        if (!(total > 0)) continue;
        for (std::size_t k : a.served_by_ap[l])
            rho(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = ap_power * std::sqrt(topo.beta(k, l)) / total;
    }
    return rho;
}

DualityMatrices duality_matrices(const UplinkMoments& m, std::span<const double> p, double noise_ul) {
    const std::size_t K = p.size();
    const auto Ki = static_cast<Eigen::Index>(K);
    DualityMatrices d;
    d.gamma = Eigen::MatrixXd::Zero(Ki, Ki);
    d.sigma = Eigen::MatrixXd::Zero(Ki, Ki);
    d.target.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        if (!(m.norm[k] > 0)) throw NumericError("duality_matrices: UE " + std::to_string(k) + " has a zero combiner");
        d.target[k] = ul_sinr_from_moments(k, m, p, noise_ul);
        if (!(d.target[k] > 0)) throw InfeasibleError("duality_matrices: UE " + std::to_string(k) + " has zero uplink SINR");
    }
    for (std::size_t k = 0; k < K; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        const double sig = std::norm(m.signal[k]) / m.norm[k];
        d.gamma(kk, kk) = sig / d.target[k];
        for (std::size_t i = 0; i < K; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            // [Sigma]_ki = E|h_k^H D_i wbar_i|^2 = E|v_i^H D_i h_k|^2 / E||D_i v_i||^2.
            d.sigma(kk, ii) = m.cross(ii, kk) / m.norm[i];
        }
        d.sigma(kk, kk) -= d.target[k] * d.gamma(kk, kk);
    }
    return d;
}

DownlinkMoments dual_downlink_moments(const UplinkMoments& m, std::span<const double> rho) {
    const std::size_t K = rho.size();
    DownlinkMoments d;
    d.signal.resize(K);
    d.cross = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
    for (std::size_t k = 0; k < K; ++k) {
        d.signal[k] = std::sqrt(rho[k] / m.norm[k]) * std::conj(m.signal[k]);
        for (std::size_t i = 0; i < K; ++i)
            d.cross(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) =
                rho[i] * m.cross(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) / m.norm[i];
    }
    return d;
}

DualityResult duality_power(const UplinkMoments& m, std::span<const double> p, double noise_ul, double noise_dl,
                            double sinr_tol) {
    const std::size_t K = p.size();
    DualityResult r;
    r.matrices = duality_matrices(m, p, noise_ul);
    const Eigen::MatrixXd A = r.matrices.gamma - r.matrices.sigma;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) throw InfeasibleError("duality_power: Gamma - Sigma is singular");
    const Eigen::VectorXd rho = lu.solve(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(K), noise_dl));

    r.rho.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        const double v = rho(static_cast<Eigen::Index>(k));
        if (v < -1e-12) throw NumericError("duality_power: negative power for UE " + std::to_string(k));
        r.rho[k] = std::max(v, 0.0);
    }

    const double dl_total = std::accumulate(r.rho.begin(), r.rho.end(), 0.0) / noise_dl;
    const double ul_total = std::accumulate(p.begin(), p.end(), 0.0) / noise_ul;
    if (std::abs(dl_total - ul_total) > 1e-9 * std::abs(ul_total))
        throw NumericError("duality_power: total-power identity violated");

    const DownlinkMoments dl = dual_downlink_moments(m, r.rho);
    r.ul_sinr = r.matrices.target;
    r.dl_sinr.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        r.dl_sinr[k] = dl_sinr_from_moments(k, dl, noise_dl);
        if (std::abs(r.dl_sinr[k] - r.ul_sinr[k]) > sinr_tol * r.ul_sinr[k])
            throw NumericError("duality_power: downlink SINR of UE " + std::to_string(k) + " misses the uplink target");
    }
    return r;
}

std::vector<double> centralized_ap_power(const ProcessingContext& ctx, std::span<const double> rho,
                                         const SchemeResult& r) {
    std::vector<double> out(ctx.num_aps, 0.0);
    for (std::size_t i = 0; i < ctx.num_ues; ++i) {
        const double n = r.ul_moments.norm[i];
        if (!(n > 0)) continue;
        for (std::size_t j = 0; j < ctx.aps_of[i].size(); ++j) out[ctx.aps_of[i][j]] += rho[i] * r.ap_norm[i][j] / n;
    }
    return out;
}

}  // namespace cellfree
