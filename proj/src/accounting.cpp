#include "cellfree/accounting.hpp"

#include <algorithm>

namespace cellfree {

std::vector<FronthaulLoad> fronthaul_load(Mode mode, const ClusterAssignment& a, const SimulationConfig& cfg) {
    std::vector<FronthaulLoad> out(a.num_aps);
    const std::uint64_t N = cfg.antennas_per_ap;
    for (std::size_t l = 0; l < a.num_aps; ++l) {
        if (mode == Mode::Centralized) {
            out[l] = {cfg.pilot_len * N, cfg.ul_data_len * N, cfg.dl_data_len * N};
        } else {
            const std::uint64_t d = a.served_by_ap[l].size();
            out[l] = {0, cfg.ul_data_len * d, cfg.dl_data_len * d};
        }
    }
    return out;
}

CostModel::CostModel(const ClusterAssignment& a, std::size_t antennas)
    : a_(&a), N_(antennas), partners_(compute_partners(a)) {}

std::size_t CostModel::served_sum(std::size_t k) const {
    std::size_t s = 0;
    for (std::size_t l : a_->serving_aps[k]) s += a_->served_by_ap[l].size();
    return s;
}

namespace {

std::uint64_t gram(std::uint64_t n) { return (n * n + n) / 2; }
std::uint64_t factor_and_solve(std::uint64_t n) { return n * n + (n * n * n - n) / 3; }

}  // namespace

ComplexityCount CostModel::count(Scheme s, std::size_t k) const {
    const std::uint64_t N = N_;
    const std::uint64_t tau = a_->pilot_len;
    const std::uint64_t m = cluster_size(k);
    const std::uint64_t per_estimate = N * tau + N * N;
    const std::uint64_t K = a_->num_ues;
    switch (s) {
    case Scheme::MR:
        return {per_estimate * m, 0};
    case Scheme::MMSE:
        return {per_estimate * K * m, gram(N * m) * K + factor_and_solve(N * m)};
    case Scheme::PMMSE: {
        const std::uint64_t P = partner_count(k);
        return {per_estimate * P * m, gram(N * m) * P + factor_and_solve(N * m)};
    }
    case Scheme::LPMMSE: {
        const std::uint64_t d = served_sum(k);
        return {per_estimate * d, gram(N) * d + factor_and_solve(N) * m};
    }
    case Scheme::LMMSE:
        return {per_estimate * K * m, gram(N) * K * m + factor_and_solve(N) * m};
    }
    throw std::invalid_argument("multiplication_count: unknown scheme");
}

ComplexityCount multiplication_count(Scheme s, std::size_t k, const ClusterAssignment& a, std::size_t antennas) {
    return CostModel(a, antennas).count(s, k);
}

ScalabilityReport assert_scalable(std::span<const ClusterAssignment> sweep, std::size_t antennas,
                                  std::size_t neighbor_cap) {
    ScalabilityReport rep;
    auto fail = [&](std::string msg) {
        rep.scalable = false;
        rep.violations.push_back(std::move(msg));
    };
    for (const ClusterAssignment& a : sweep) {
        const std::string tag = "K=" + std::to_string(a.num_ues) + ": ";
        const std::uint64_t tau = a.pilot_len;
        const std::uint64_t m_max = neighbor_cap + 1;
        std::size_t max_d = 0;
        for (const auto& d : a.served_by_ap) max_d = std::max(max_d, d.size());
        if (max_d > tau) fail(tag + "an AP serves " + std::to_string(max_d) + " UEs, more than tau_p");

        const CostModel model(a, antennas);
        const std::uint64_t N = antennas;
        const std::uint64_t p_max = (tau - 1) * m_max + 1;
        const ComplexityCount pmmse_bound{(N * tau + N * N) * p_max * m_max,
                                          (N * m_max * N * m_max + N * m_max) / 2 * p_max + N * m_max * N * m_max +
                                              (N * m_max * N * m_max * N * m_max - N * m_max) / 3};
        const ComplexityCount lp_bound{(N * tau + N * N) * tau * m_max,
                                       (N * N + N) / 2 * tau * m_max + ((N * N * N - N) / 3 + N * N) * m_max};
        for (std::size_t k = 0; k < a.num_ues; ++k) {
            const std::string ue = tag + "UE " + std::to_string(k);
            if (!a.admitted(k)) {
                fail(ue + " was not admitted");
                continue;
            }
            if (!a.serving_aps[k].count(static_cast<std::size_t>(a.master_of[k]))) fail(ue + " is not served by its master");
            if (a.serving_aps[k].size() > m_max) fail(ue + " has a cluster larger than the neighbor cap allows");
            const ComplexityCount p = model.count(Scheme::PMMSE, k);
            const ComplexityCount lp = model.count(Scheme::LPMMSE, k);
            if (p.estimation > pmmse_bound.estimation || p.combining > pmmse_bound.combining)
                fail(ue + " P-MMSE cost exceeds the K-independent bound");
            if (lp.estimation > lp_bound.estimation || lp.combining > lp_bound.combining)
                fail(ue + " LP-MMSE cost exceeds the K-independent bound");
        }
    }
    return rep;
}

}  // namespace cellfree
