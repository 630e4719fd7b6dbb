#include "cellfree/processing.hpp"

#include <Eigen/Eigenvalues>

#include <map>
#include <optional>

namespace cellfree {

ProcessingContext make_context(const Topology& topo, const ClusterAssignment& a, const EstimationStatistics& stats) {
    ProcessingContext ctx;
    ctx.topo = &topo;
    ctx.assign = &a;
    ctx.stats = &stats;
    ctx.num_aps = topo.num_aps();
    ctx.num_ues = topo.num_ues();
    ctx.antennas = topo.antennas();
    ctx.noise = stats.noise();
    const auto n = static_cast<Eigen::Index>(ctx.antennas);

    ctx.aps_of.resize(ctx.num_ues);
    for (std::size_t k = 0; k < ctx.num_ues; ++k) ctx.aps_of[k].assign(a.serving_aps[k].begin(), a.serving_aps[k].end());
    ctx.ues_of.resize(ctx.num_aps);
    for (std::size_t l = 0; l < ctx.num_aps; ++l) ctx.ues_of[l].assign(a.served_by_ap[l].begin(), a.served_by_ap[l].end());
    ctx.partners = compute_partners(a);

    const CMat noise_eye = CMat::Identity(n, n) * ctx.noise;
    ctx.total_cov.assign(ctx.num_aps, noise_eye);
    ctx.local_cov.assign(ctx.num_aps, noise_eye);
    for (std::size_t l = 0; l < ctx.num_aps; ++l) {
        for (std::size_t i = 0; i < ctx.num_ues; ++i) ctx.total_cov[l] += stats.power(i) * stats.error_cov(i, l);
        for (std::size_t i : ctx.ues_of[l]) ctx.local_cov[l] += stats.power(i) * stats.error_cov(i, l);
    }
    ctx.partner_cov.resize(ctx.num_ues);
    for (std::size_t k = 0; k < ctx.num_ues; ++k) {
        for (std::size_t l : ctx.aps_of[k]) {
            CMat z = noise_eye;
            for (std::size_t i : ctx.partners[k]) z += stats.power(i) * stats.error_cov(i, l);
            ctx.partner_cov[k].push_back(std::move(z));
        }
    }
    return ctx;
}

CVec stack_estimate(const ChannelEstimates& est, std::size_t i, std::span<const std::size_t> aps, std::size_t n) {
    const auto N = static_cast<Eigen::Index>(n);
    CVec x(N * static_cast<Eigen::Index>(aps.size()));
    for (std::size_t j = 0; j < aps.size(); ++j) {
        if (!est.has(i, aps[j])) throw std::logic_error("stack_estimate: estimate was not computed");
        x.segment(static_cast<Eigen::Index>(j) * N, N) = est.at(i, aps[j]);
    }
    return x;
}

CVec stack_channel(const ChannelRealization& h, std::size_t i, std::span<const std::size_t> aps) {
    const auto N = static_cast<Eigen::Index>(h.antennas);
    CVec x(N * static_cast<Eigen::Index>(aps.size()));
    for (std::size_t j = 0; j < aps.size(); ++j) x.segment(static_cast<Eigen::Index>(j) * N, N) = h.at(i, aps[j]);
    return x;
}

CMat hermitian_pinv(const CMat& A) {
    Eigen::SelfAdjointEigenSolver<CMat> es(A);
    if (es.info() != Eigen::Success) throw NumericError("hermitian_pinv: eigendecomposition failed");
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double cutoff = 1e-12 * ev.cwiseAbs().maxCoeff();
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > cutoff) inv(i) = 1.0 / ev(i);
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

/// Cholesky with the pseudo-inverse as fallback.
class HermitianSolver {
public:
    explicit HermitianSolver(const CMat& A) : llt_(A) {
        if (llt_.info() != Eigen::Success) pinv_ = hermitian_pinv(A);
    }
    CVec solve(const CVec& b) const {
        if (pinv_.size() == 0) return llt_.solve(b);
        return pinv_ * b;
    }

private:
    Eigen::LLT<CMat> llt_;
    CMat pinv_;
};

/// Estimates of `ues` on the blocks `aps`, columns scaled by sqrt(p_i).
CMat weighted_estimates(const ProcessingContext& ctx, const ChannelEstimates& est, std::span<const std::size_t> ues,
                        std::span<const std::size_t> aps) {
    const auto n = static_cast<Eigen::Index>(ctx.antennas * aps.size());
    CMat X(n, static_cast<Eigen::Index>(ues.size()));
    for (std::size_t c = 0; c < ues.size(); ++c)
        X.col(static_cast<Eigen::Index>(c)) = std::sqrt(ctx.power(ues[c])) * stack_estimate(est, ues[c], aps, ctx.antennas);
    return X;
}

std::vector<std::size_t> all_ues(std::size_t K) {
    std::vector<std::size_t> v(K);
    for (std::size_t i = 0; i < K; ++i) v[i] = i;
    return v;
}

CMat block_diagonal(std::span<const CMat> blocks, std::size_t N) {
    const auto n = static_cast<Eigen::Index>(N);
    const auto total = n * static_cast<Eigen::Index>(blocks.size());
    CMat D = CMat::Zero(total, total);
    for (std::size_t j = 0; j < blocks.size(); ++j) D.block(static_cast<Eigen::Index>(j) * n, static_cast<Eigen::Index>(j) * n, n, n) = blocks[j];
    return D;
}

std::vector<CMat> total_blocks(const ProcessingContext& ctx, std::span<const std::size_t> aps) {
    std::vector<CMat> b;
    b.reserve(aps.size());
    for (std::size_t l : aps) b.push_back(ctx.total_cov[l]);
    return b;
}

/// Gram matrix of the centralized MMSE-type combiner on the blocks of M_k.
CMat central_gram(Scheme s, std::size_t k, const ProcessingContext& ctx, const ChannelEstimates& est) {
    const auto& aps = ctx.aps_of[k];
    if (s == Scheme::MMSE) {
        const auto ues = all_ues(ctx.num_ues);
        const CMat X = weighted_estimates(ctx, est, ues, aps);
        return X * X.adjoint() + block_diagonal(total_blocks(ctx, aps), ctx.antennas);
    }
    const CMat X = weighted_estimates(ctx, est, ctx.partners[k], aps);
    return X * X.adjoint() + block_diagonal(ctx.partner_cov[k], ctx.antennas);
}

Combiner central_combiner(Scheme s, std::size_t k, const ProcessingContext& ctx, const ChannelEstimates& est) {
    Combiner c;
    c.aps = ctx.aps_of[k];
    const CMat A = central_gram(s, k, ctx, est);
    c.v = ctx.power(k) * pseudo_solve(A, stack_estimate(est, k, c.aps, ctx.antennas));
    return c;
}

CMat local_gram(Scheme s, std::size_t l, const ProcessingContext& ctx, const ChannelEstimates& est) {
    if (s == Scheme::LMMSE) {
        CMat A = ctx.total_cov[l];
        for (std::size_t i = 0; i < ctx.num_ues; ++i) A += ctx.power(i) * est.at(i, l) * est.at(i, l).adjoint();
        return A;
    }
    CMat A = ctx.local_cov[l];
    for (std::size_t i : ctx.ues_of[l]) A += ctx.power(i) * est.at(i, l) * est.at(i, l).adjoint();
    return A;
}

}  // namespace

CVec pseudo_solve(const CMat& A, const CVec& b) { return HermitianSolver(A).solve(b); }

Combiner mr_combiner(std::size_t k, const ProcessingContext& ctx, const ChannelEstimates& est) {
    Combiner c;
    c.aps = ctx.aps_of[k];
    c.v = stack_estimate(est, k, c.aps, ctx.antennas);
    return c;
}

Combiner mmse_combiner(std::size_t k, const ProcessingContext& ctx, const ChannelEstimates& est) {
    return central_combiner(Scheme::MMSE, k, ctx, est);
}

Combiner pmmse_combiner(std::size_t k, const ProcessingContext& ctx, const ChannelEstimates& est) {
    return central_combiner(Scheme::PMMSE, k, ctx, est);
}

CVec lpmmse_combiner(std::size_t k, std::size_t l, const ProcessingContext& ctx, const ChannelEstimates& est) {
    return ctx.power(k) * pseudo_solve(local_gram(Scheme::LPMMSE, l, ctx, est), est.at(k, l));
}

CVec lmmse_combiner(std::size_t k, std::size_t l, const ProcessingContext& ctx, const ChannelEstimates& est) {
    return ctx.power(k) * pseudo_solve(local_gram(Scheme::LMMSE, l, ctx, est), est.at(k, l));
}

std::vector<Combiner> compute_combiners(Scheme s, const ProcessingContext& ctx, const ChannelEstimates& est) {
    const std::size_t K = ctx.num_ues;
    const auto N = static_cast<Eigen::Index>(ctx.antennas);
    std::vector<Combiner> out(K);
    switch (s) {
    case Scheme::MR:
        for (std::size_t k = 0; k < K; ++k) out[k] = mr_combiner(k, ctx, est);
        break;
    case Scheme::MMSE:
    case Scheme::PMMSE: {
        std::map<std::vector<std::size_t>, HermitianSolver> cache;
        for (std::size_t k = 0; k < K; ++k) {
            out[k].aps = ctx.aps_of[k];
            auto it = cache.find(out[k].aps);
            if (it == cache.end()) it = cache.emplace(out[k].aps, HermitianSolver(central_gram(s, k, ctx, est))).first;
            out[k].v = ctx.power(k) * it->second.solve(stack_estimate(est, k, out[k].aps, ctx.antennas));
        }
        break;
    }
    case Scheme::LMMSE:
    case Scheme::LPMMSE: {
        std::vector<std::optional<HermitianSolver>> solvers(ctx.num_aps);
        for (std::size_t k = 0; k < K; ++k) {
            out[k].aps = ctx.aps_of[k];
            out[k].v.resize(N * static_cast<Eigen::Index>(out[k].aps.size()));
            for (std::size_t j = 0; j < out[k].aps.size(); ++j) {
                const std::size_t l = out[k].aps[j];
                if (!solvers[l]) solvers[l].emplace(local_gram(s, l, ctx, est));
                out[k].v.segment(static_cast<Eigen::Index>(j) * N, N) = ctx.power(k) * solvers[l]->solve(est.at(k, l));
            }
        }
        break;
    }
    }
    return out;
}

double instantaneous_sinr(std::size_t k, const CVec& v, const ProcessingContext& ctx, const ChannelEstimates& est) {
    const auto& aps = ctx.aps_of[k];
    const auto N = static_cast<Eigen::Index>(ctx.antennas);
    double signal = 0.0, interference = 0.0;
    for (std::size_t i = 0; i < ctx.num_ues; ++i) {
        const cd g = v.dot(stack_estimate(est, i, aps, ctx.antennas));
        const double term = ctx.power(i) * std::norm(g);
        (i == k ? signal : interference) += term;
    }
    double noise = 0.0;
    for (std::size_t j = 0; j < aps.size(); ++j) {
        const auto vb = v.segment(static_cast<Eigen::Index>(j) * N, N);
        noise += vb.dot(ctx.total_cov[aps[j]] * vb).real();
    }
    if (signal == 0.0) return 0.0;
    const double denom = interference + noise;
    if (!(denom > 0)) throw NumericError("instantaneous_sinr: zero interference-plus-noise");
    return signal / denom;
}

double max_sinr(std::size_t k, const ProcessingContext& ctx, const ChannelEstimates& est) {
    const auto& aps = ctx.aps_of[k];
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < ctx.num_ues; ++i)
        if (i != k) others.push_back(i);
    const CMat X = weighted_estimates(ctx, est, others, aps);
    const CMat A = X * X.adjoint() + block_diagonal(total_blocks(ctx, aps), ctx.antennas);
    const CVec hk = stack_estimate(est, k, aps, ctx.antennas);
    return ctx.power(k) * hk.dot(pseudo_solve(A, hk)).real();
}

CVec normalize_precoder(const CVec& v, double norm) {
    if (!(norm > 0)) throw NumericError("normalize_precoder: degenerate precoder (zero mean power)");
    return v / std::sqrt(norm);
}

namespace {

std::uint64_t gram_cost(std::uint64_t n) { return (n * n + n) / 2; }
std::uint64_t solve_cost(std::uint64_t n) { return (n * n * n - n) / 3 + n * n; }

/// Lower-triangle rank-1 update A += x x^H, counted as (n^2+n)/2.
void gram_update(CMat& A, const CVec& x, OpCounter& counter) {
    const auto n = x.size();
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b <= a; ++b) A(a, b) += x(a) * std::conj(x(b));
    counter.combining += gram_cost(static_cast<std::uint64_t>(n));
}

CMat from_lower(const CMat& lower) {
    CMat full = lower.triangularView<Eigen::Lower>();
    full.triangularView<Eigen::StrictlyUpper>() = lower.adjoint().triangularView<Eigen::StrictlyUpper>();
    return full;
}

}  // namespace

Combiner instrumented_combiner(Scheme s, std::size_t k, const ProcessingContext& ctx,
                               std::span<const CMat> pilot_blocks, OpCounter& counter) {
    if (pilot_blocks.size() != ctx.num_aps) throw std::invalid_argument("instrumented_combiner: one pilot block per AP");
    const std::size_t N = ctx.antennas;
    const auto Ni = static_cast<Eigen::Index>(N);
    const auto& stats = *ctx.stats;
    auto estimate = [&](std::size_t i, std::size_t l) {
        const CVec y = despread(pilot_blocks[l], static_cast<std::size_t>(stats.pilot_of(i)), &counter);
        return mmse_estimate(stats.filter(i, l), y, &counter);
    };

    Combiner c;
    c.aps = ctx.aps_of[k];
    const std::size_t m = c.aps.size();
    switch (s) {
    case Scheme::MR: {
        c.v.resize(Ni * static_cast<Eigen::Index>(m));
        for (std::size_t j = 0; j < m; ++j) c.v.segment(static_cast<Eigen::Index>(j) * Ni, Ni) = estimate(k, c.aps[j]);
        break;
    }
    case Scheme::MMSE:
    case Scheme::PMMSE: {
        const std::vector<std::size_t> ues = s == Scheme::MMSE ? all_ues(ctx.num_ues) : ctx.partners[k];
        const auto n = Ni * static_cast<Eigen::Index>(m);
        CMat A = CMat::Zero(n, n);
        CVec hk;
        for (std::size_t i : ues) {
            CVec x(n);
            for (std::size_t j = 0; j < m; ++j) x.segment(static_cast<Eigen::Index>(j) * Ni, Ni) = estimate(i, c.aps[j]);
            if (i == k) hk = x;
            gram_update(A, std::sqrt(ctx.power(i)) * x, counter);
        }
        A = from_lower(A);
        A += s == Scheme::MMSE ? block_diagonal(total_blocks(ctx, c.aps), N) : block_diagonal(ctx.partner_cov[k], N);
        counter.combining += solve_cost(static_cast<std::uint64_t>(n));
        c.v = ctx.power(k) * pseudo_solve(A, hk);
        break;
    }
    case Scheme::LMMSE:
    case Scheme::LPMMSE: {
        c.v.resize(Ni * static_cast<Eigen::Index>(m));
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t l = c.aps[j];
            const std::vector<std::size_t> ues = s == Scheme::LMMSE ? all_ues(ctx.num_ues) : ctx.ues_of[l];
            CMat A = CMat::Zero(Ni, Ni);
            CVec hk;
            for (std::size_t i : ues) {
                const CVec x = estimate(i, l);
                if (i == k) hk = x;
                gram_update(A, std::sqrt(ctx.power(i)) * x, counter);
            }
            A = from_lower(A) + (s == Scheme::LMMSE ? ctx.total_cov[l] : ctx.local_cov[l]);
            counter.combining += solve_cost(N);
            c.v.segment(static_cast<Eigen::Index>(j) * Ni, Ni) = ctx.power(k) * pseudo_solve(A, hk);
        }
        break;
    }
    }
    return c;
}

}  // namespace cellfree
