#include "cellfree/performance.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>
#include <thread>

namespace cellfree {

double ul_sinr_from_moments(std::size_t k, const UplinkMoments& m, std::span<const double> p, double noise_ul) {
    const double signal = p[k] * std::norm(m.signal[k]);
    if (signal == 0.0) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) total += p[i] * m.cross(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i));
    const double denom = total - signal + noise_ul * m.norm[k];
    if (!(denom > 0)) throw NumericError("ul_sinr_from_moments: non-positive interference-plus-noise");
    return signal / denom;
}

double dl_sinr_from_moments(std::size_t k, const DownlinkMoments& m, double noise_dl) {
    const double signal = std::norm(m.signal[k]);
    if (signal == 0.0) return 0.0;
    const double total = m.cross.row(static_cast<Eigen::Index>(k)).sum();
    const double denom = total - signal + noise_dl;
    if (!(denom > 0)) throw NumericError("dl_sinr_from_moments: non-positive interference-plus-noise");
    return signal / denom;
}

UplinkMoments ul_mr_closed_form_moments(const ProcessingContext& ctx) {
    const auto& stats = *ctx.stats;
    const auto& topo = *ctx.topo;
    const std::size_t K = ctx.num_ues;
    const double tau = static_cast<double>(stats.pilot_len());
    UplinkMoments m;
    m.signal.assign(K, 0.0);
    m.norm.assign(K, 0.0);
    m.cross = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
    for (std::size_t k = 0; k < K; ++k) {
        double b = 0.0;
        for (std::size_t l : ctx.aps_of[k]) b += stats.estimate_cov(k, l).trace().real();
        m.signal[k] = b;
        m.norm[k] = b;
        for (std::size_t i = 0; i < K; ++i) {
            double v = 0.0;
            cd coherent = 0.0;
            for (std::size_t l : ctx.aps_of[k]) {
                v += (topo.corr(i, l) * stats.estimate_cov(k, l)).trace().real();
                if (stats.pilot_of(i) == stats.pilot_of(k)) coherent += stats.cross_term(i, k, l, topo).trace();
            }
            if (stats.pilot_of(i) == stats.pilot_of(k)) v += stats.power(k) * stats.power(i) * tau * tau * std::norm(coherent);
            m.cross(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = v;
        }
    }
    return m;
}

std::vector<double> ul_se_mr_closed_form(const ProcessingContext& ctx, double prelog) {
    const UplinkMoments m = ul_mr_closed_form_moments(ctx);
    std::vector<double> se(ctx.num_ues);
    for (std::size_t k = 0; k < ctx.num_ues; ++k)
        se[k] = prelog * std::log2(1.0 + ul_sinr_from_moments(k, m, ctx.stats->powers(), ctx.noise));
    return se;
}

DownlinkMoments dl_mr_moments(const ProcessingContext& ctx, const Eigen::MatrixXd& amplitude) {
    const auto& stats = *ctx.stats;
    const auto& topo = *ctx.topo;
    const std::size_t K = ctx.num_ues;
    const double tau = static_cast<double>(stats.pilot_len());
    DownlinkMoments m;
    m.signal.assign(K, 0.0);
    m.cross = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
    auto a = [&](std::size_t i, std::size_t l) { return amplitude(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)); };
    for (std::size_t k = 0; k < K; ++k) {
        double s = 0.0;
        for (std::size_t l : ctx.aps_of[k]) s += a(k, l) * stats.estimate_cov(k, l).trace().real();
        m.signal[k] = s;
    }
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t i = 0; i < K; ++i) {
            double v = 0.0;
            cd coherent = 0.0;
            const bool shared = stats.pilot_of(i) == stats.pilot_of(k);
            for (std::size_t l : ctx.aps_of[i]) {
                v += a(i, l) * a(i, l) * (topo.corr(k, l) * stats.estimate_cov(i, l)).trace().real();
                if (shared) coherent += a(i, l) * stats.cross_term(i, k, l, topo).trace();
            }
            if (shared) v += stats.power(i) * stats.power(k) * tau * tau * std::norm(coherent);
            m.cross(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = v;
        }
    }
    return m;
}

DownlinkMoments dl_mr_closed_form_moments(const ProcessingContext& ctx, const Eigen::MatrixXd& rho) {
    const auto& stats = *ctx.stats;
    const auto& topo = *ctx.topo;
    const std::size_t K = ctx.num_ues, L = ctx.num_aps;
    const double tau = static_cast<double>(stats.pilot_len());
    auto r = [&](std::size_t i, std::size_t l) { return rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)); };

    // tr(R_il Psi^-1 R_il), shared by every term.
    Eigen::MatrixXd rpr(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(L));
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t l = 0; l < L; ++l)
            rpr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = stats.cross_term(i, i, l, topo).trace().real();

    DownlinkMoments m;
    m.signal.assign(K, 0.0);
    m.cross = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
    for (std::size_t k = 0; k < K; ++k) {
        double s = 0.0;
        for (std::size_t l : ctx.aps_of[k])
            s += std::sqrt(r(k, l) * stats.power(k) * tau * rpr(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)));
        m.signal[k] = s;
    }
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t i = 0; i < K; ++i) {
            double v = 0.0;
            cd coherent = 0.0;
            const bool shared = stats.pilot_of(i) == stats.pilot_of(k);
            for (std::size_t l : ctx.aps_of[i]) {
                const double d = rpr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l));
                if (!(d > 0)) continue;
                const CMat rir = stats.cross_term(i, i, l, topo);
                v += r(i, l) * (rir * topo.corr(k, l)).trace().real() / d;
                if (shared) coherent += std::sqrt(r(i, l) * stats.power(k) * tau) * stats.cross_term(i, k, l, topo).trace() / std::sqrt(d);
            }
            if (shared) v += std::norm(coherent);
            m.cross(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = v;
        }
    }
    return m;
}

std::vector<double> dl_se_mr_closed_form(const ProcessingContext& ctx, const Eigen::MatrixXd& rho, double prelog) {
    const DownlinkMoments m = dl_mr_closed_form_moments(ctx, rho);
    std::vector<double> se(ctx.num_ues);
    for (std::size_t k = 0; k < ctx.num_ues; ++k) se[k] = prelog * std::log2(1.0 + dl_sinr_from_moments(k, m, ctx.noise));
    return se;
}

std::vector<char> estimate_demand(std::span<const Scheme> schemes, Mode mode, const ProcessingContext& ctx) {
    const std::size_t K = ctx.num_ues, L = ctx.num_aps;
    const bool everything = mode == Mode::Centralized ||
                            std::any_of(schemes.begin(), schemes.end(), [](Scheme s) { return !is_scalable(s); });
    std::vector<char> mask(K * L, everything ? 1 : 0);
    if (everything) return mask;
    const bool partners = std::find(schemes.begin(), schemes.end(), Scheme::PMMSE) != schemes.end();
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t l : ctx.aps_of[k]) {
            mask[k * L + l] = 1;
            if (partners)
                for (std::size_t i : ctx.partners[k]) mask[i * L + l] = 1;
        }
    }
    return mask;
}

RealizationData draw_realization(const ProcessingContext& ctx, std::uint64_t seed, std::uint64_t setup,
                                 std::uint64_t realization) {
    RealizationData d;
    Engine ch = make_engine(seed, {setup, realization, kChannelStream});
    d.channel = sample_channel(*ctx.topo, ch);
    Engine pn = make_engine(seed, {setup, realization, kPilotNoiseStream});
    d.pilots = despread_pilots(d.channel, *ctx.assign, ctx.stats->powers(), ctx.noise, pn);
    return d;
}

Estimate uatf_se(const MomentStats<4>& s, double p_k, double noise_ul, double prelog) {
    const double a = s.mean(0), b = s.mean(1), q = s.mean(2), n = s.mean(3);
    const double signal = p_k * (a * a + b * b);
    const double A = q + noise_ul * n;
    if (signal == 0.0 || !(A > 0)) return {};
    const double cnt = static_cast<double>(s.count());
    auto quad = [&](const std::array<double, 4>& g) {
        double v = 0.0;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) v += g[i] * g[j] * s.cov(i, j);
        return std::max(v, 0.0) / cnt;
    };
    double B = A - signal;
    if (!(B > 0)) {
        const double se_b = std::sqrt(quad({-2 * p_k * a, -2 * p_k * b, 1.0, noise_ul}));
        if (B < -3.0 * se_b) throw NumericError("uplink bound: negative interference-plus-noise beyond sampling error");
        B = 1e-15;
    }
    const double c = prelog / std::numbers::ln2;
    const double d = 1.0 / A - 1.0 / B;
    const std::array<double, 4> g{c * 2 * p_k * a / B, c * 2 * p_k * b / B, c * d, c * noise_ul * d};
    return {prelog * std::log2(A / B), std::sqrt(quad(g))};
}

Estimate hardening_se(const MomentStats<3>& s, double noise_dl, double prelog) {
    const double a = s.mean(0), b = s.mean(1), t = s.mean(2);
    const double signal = a * a + b * b;
    const double A = t + noise_dl;
    if (signal == 0.0) return {};
    const double cnt = static_cast<double>(s.count());
    auto quad = [&](const std::array<double, 3>& g) {
        double v = 0.0;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) v += g[i] * g[j] * s.cov(i, j);
        return std::max(v, 0.0) / cnt;
    };
    double B = A - signal;
    if (!(B > 0)) {
        const double se_b = std::sqrt(quad({-2 * a, -2 * b, 1.0}));
        if (B < -3.0 * se_b) throw NumericError("downlink bound: negative interference-plus-noise beyond sampling error");
        B = 1e-15;
    }
    const double c = prelog / std::numbers::ln2;
    const std::array<double, 3> g{c * 2 * a / B, c * 2 * b / B, c * (1.0 / A - 1.0 / B)};
    return {prelog * std::log2(A / B), std::sqrt(quad(g))};
}

namespace {

Estimate mean_estimate(const MomentStats<1>& s, double scale) {
    const double n = static_cast<double>(s.count());
    return {scale * s.mean(0), n > 0 ? scale * std::sqrt(s.cov(0, 0) / n) : 0.0};
}

struct SchemeAccum {
    std::vector<MomentStats<4>> uatf;
    std::vector<MomentStats<1>> logs;
    Eigen::MatrixXd cross;
    std::vector<std::vector<double>> ap_norm;
    std::vector<MomentStats<3>> dl;
    std::vector<MomentStats<1>> genie;
    Eigen::MatrixXd dl_cross;
    std::vector<MomentStats<1>> wpow;

    explicit SchemeAccum(const ProcessingContext& ctx) {
        const std::size_t K = ctx.num_ues;
        const auto Ki = static_cast<Eigen::Index>(K);
        uatf.resize(K);
        logs.resize(K);
        cross = Eigen::MatrixXd::Zero(Ki, Ki);
        ap_norm.resize(K);
        for (std::size_t k = 0; k < K; ++k) ap_norm[k].assign(ctx.aps_of[k].size(), 0.0);
        dl.resize(K);
        genie.resize(K);
        dl_cross = Eigen::MatrixXd::Zero(Ki, Ki);
        wpow.resize(K);
    }

    void merge(const SchemeAccum& o) {
        for (std::size_t k = 0; k < uatf.size(); ++k) {
            uatf[k].merge(o.uatf[k]);
            logs[k].merge(o.logs[k]);
            dl[k].merge(o.dl[k]);
            genie[k].merge(o.genie[k]);
            wpow[k].merge(o.wpow[k]);
            for (std::size_t j = 0; j < ap_norm[k].size(); ++j) ap_norm[k][j] += o.ap_norm[k][j];
        }
        cross += o.cross;
        dl_cross += o.dl_cross;
    }
};

using BatchAccum = std::vector<SchemeAccum>;

/// First-pass means that fix the precoder normalization.
struct Normalization {
    std::vector<double> collective;           // E||D_k v_k||^2
    std::vector<std::vector<double>> per_ap;  // E||v_kl||^2
};

void uplink_pass(const ProcessingContext& ctx, const EvaluationOptions& opt, const RealizationData& d,
                 const ChannelEstimates& est, Scheme s, SchemeAccum& acc) {
    const std::size_t K = ctx.num_ues;
    const std::size_t N = ctx.antennas;
    const auto combs = compute_combiners(s, ctx, est);
    std::vector<cd> inner(K);
    for (std::size_t k = 0; k < K; ++k) {
        const Combiner& c = combs[k];
        for (std::size_t i = 0; i < K; ++i) {
            cd g = 0.0;
            for (std::size_t j = 0; j < c.aps.size(); ++j) g += c.block(j, N).dot(d.channel.at(i, c.aps[j]));
            inner[i] = g;
        }
        double q = 0.0;
        for (std::size_t i = 0; i < K; ++i) {
            const double m2 = std::norm(inner[i]);
            q += ctx.power(i) * m2;
            acc.cross(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) += m2;
        }
        acc.uatf[k].add({inner[k].real(), inner[k].imag(), q, c.v.squaredNorm()});
        for (std::size_t j = 0; j < c.aps.size(); ++j) acc.ap_norm[k][j] += c.block(j, N).squaredNorm();
        if (opt.uplink && opt.mode == Mode::Centralized)
            acc.logs[k].add({std::log2(1.0 + instantaneous_sinr(k, c.v, ctx, est))});
    }
}

void downlink_pass(const ProcessingContext& ctx, const EvaluationOptions& opt, const RealizationData& d,
                   const ChannelEstimates& est, Scheme s, const Normalization& norm, SchemeAccum& acc) {
    const std::size_t K = ctx.num_ues;
    const std::size_t N = ctx.antennas;
    const auto Ni = static_cast<Eigen::Index>(N);
    auto combs = compute_combiners(s, ctx, est);
    std::vector<double> wpow(K, 0.0);
    for (std::size_t i = 0; i < K; ++i) {
        Combiner& c = combs[i];
        if (opt.mode == Mode::Centralized) {
            const CVec wbar = normalize_precoder(c.v, norm.collective[i]);
            wpow[i] = wbar.squaredNorm();
            c.v = std::sqrt(opt.rho_ue[i]) * wbar;
        } else {
            double sum = 0.0;
            for (std::size_t j = 0; j < c.aps.size(); ++j) {
                auto blk = c.v.segment(static_cast<Eigen::Index>(j) * Ni, Ni);
                const CVec wbar = normalize_precoder(blk, norm.per_ap[i][j]);
                sum += wbar.squaredNorm();
                const double r = opt.rho_ap(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c.aps[j]));
                blk = std::sqrt(r) * wbar;
            }
            wpow[i] = c.aps.empty() ? 0.0 : sum / static_cast<double>(c.aps.size());
        }
    }
    std::vector<cd> g(K);
    for (std::size_t k = 0; k < K; ++k) {
        double total = 0.0, interference = 0.0;
        for (std::size_t i = 0; i < K; ++i) {
            const Combiner& w = combs[i];
            cd v = 0.0;
            for (std::size_t j = 0; j < w.aps.size(); ++j) v += d.channel.at(k, w.aps[j]).dot(w.block(j, N));
            g[i] = v;
            const double m2 = std::norm(v);
            total += m2;
            if (i != k) interference += m2;
            acc.dl_cross(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) += m2;
        }
        acc.dl[k].add({g[k].real(), g[k].imag(), total});
        if (opt.genie) acc.genie[k].add({std::log2(1.0 + std::norm(g[k]) / (interference + opt.noise_dl))});
        acc.wpow[k].add({wpow[k]});
    }
}

template <typename Fn>
std::vector<BatchAccum> run_batches(std::size_t num_batches, std::size_t threads, Fn&& fn) {
    std::vector<BatchAccum> out(num_batches);
    std::vector<std::exception_ptr> errors(num_batches);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t b = next++; b < num_batches; b = next++) {
            try {
                out[b] = fn(b);
            } catch (...) {
                errors[b] = std::current_exception();
            }
        }
    };
    const std::size_t n = std::max<std::size_t>(1, std::min(threads, num_batches));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

[[noreturn]] void rethrow_with_index(const std::exception& e, std::uint64_t setup, std::uint64_t r) {
    const std::string where = "setup " + std::to_string(setup) + ", realization " + std::to_string(r) + ": ";
    if (dynamic_cast<const NumericError*>(&e)) throw NumericError(where + e.what());
    throw std::runtime_error(where + e.what());
}

}  // namespace

std::vector<std::vector<double>> mr_norms_per_ap(const ProcessingContext& ctx) {
    std::vector<std::vector<double>> out(ctx.num_ues);
    for (std::size_t k = 0; k < ctx.num_ues; ++k)
        for (std::size_t l : ctx.aps_of[k]) out[k].push_back(ctx.stats->estimate_cov(k, l).trace().real());
    return out;
}

std::vector<SchemeResult> evaluate_setup(const ProcessingContext& ctx, const EvaluationOptions& opt) {
    if (opt.num_realizations == 0) throw std::invalid_argument("no realizations");
    if (opt.batch_size == 0) throw std::invalid_argument("evaluate_setup: batch size must be positive");
    const std::size_t K = ctx.num_ues;
    const std::size_t S = opt.schemes.size();
    const bool need_dl = opt.downlink || opt.genie;
    if (need_dl && opt.mode == Mode::Centralized && opt.rho_ue.size() != K)
        throw std::invalid_argument("evaluate_setup: centralized downlink needs one power per UE");
    if (need_dl && opt.mode == Mode::Distributed &&
        (opt.rho_ap.rows() != static_cast<Eigen::Index>(K) || opt.rho_ap.cols() != static_cast<Eigen::Index>(ctx.num_aps)))
        throw std::invalid_argument("evaluate_setup: distributed downlink needs a K x L power matrix");
    if ((!opt.norm_collective.empty() && opt.norm_collective.size() != K) ||
        (!opt.norm_per_ap.empty() && opt.norm_per_ap.size() != K))
        throw std::invalid_argument("evaluate_setup: normalization override needs one entry per UE");

    const std::vector<char> demand = estimate_demand(opt.schemes, opt.mode, ctx);
    const std::size_t R = opt.num_realizations;
    const std::size_t num_batches = (R + opt.batch_size - 1) / opt.batch_size;

    auto fresh = [&] {
        BatchAccum acc;
        acc.reserve(S);
        for (std::size_t s = 0; s < S; ++s) acc.emplace_back(ctx);
        return acc;
    };
    auto merge_all = [&](const std::vector<BatchAccum>& parts) {
        BatchAccum total = fresh();
        for (const auto& p : parts)
            for (std::size_t s = 0; s < S; ++s) total[s].merge(p[s]);
        return total;
    };
    auto for_each_realization = [&](std::size_t b, auto&& body) {
        const std::size_t lo = b * opt.batch_size, hi = std::min(R, lo + opt.batch_size);
        for (std::size_t r = lo; r < hi; ++r) {
            try {
                const RealizationData d = draw_realization(ctx, opt.seed, opt.setup_index, r);
                const ChannelEstimates est = estimate_channels(*ctx.stats, d.pilots, demand);
                body(d, est);
            } catch (const std::exception& e) {
                rethrow_with_index(e, opt.setup_index, r);
            }
        }
    };

    const BatchAccum pass1 = merge_all(run_batches(num_batches, opt.threads, [&](std::size_t b) {
        BatchAccum acc = fresh();
        for_each_realization(b, [&](const RealizationData& d, const ChannelEstimates& est) {
            for (std::size_t s = 0; s < S; ++s) uplink_pass(ctx, opt, d, est, opt.schemes[s], acc[s]);
        });
        return acc;
    }));

    const double Rd = static_cast<double>(R);
    std::vector<Normalization> norms(S);
    for (std::size_t s = 0; s < S; ++s) {
        norms[s].collective.resize(K);
        norms[s].per_ap.resize(K);
        for (std::size_t k = 0; k < K; ++k) {
            norms[s].collective[k] = pass1[s].uatf[k].mean(3);
            for (double v : pass1[s].ap_norm[k]) norms[s].per_ap[k].push_back(v / Rd);
        }
        if (!opt.norm_collective.empty()) norms[s].collective = opt.norm_collective;
        if (!opt.norm_per_ap.empty()) norms[s].per_ap = opt.norm_per_ap;
    }

    BatchAccum pass2;
    if (need_dl) {
        pass2 = merge_all(run_batches(num_batches, opt.threads, [&](std::size_t b) {
            BatchAccum acc = fresh();
            for_each_realization(b, [&](const RealizationData& d, const ChannelEstimates& est) {
                for (std::size_t s = 0; s < S; ++s) downlink_pass(ctx, opt, d, est, opt.schemes[s], norms[s], acc[s]);
            });
            return acc;
        }));
    }

    std::vector<SchemeResult> results(S);
    for (std::size_t s = 0; s < S; ++s) {
        SchemeResult& res = results[s];
        const SchemeAccum& a1 = pass1[s];
        res.scheme = opt.schemes[s];
        res.ul_moments.signal.resize(K);
        res.ul_moments.norm.resize(K);
        res.ul_moments.cross = a1.cross / Rd;
        res.ap_norm = norms[s].per_ap;
        for (std::size_t k = 0; k < K; ++k) {
            res.ul_moments.signal[k] = {a1.uatf[k].mean(0), a1.uatf[k].mean(1)};
            res.ul_moments.norm[k] = a1.uatf[k].mean(3);
        }
        if (opt.uplink) {
            res.ul.resize(K);
            for (std::size_t k = 0; k < K; ++k)
                res.ul[k] = opt.mode == Mode::Centralized ? mean_estimate(a1.logs[k], opt.ul_prelog)
                                                          : uatf_se(a1.uatf[k], ctx.power(k), ctx.noise, opt.ul_prelog);
        }
        if (need_dl) {
            const SchemeAccum& a2 = pass2[s];
            res.dl_moments.signal.resize(K);
            res.dl_moments.cross = a2.dl_cross / Rd;
            res.precoder_power.resize(K);
            for (std::size_t k = 0; k < K; ++k) {
                res.dl_moments.signal[k] = {a2.dl[k].mean(0), a2.dl[k].mean(1)};
                res.precoder_power[k] = mean_estimate(a2.wpow[k], 1.0);
            }
            if (opt.downlink) {
                res.dl.resize(K);
                for (std::size_t k = 0; k < K; ++k) res.dl[k] = hardening_se(a2.dl[k], opt.noise_dl, opt.dl_prelog);
            }
            if (opt.genie) {
                res.genie.resize(K);
                for (std::size_t k = 0; k < K; ++k) res.genie[k] = mean_estimate(a2.genie[k], opt.dl_prelog);
            }
        }
    }
    return results;
}

CdfSamples cdf_statistics(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("cdf_statistics: empty input");
    CdfSamples c;
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    c.levels.resize(values.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        c.levels[i] = static_cast<double>(i + 1) / n;
        sum += values[i];
    }
    c.mean = sum / n;
    c.values = std::move(values);
    return c;
}

}  // namespace cellfree
