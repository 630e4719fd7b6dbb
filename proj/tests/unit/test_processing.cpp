#include "cellfree/processing.hpp"

#include "../support/instance.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>

using namespace cellfree;
using testing::estimates_from;
using testing::make_instance;
using testing::scalar_instance;

namespace {

ChannelEstimates scalar_estimate(double h) { return estimates_from(1, 1, {CVec::Constant(1, h)}); }

std::unique_ptr<testing::Instance> random_instance(std::uint64_t seed, bool serve_all = false, std::size_t N = 2) {
    SimulationConfig cfg = testing::small_config(12, N, 8, 3, 0.4);
    cfg.neighbor_radius_km = 0.12;
    cfg.serve_all = serve_all;
    Engine rng(seed);
    return make_instance(cfg, rng);
}

ChannelEstimates full_estimates(const testing::Instance& in, std::uint64_t r) {
    Engine rng(1000 + r);
    const ChannelRealization h = sample_channel(in.topo, rng);
    const PilotObservation y = despread_pilots(h, in.assign, in.power, in.cfg.noise_ul_w, rng);
    return estimate_channels(*in.stats, y);
}

}  // namespace

TEST_CASE("scalar combiners") {
    const auto in = scalar_instance();  // C = 2/3, p = 0.1, sigma^2 = 1
    const ChannelEstimates est = scalar_estimate(2.0);
    CHECK(mr_combiner(0, in->ctx, est).v(0).real() == doctest::Approx(2.0));
    // Z = 0.1 * 2/3 + 1; v = 0.1 / (0.1 * 4 + Z) * 2.
    const double z = 0.1 * 2.0 / 3.0 + 1.0;
    const double v = 0.1 * 2.0 / (0.4 + z);
    CHECK(mmse_combiner(0, in->ctx, est).v(0).real() == doctest::Approx(v));
    CHECK(v == doctest::Approx(0.13636).epsilon(1e-4));
    CHECK(pmmse_combiner(0, in->ctx, est).v(0).real() == doctest::Approx(v));
    CHECK(lpmmse_combiner(0, 0, in->ctx, est)(0).real() == doctest::Approx(v));
    CHECK(lmmse_combiner(0, 0, in->ctx, est)(0).real() == doctest::Approx(v));
    CHECK(instantaneous_sinr(0, CVec::Constant(1, 1.0), in->ctx, est) == doctest::Approx(0.375));
    CHECK(max_sinr(0, in->ctx, est) == doctest::Approx(0.375));
    CHECK(lpmmse_combiner(0, 0, in->ctx, scalar_estimate(0.0)).norm() == 0.0);
}

TEST_CASE("Hermitian solves") {
    CMat A(2, 2);
    A << 2.0, cd(0, 1), cd(0, -1), 2.0;
    const CVec b = CVec::Ones(2);
    CHECK((A * pseudo_solve(A, b) - b).norm() < 1e-12);
    // Rank-one matrix: the pseudo-inverse solution lies in its range.
    const CVec u = CVec::Ones(3) / std::sqrt(3.0);
    const CMat P = u * u.adjoint();
    const CVec x = pseudo_solve(P, u);
    CHECK((x - u).norm() < 1e-9);
    CHECK((hermitian_pinv(P) - P).norm() < 1e-9);
}

TEST_CASE("combiners are restricted to the serving APs") {
    const auto in = random_instance(3);
    const ChannelEstimates est = full_estimates(*in, 0);
    for (Scheme s : kAllSchemes) {
        const auto combs = compute_combiners(s, in->ctx, est);
        for (std::size_t k = 0; k < in->cfg.num_ues; ++k) {
            CHECK(combs[k].aps == in->ctx.aps_of[k]);
            CHECK(combs[k].v.size() == static_cast<Eigen::Index>(in->cfg.antennas_per_ap * combs[k].aps.size()));
        }
    }
    const auto mr = compute_combiners(Scheme::MR, in->ctx, est);
    CHECK((mr[0].v - stack_estimate(est, 0, in->ctx.aps_of[0], 2)).norm() == 0.0);
}

TEST_CASE("cached combiners match the single-UE functions") {
    const auto in = random_instance(4);
    const ChannelEstimates est = full_estimates(*in, 1);
    const auto mm = compute_combiners(Scheme::MMSE, in->ctx, est);
    const auto pm = compute_combiners(Scheme::PMMSE, in->ctx, est);
    const auto lp = compute_combiners(Scheme::LPMMSE, in->ctx, est);
    const auto lm = compute_combiners(Scheme::LMMSE, in->ctx, est);
    const std::size_t N = in->cfg.antennas_per_ap;
    for (std::size_t k = 0; k < in->cfg.num_ues; ++k) {
        CHECK((mm[k].v - mmse_combiner(k, in->ctx, est).v).norm() <= 1e-12 * mm[k].v.norm());
        CHECK((pm[k].v - pmmse_combiner(k, in->ctx, est).v).norm() <= 1e-12 * pm[k].v.norm());
        for (std::size_t j = 0; j < in->ctx.aps_of[k].size(); ++j) {
            const std::size_t l = in->ctx.aps_of[k][j];
            CHECK((lp[k].block(j, N) - lpmmse_combiner(k, l, in->ctx, est)).norm() <= 1e-12 * lp[k].v.norm());
            CHECK((lm[k].block(j, N) - lmmse_combiner(k, l, in->ctx, est)).norm() <= 1e-12 * lm[k].v.norm());
        }
    }
}

TEST_CASE("MMSE combining maximizes the SINR") {
    const auto in = random_instance(5);
    Engine rng(55);
    for (std::uint64_t r = 0; r < 20; ++r) {
        const ChannelEstimates est = full_estimates(*in, r);
        const auto mm = compute_combiners(Scheme::MMSE, in->ctx, est);
        const auto pm = compute_combiners(Scheme::PMMSE, in->ctx, est);
        for (std::size_t k = 0; k < in->cfg.num_ues; ++k) {
            const double best = instantaneous_sinr(k, mm[k].v, in->ctx, est);
            CHECK(best == doctest::Approx(max_sinr(k, in->ctx, est)).epsilon(1e-9));
            CHECK(instantaneous_sinr(k, pm[k].v, in->ctx, est) <= best * (1 + 1e-12));
            for (int j = 0; j < 100; ++j)
                CHECK(instantaneous_sinr(k, complex_normal_vector(rng, mm[k].v.size()), in->ctx, est) <= best * (1 + 1e-12));
        }
    }
}

TEST_CASE("SINR is invariant to complex scaling") {
    const auto in = random_instance(6);
    const ChannelEstimates est = full_estimates(*in, 2);
    const auto lp = compute_combiners(Scheme::LPMMSE, in->ctx, est);
    const cd scale = 7e3 * std::polar(1.0, 0.77);
    for (std::size_t k = 0; k < in->cfg.num_ues; ++k) {
        const double a = instantaneous_sinr(k, lp[k].v, in->ctx, est);
        CHECK(instantaneous_sinr(k, scale * lp[k].v, in->ctx, est) == doctest::Approx(a).epsilon(1e-9));
    }
}

TEST_CASE("P-MMSE equals MMSE when every AP serves every UE") {
    const auto in = random_instance(7, true);
    const ChannelEstimates est = full_estimates(*in, 3);
    const auto mm = compute_combiners(Scheme::MMSE, in->ctx, est);
    const auto pm = compute_combiners(Scheme::PMMSE, in->ctx, est);
    const auto lp = compute_combiners(Scheme::LPMMSE, in->ctx, est);
    const auto lm = compute_combiners(Scheme::LMMSE, in->ctx, est);
    for (std::size_t k = 0; k < in->cfg.num_ues; ++k) {
        CHECK((mm[k].v - pm[k].v).norm() <= 1e-12 * mm[k].v.norm());
        CHECK((lp[k].v - lm[k].v).norm() <= 1e-12 * lm[k].v.norm());
    }
}

TEST_CASE("a UE without partners gets a matched filter") {
    // Single AP, single antenna and nobody else on the AP.
    Topology topo(1, 1, 1, {CMat::Constant(1, 1, 1.5)});
    const auto in = testing::manual_instance(std::move(topo), 2, {1}, {{0}}, {0.2}, 0.5);
    const ChannelEstimates est = estimates_from(1, 1, {CVec::Constant(1, cd(0.3, -0.4))});
    const CVec v = pmmse_combiner(0, in->ctx, est).v;
    const cd ratio = v(0) / cd(0.3, -0.4);
    CHECK(ratio.real() > 0.0);
    CHECK(std::abs(ratio.imag()) < 1e-12);
}

TEST_CASE("LP-MMSE gains have bounded support") {
    // N = L = K = 1 with a perfectly known channel.
    Topology topo(1, 1, 1, {CMat::Constant(1, 1, 1.0)});
    const auto in = testing::manual_instance(std::move(topo), 1, {0}, {{0}}, {1.0}, 1e-9);
    Engine rng(8);
    double mr_max = 0, mr_sum = 0, lp_max = 0, lp_sum = 0;
    constexpr int n = 10000;
    for (int i = 0; i < n; ++i) {
        const CVec h = complex_normal_vector(rng, 1);
        const ChannelEstimates est = estimates_from(1, 1, {h});
        const double g_mr = std::abs(h.dot(mr_combiner(0, in->ctx, est).v));
        const double g_lp = std::abs(h.dot(lpmmse_combiner(0, 0, in->ctx, est)));
        mr_max = std::max(mr_max, g_mr);
        lp_max = std::max(lp_max, g_lp);
        mr_sum += g_mr;
        lp_sum += g_lp;
    }
    CHECK(lp_max / (lp_sum / n) <= mr_max / (mr_sum / n));
}

TEST_CASE("precoder normalization") {
    const CVec v = CVec::Constant(2, 3.0);
    CHECK((normalize_precoder(v, 4.0) - v / 2.0).norm() == 0.0);
    CHECK_THROWS_AS(normalize_precoder(v, 0.0), NumericError);
}

TEST_CASE("instrumented combiners agree with the plain ones") {
    const auto in = random_instance(9);
    Engine rng(90);
    const ChannelRealization h = sample_channel(in->topo, rng);
    std::vector<CMat> blocks;
    for (std::size_t l = 0; l < in->cfg.num_aps; ++l)
        blocks.push_back(received_pilot_block(h, l, in->assign, in->power, in->cfg.noise_ul_w, rng));
    // Estimates from the same blocks through the uncounted path.
    ChannelEstimates est;
    est.num_aps = in->cfg.num_aps;
    est.num_ues = in->cfg.num_ues;
    est.present.assign(est.num_aps * est.num_ues, 1);
    for (std::size_t k = 0; k < est.num_ues; ++k)
        for (std::size_t l = 0; l < est.num_aps; ++l)
            est.hhat.push_back(mmse_estimate(in->stats->filter(k, l),
                                             despread(blocks[l], static_cast<std::size_t>(in->assign.pilot_of[k]))));
    for (Scheme s : kAllSchemes) {
        const auto plain = compute_combiners(s, in->ctx, est);
        for (std::size_t k = 0; k < est.num_ues; ++k) {
            OpCounter c;
            const Combiner got = instrumented_combiner(s, k, in->ctx, blocks, c);
            CHECK(got.aps == plain[k].aps);
            CHECK((got.v - plain[k].v).norm() <= 1e-9 * plain[k].v.norm());
            CHECK(c.estimation > 0);
        }
    }
}
