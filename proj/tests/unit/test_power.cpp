#include "cellfree/power.hpp"

#include "../support/instance.hpp"

#include <doctest.h>

#include <numeric>

using namespace cellfree;

TEST_CASE("uniform power allocations") {
    SimulationConfig c = testing::small_config(4, 1, 3, 2, 1.0);
    c.ue_power_w = 0.2;
    c.ap_power_w = 0.5;
    CHECK(ul_full_power(c) == std::vector<double>(3, 0.2));
    CHECK(dl_centralized_equal(c) == std::vector<double>(3, 0.25));
    c.pilot_len = 1;
    CHECK(dl_centralized_equal(c) == std::vector<double>(3, 0.5));
}

TEST_CASE("distributed power proportional to sqrt(beta)") {
    Topology topo(2, 3, 1, {CMat::Constant(1, 1, 4.0), CMat::Constant(1, 1, 1.0), CMat::Constant(1, 1, 1.0),
                            CMat::Constant(1, 1, 9.0), CMat::Constant(1, 1, 1.0), CMat::Constant(1, 1, 1.0)});
    ClusterAssignment a(2, 3, 3);
    a.serve(0, 0);
    a.serve(1, 0);
    a.serve(1, 1);
    const Eigen::MatrixXd rho = dl_distributed_proportional(a, topo, 1.0);
    CHECK(rho(0, 0) == doctest::Approx(2.0 / 3.0));
    CHECK(rho(1, 0) == doctest::Approx(1.0 / 3.0));
    CHECK(rho(1, 1) == doctest::Approx(1.0));
    CHECK(rho(0, 1) == 0.0);
    CHECK(rho(2, 0) == 0.0);
    CHECK(rho.col(0).sum() == doctest::Approx(1.0));
}

TEST_CASE("duality with one UE returns the uplink power") {
    UplinkMoments m;
    m.signal = {cd(1.5, 0.0)};
    m.cross = Eigen::MatrixXd::Constant(1, 1, 3.0);
    m.norm = {2.0};
    const std::vector<double> p{0.3};
    const DualityResult r = duality_power(m, p, 0.7, 0.7);
    CHECK(r.rho[0] == doctest::Approx(0.3));
    CHECK(r.dl_sinr[0] == doctest::Approx(r.ul_sinr[0]));
    CHECK(duality_power(m, p, 0.7, 1.4).rho[0] == doctest::Approx(0.6));
}

TEST_CASE("duality on a random network") {
    SimulationConfig cfg = testing::small_config(8, 2, 4, 2, 0.3);
    cfg.neighbor_radius_km = 0.1;
    Engine rng(21);
    const auto in = testing::make_instance(cfg, rng, {0.1, 0.05, 0.02, 0.08});
    const UplinkMoments m = ul_mr_closed_form_moments(in->ctx);
    const DualityResult r = duality_power(m, in->power, cfg.noise_ul_w, cfg.noise_dl_w);
    const DownlinkMoments d = dual_downlink_moments(m, r.rho);
    double sum_rho = 0.0, sum_p = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(r.rho[k] > 0.0);
        CHECK(dl_sinr_from_moments(k, d, cfg.noise_dl_w) == doctest::Approx(ul_sinr_from_moments(k, m, in->power, cfg.noise_ul_w)).epsilon(1e-9));
        sum_rho += r.rho[k];
        sum_p += in->power[k];
    }
    CHECK(sum_rho / cfg.noise_dl_w == doctest::Approx(sum_p / cfg.noise_ul_w).epsilon(1e-9));

    // rho solves (Gamma - Sigma) rho = sigma_dl^2 1.
    const Eigen::VectorXd lhs = (r.matrices.gamma - r.matrices.sigma) * Eigen::Map<const Eigen::VectorXd>(r.rho.data(), 4);
    for (Eigen::Index k = 0; k < 4; ++k) CHECK(lhs(k) == doctest::Approx(cfg.noise_dl_w).epsilon(1e-9));
}

TEST_CASE("duality rejects a UE without uplink SINR") {
    UplinkMoments m;
    m.signal = {cd(1.0, 0.0), cd(0.0, 0.0)};
    m.cross = Eigen::MatrixXd::Constant(2, 2, 1.0);
    m.norm = {1.0, 1.0};
    CHECK_THROWS_AS(duality_power(m, std::vector<double>{0.1, 0.1}, 1.0, 1.0), InfeasibleError);
}

TEST_CASE("centralized per-AP power stays within the AP budget") {
    SimulationConfig cfg = testing::small_config(9, 2, 6, 3, 0.4);
    cfg.neighbor_radius_km = 0.15;
    Engine rng(22);
    const auto in = testing::make_instance(cfg, rng);
    const std::vector<double> rho = dl_centralized_equal(cfg);
    EvaluationOptions o;
    o.schemes = {Scheme::PMMSE};
    o.mode = Mode::Centralized;
    o.uplink = false;
    o.downlink = true;
    o.dl_prelog = cfg.dl_prelog();
    o.noise_dl = cfg.noise_dl_w;
    o.rho_ue = rho;
    o.seed = 5;
    o.num_realizations = 40;
    const auto res = evaluate_setup(in->ctx, o);
    const auto ap = centralized_ap_power(in->ctx, rho, res[0]);
    REQUIRE(ap.size() == 9);
    for (double w : ap) CHECK(w <= cfg.ap_power_w * (1 + 1e-12));
    CHECK(std::accumulate(ap.begin(), ap.end(), 0.0) == doctest::Approx(std::accumulate(rho.begin(), rho.end(), 0.0)));
}
