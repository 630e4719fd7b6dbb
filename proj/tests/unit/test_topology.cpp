#include "cellfree/topology.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

using namespace cellfree;

namespace {

SimulationConfig drop_config(std::size_t L, std::size_t N, std::size_t K) {
    SimulationConfig c;
    c.num_aps = L;
    c.antennas_per_ap = N;
    c.num_ues = K;
    c.pilot_len = 10;
    c.coherence_len = 200;
    c.noise_ul_w = c.noise_dl_w = 1e-13;
    return c;
}

}  // namespace

TEST_CASE("wrap-around distance") {
    CHECK(wraparound_distance({0.3, 0.4}, {0.3, 0.4}, 2.0, 10.0) == doctest::Approx(0.010));
    CHECK(wraparound_distance({0.1, 0.1}, {1.9, 1.9}, 2.0, 0.0) == doctest::Approx(std::sqrt(0.08)));
    CHECK(wraparound_distance({0.0, 0.0}, {1.0, 0.0}, 2.0, 0.0) == doctest::Approx(1.0));
    const Point off = wraparound_offset({0.1, 1.9}, {1.9, 0.1}, 2.0);
    CHECK(off.x == doctest::Approx(-0.2));
    CHECK(off.y == doctest::Approx(0.2));
}

TEST_CASE("wrap-around distance is a metric on the torus") {
    Engine rng(5);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int i = 0; i < 2000; ++i) {
        const Point a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
        const double ab = wraparound_distance(a, b, 2.0, 0.0);
        CHECK(ab == doctest::Approx(wraparound_distance(b, a, 2.0, 0.0)));
        CHECK(ab <= wraparound_distance(a, c, 2.0, 0.0) + wraparound_distance(c, b, 2.0, 0.0) + 1e-12);
        CHECK(ab <= std::sqrt(2.0) + 1e-12);
    }
}

TEST_CASE("large-scale coefficient") {
    const ChannelModel m;
    // 10 m: -30.5 - 36.7 * log10(10) = -67.2 dB.
    CHECK(large_scale_coefficient(0.01, 0.0, m) == doctest::Approx(1.9054607179632464e-07).epsilon(1e-12));
    CHECK(large_scale_coefficient(0.2, 10.0, m) / large_scale_coefficient(0.2, 0.0, m) == doctest::Approx(10.0));
    const double ratio = large_scale_coefficient(0.1, 0.0, m) / large_scale_coefficient(0.2, 0.0, m);
    CHECK(ratio == doctest::Approx(std::pow(10.0, 3.67 * std::log10(2.0))));
    CHECK(ratio == doctest::Approx(12.7286).epsilon(1e-5));
    CHECK_THROWS(large_scale_coefficient(0.0, 0.0, m));
}

TEST_CASE("local scattering correlation") {
    const double spread = 15.0 * std::numbers::pi / 180.0;
    const CMat r1 = spatial_correlation_matrix(3e-9, 0.4, spread, 1);
    REQUIRE(r1.rows() == 1);
    CHECK(r1(0, 0).real() == doctest::Approx(3e-9));

    const CMat r4 = spatial_correlation_matrix(2.0, 0.0, spread, 4);
    CHECK((r4 - r4.adjoint()).norm() < 1e-12);
    CHECK(r4.trace().real() == doctest::Approx(8.0).epsilon(1e-12));
    const Eigen::SelfAdjointEigenSolver<CMat> es(r4);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12 * 2.0);
    // Entry (0,1) from the stated model at phi = 0: beta * exp(-(spread*pi)^2/2).
    CHECK(std::abs(r4(0, 1)) == doctest::Approx(2.0 * std::exp(-std::pow(spread * std::numbers::pi, 2) / 2)));

    const CMat wide = spatial_correlation_matrix(1.0, 0.3, 50.0, 4);
    CHECK((wide - CMat::Identity(4, 4)).norm() < 1e-9);
}

TEST_CASE("Hermitian square root") {
    const CMat R = spatial_correlation_matrix(1.5, 0.7, 0.2, 4);
    const CMat S = hermitian_sqrt(R);
    CHECK((S * S - R).norm() < 1e-12 * R.norm());
    CHECK(hermitian_sqrt(CMat::Zero(3, 3)).norm() == 0.0);
    CMat bad = CMat::Identity(2, 2);
    bad(1, 1) = -0.5;
    CHECK_THROWS_AS(hermitian_sqrt(bad), NumericError);
}

TEST_CASE("drops: positions, traces and determinism") {
    SimulationConfig c = drop_config(20, 4, 6);
    Engine a(11), b(11), other(12);
    const Topology t = build_topology(c, a);
    const Topology u = build_topology(c, b);
    const Topology v = build_topology(c, other);
    REQUIRE(t.placement.aps.size() == 20);
    REQUIRE(t.placement.ues.size() == 6);
    for (const auto& p : t.placement.aps) {
        CHECK(p.x >= 0.0);
        CHECK(p.x < 2.0);
        CHECK(p.y >= 0.0);
        CHECK(p.y < 2.0);
    }
    CHECK(t.placement.aps[3].x == u.placement.aps[3].x);
    CHECK(t.placement.aps[3].x != v.placement.aps[3].x);
    for (std::size_t k = 0; k < 6; ++k)
        for (std::size_t l = 0; l < 20; ++l) {
            CHECK(t.beta(k, l) > 0.0);
            CHECK(t.corr(k, l).trace().real() == doctest::Approx(4.0 * t.beta(k, l)).epsilon(1e-12));
        }
    c.num_ues = 0;
    Engine e(1);
    CHECK(build_topology(c, e).num_ues() == 0);
}

TEST_CASE("channel samples follow the correlation matrices") {
    const CMat R = spatial_correlation_matrix(1.0, 0.5, 0.25, 3);
    Topology topo(3, 1, 3, {R, R, CMat::Zero(3, 3)});
    Engine rng(3);
    constexpr int n = 100000;
    CMat S = CMat::Zero(3, 3), X = CMat::Zero(3, 3), W = CMat::Zero(3, 3);
    const CMat white = hermitian_sqrt(R).inverse();
    bool zero_stays_zero = true;
    for (int i = 0; i < n; ++i) {
        const ChannelRealization h = sample_channel(topo, rng);
        zero_stays_zero = zero_stays_zero && h.at(0, 2).norm() == 0.0;
        S += h.at(0, 0) * h.at(0, 0).adjoint();
        const CVec z = white * h.at(0, 0);
        W += z * z.adjoint();
        X += h.at(0, 0) * h.at(0, 1).adjoint();
    }
    CHECK(zero_stays_zero);
    S /= n;
    W /= n;
    X /= n;
    const double tol = 5.0 / std::sqrt(static_cast<double>(n));
    CHECK((S - R).cwiseAbs().maxCoeff() <= tol);
    CHECK((W - CMat::Identity(3, 3)).cwiseAbs().maxCoeff() <= tol);
    // Different APs are uncorrelated.
    CHECK(X.cwiseAbs().maxCoeff() <= tol);
}
