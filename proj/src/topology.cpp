#include "cellfree/topology.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace cellfree {

Topology::Topology(std::size_t num_aps, std::size_t num_ues, std::size_t antennas, std::vector<CMat> corr)
    : L_(num_aps), K_(num_ues), N_(antennas), R_(std::move(corr)), beta_(num_ues, num_aps) {
    if (R_.size() != K_ * L_) throw std::invalid_argument("Topology: expected K*L correlation matrices");
    R_sqrt_.reserve(R_.size());
    for (std::size_t k = 0; k < K_; ++k) {
        for (std::size_t l = 0; l < L_; ++l) {
            const CMat& R = R_[k * L_ + l];
            if (R.rows() != static_cast<Eigen::Index>(N_) || R.cols() != static_cast<Eigen::Index>(N_))
                throw std::invalid_argument("Topology: correlation matrix has wrong dimension");
            beta_(k, l) = R.trace().real() / static_cast<double>(N_);
            R_sqrt_.push_back(hermitian_sqrt(R));
        }
    }
}

Placement place_entities(const SimulationConfig& cfg, Engine& rng) {
    std::uniform_real_distribution<double> u(0.0, cfg.area_side_km);
    Placement p;
    p.aps.reserve(cfg.num_aps);
    p.ues.reserve(cfg.num_ues);
    for (std::size_t l = 0; l < cfg.num_aps; ++l) {
        const double x = u(rng);
        p.aps.push_back({x, u(rng)});
    }
    for (std::size_t k = 0; k < cfg.num_ues; ++k) {
        const double x = u(rng);
        p.ues.push_back({x, u(rng)});
    }
    return p;
}

Point wraparound_offset(Point a, Point b, double side_km) {
    auto wrap = [side_km](double d) {
        d = std::fmod(d, side_km);
        if (d > side_km / 2) d -= side_km;
        if (d < -side_km / 2) d += side_km;
        return d;
    };
    return {wrap(b.x - a.x), wrap(b.y - a.y)};
}

double wraparound_distance(Point a, Point b, double side_km, double height_m) {
    const Point d = wraparound_offset(a, b, side_km);
    const double h = height_m / 1000.0;
    return std::sqrt(d.x * d.x + d.y * d.y + h * h);
}

double large_scale_coefficient(double distance_km, double shadow_db, const ChannelModel& model) {
    if (!(distance_km > 0)) throw std::domain_error("large_scale_coefficient: distance must be positive");
    const double gain_db = -model.ref_loss_db - model.slope_db * std::log10(distance_km * 1000.0) + shadow_db;
    return std::pow(10.0, gain_db / 10.0);
}

CMat spatial_correlation_matrix(double beta, double nominal_angle, double angular_spread,
                                std::size_t antennas) {
    const auto n = static_cast<Eigen::Index>(antennas);
    CMat R(n, n);
    const double s = std::sin(nominal_angle);
    const double c = std::cos(nominal_angle);
    for (Eigen::Index m = 0; m < n; ++m) {
        for (Eigen::Index q = 0; q < n; ++q) {
            const double dist = static_cast<double>(m - q);
            const double phase = std::numbers::pi * dist * s;
            const double env = angular_spread * std::numbers::pi * dist * c;
            R(m, q) = beta * std::polar(std::exp(-env * env / 2.0), phase);
        }
    }
    return R;
}

CMat hermitian_sqrt(const CMat& R) {
    const auto n = R.rows();
    if (n == 1) {
        const double r = R(0, 0).real();
        if (r < 0) throw NumericError("hermitian_sqrt: negative variance");
        return CMat::Constant(1, 1, cd(std::sqrt(r), 0.0));
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(R);
    if (es.info() != Eigen::Success) throw NumericError("hermitian_sqrt: eigendecomposition failed");
    const double scale = std::abs(R.trace().real()) / static_cast<double>(n);
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (ev(i) < 0) {
            if (ev(i) < -1e-10 * scale) throw NumericError("hermitian_sqrt: matrix is not positive semi-definite");
            ev(i) = 0;
        }
        ev(i) = std::sqrt(ev(i));
    }
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Topology build_topology(const SimulationConfig& cfg, Engine& rng) {
    Placement place = place_entities(cfg, rng);
    const std::size_t L = cfg.num_aps, K = cfg.num_ues, N = cfg.antennas_per_ap;
    std::normal_distribution<double> shadow(0.0, cfg.channel.shadowing_std_db);
    const double spread = cfg.channel.angular_spread_deg * std::numbers::pi / 180.0;

    std::vector<CMat> corr;
    corr.reserve(K * L);
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t l = 0; l < L; ++l) {
            const double d = wraparound_distance(place.aps[l], place.ues[k], cfg.area_side_km, cfg.ap_height_m);
            const double sf = cfg.channel.shadowing_std_db > 0 ? shadow(rng) : 0.0;
            const double beta = large_scale_coefficient(d, sf, cfg.channel);
            const Point off = wraparound_offset(place.aps[l], place.ues[k], cfg.area_side_km);
            const double angle = std::atan2(off.y, off.x);
            corr.push_back(spatial_correlation_matrix(beta, angle, spread, N));
        }
    }
    Topology topo(L, K, N, std::move(corr));
    topo.placement = std::move(place);
    topo.side_km = cfg.area_side_km;
    topo.height_m = cfg.ap_height_m;
    return topo;
}

CVec sample_correlated(const CMat& corr_sqrt, Engine& rng) {
    return corr_sqrt * complex_normal_vector(rng, corr_sqrt.rows());
}

ChannelRealization sample_channel(const Topology& topo, Engine& rng) {
    ChannelRealization out;
    out.num_aps = topo.num_aps();
    out.num_ues = topo.num_ues();
    out.antennas = topo.antennas();
    out.h.reserve(out.num_aps * out.num_ues);
    for (std::size_t k = 0; k < out.num_ues; ++k)
        for (std::size_t l = 0; l < out.num_aps; ++l) out.h.push_back(sample_correlated(topo.corr_sqrt(k, l), rng));
    return out;
}

}  // namespace cellfree
