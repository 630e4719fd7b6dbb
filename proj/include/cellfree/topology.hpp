#pragma once

#include "cellfree/config.hpp"
#include "cellfree/rng.hpp"
#include "cellfree/types.hpp"

#include <vector>

namespace cellfree {

/// Horizontal position in km.
struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Placement {
    std::vector<Point> aps;
    std::vector<Point> ues;
};

/// Large-scale statistics of one network drop. Per-pair matrices are stored
/// row-major by UE: index k * L + l.
class Topology {
public:
    Topology() = default;

    /// Builds from explicit statistics. `corr` holds K*L Hermitian PSD N x N
    /// matrices; beta is derived as tr(R)/N.
    Topology(std::size_t num_aps, std::size_t num_ues, std::size_t antennas, std::vector<CMat> corr);

    std::size_t num_aps() const { return L_; }
    std::size_t num_ues() const { return K_; }
    std::size_t antennas() const { return N_; }

    const CMat& corr(std::size_t k, std::size_t l) const { return R_[k * L_ + l]; }
    const CMat& corr_sqrt(std::size_t k, std::size_t l) const { return R_sqrt_[k * L_ + l]; }
    double beta(std::size_t k, std::size_t l) const { return beta_(k, l); }
    const Eigen::MatrixXd& beta_matrix() const { return beta_; }

    Placement placement;
    double side_km = 0.0;
    double height_m = 0.0;

private:
    std::size_t L_ = 0, K_ = 0, N_ = 0;
    std::vector<CMat> R_;
    std::vector<CMat> R_sqrt_;
    Eigen::MatrixXd beta_;
};

/// Per-pair channel vectors h_kl, index k * L + l.
struct ChannelRealization {
    std::size_t num_aps = 0, num_ues = 0, antennas = 0;
    std::vector<CVec> h;

    const CVec& at(std::size_t k, std::size_t l) const { return h[k * num_aps + l]; }
};

/// L APs then K UEs, i.i.d. uniform on [0, side)^2.
Placement place_entities(const SimulationConfig& cfg, Engine& rng);

/// Toroidal per-axis minimal difference b - a, each component in [-side/2, side/2].
Point wraparound_offset(Point a, Point b, double side_km);

/// sqrt(dx^2 + dy^2 + h^2) in km with (dx, dy) the toroidal minimal offset.
double wraparound_distance(Point a, Point b, double side_km, double height_m);

/// Linear gain for a link of `distance_km` with `shadow_db` of shadow fading.
double large_scale_coefficient(double distance_km, double shadow_db, const ChannelModel& model);

/// Local-scattering model on a half-wavelength ULA with a Gaussian angular
/// distribution around `nominal_angle` (radians), spread in radians.
CMat spatial_correlation_matrix(double beta, double nominal_angle, double angular_spread,
                                std::size_t antennas);

/// Hermitian square root by eigendecomposition. Negative eigenvalues down to
/// -1e-10 * tr(R)/N are clipped to zero; anything below is a NumericError.
CMat hermitian_sqrt(const CMat& R);

/// Full drop: positions, independent log-normal shadowing per link, nominal
/// angles from the wrap-around geometry and correlation matrices.
Topology build_topology(const SimulationConfig& cfg, Engine& rng);

/// h = R^(1/2) z, z ~ CN(0, I).
CVec sample_correlated(const CMat& corr_sqrt, Engine& rng);

ChannelRealization sample_channel(const Topology& topo, Engine& rng);

}  // namespace cellfree
