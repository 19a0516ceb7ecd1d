#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cwalk {

using Real = double;
using Complex = std::complex<Real>;
using Matrix2 = Eigen::Matrix2cd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Raised when a caller violates a documented precondition on the physics
/// (nonpositive conformal factor, under-resolved packet, ...).
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised for malformed configuration documents.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Boundary { periodic };

/// Periodic 1D lattice in lattice units: dt == dx.
struct Grid {
    int n_sites = 0;
    Real dx = 0;
    Real dt = 0;
    Real origin = 0;  // position of site 0
    Boundary boundary = Boundary::periodic;

    static Grid make(int n_sites, Real dx, Real origin = 0);
    /// Domain [-length/2, length/2) with spacing eps; length/eps must be integral.
    static Grid centered(Real length, Real eps);

    Real position(int site) const { return origin + site * dx; }
    Real length() const { return n_sites * dx; }
    Real x_begin() const { return origin; }
    Real x_end() const { return origin + length(); }
    int wrap(long site) const {
        const long n = n_sites;
        return static_cast<int>(((site % n) + n) % n);
    }

    friend bool operator==(const Grid&, const Grid&) = default;
};

struct SpinorField {
    Grid grid;
    ComplexVector up;
    ComplexVector down;

    SpinorField() = default;
    explicit SpinorField(const Grid& g)
        : grid(g), up(ComplexVector::Zero(g.n_sites)), down(ComplexVector::Zero(g.n_sites)) {}
    SpinorField(const Grid& g, ComplexVector u, ComplexVector d);

    int size() const { return grid.n_sites; }
    bool all_finite() const { return up.allFinite() && down.allFinite(); }
    /// Site-wise |psi_up|^2 + |psi_down|^2.
    RealVector density() const { return up.cwiseAbs2() + down.cwiseAbs2(); }

    SpinorField& operator*=(Complex z) {
        up *= z;
        down *= z;
        return *this;
    }
};

/// Ordered pair (psi, phi) on a common grid.
struct DoubledField {
    SpinorField psi;
    SpinorField phi;

    DoubledField() = default;
    DoubledField(SpinorField p, SpinorField q);
    explicit DoubledField(const Grid& g) : psi(g), phi(g) {}

    const Grid& grid() const { return psi.grid; }
};

inline Matrix2 identity2() { return Matrix2::Identity(); }
inline Matrix2 sigma_x() {
    Matrix2 m;
    m << 0, 1, 1, 0;
    return m;
}
inline Matrix2 sigma_z() {
    Matrix2 m;
    m << 1, 0, 0, -1;
    return m;
}

struct PacketParams {
    Real x0 = 0;
    Real sigma = 0.5;
    Real k0 = 0;
    Real chi = 0;    // spin mixing angle
    Real phase = 0;  // relative phase of the down component
};

/// Normalized Gaussian packet exp(-(x-x0)^2/(4 sigma^2) + i k0 x) (cos chi, e^{i phase} sin chi).
/// Requires sigma >= 2 dx and x0 inside the grid extent.
SpinorField gaussian_packet(const Grid& grid, const PacketParams& p);

Real prob_norm(const SpinorField& field);
Real total_norm(const DoubledField& state);

/// sqrt(sum_x dx (|a_up - b_up|^2 + |a_dn - b_dn|^2)).
Real l2_distance(const SpinorField& a, const SpinorField& b);
Real l2_distance(const DoubledField& a, const DoubledField& b);

/// Squared normalized overlap; 1 means equal up to a global phase.
Real fidelity(const SpinorField& a, const SpinorField& b);

/// Applies an independent 2x2 matrix at every site.
SpinorField apply_site_matrices(const SpinorField& field, std::span<const Matrix2> per_site);

void require_same_grid(const Grid& a, const Grid& b, const char* where);

}  // namespace cwalk
