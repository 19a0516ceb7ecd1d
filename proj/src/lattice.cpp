#include "cwalk/lattice.hpp"

#include <cmath>
#include <sstream>

namespace cwalk {

Grid Grid::make(int n_sites, Real dx, Real origin) {
    if (n_sites < 4) {
        throw std::invalid_argument("grid needs at least 4 sites, got " + std::to_string(n_sites));
    }
    if (!(dx > 0) || !std::isfinite(dx)) {
        throw std::invalid_argument("grid spacing must be positive and finite");
    }
    if (!std::isfinite(origin)) {
        throw std::invalid_argument("grid origin must be finite");
    }
    Grid g;
    g.n_sites = n_sites;
    g.dx = dx;
    g.dt = dx;
    g.origin = origin;
    return g;
}

Grid Grid::centered(Real length, Real eps) {
    if (!(length > 0) || !(eps > 0)) {
        throw std::invalid_argument("domain length and spacing must be positive");
    }
    const Real ratio = length / eps;
    const long n = std::lround(ratio);
    if (std::abs(ratio - static_cast<Real>(n)) > 1e-9 * ratio) {
        std::ostringstream msg;
        msg << "domain length " << length << " is not an integer multiple of spacing " << eps;
        throw std::invalid_argument(msg.str());
    }
    return make(static_cast<int>(n), eps, -0.5 * length);
}

SpinorField::SpinorField(const Grid& g, ComplexVector u, ComplexVector d)
    : grid(g), up(std::move(u)), down(std::move(d)) {
    if (up.size() != g.n_sites || down.size() != g.n_sites) {
        throw std::invalid_argument("spinor amplitude arrays must have n_sites entries");
    }
}

DoubledField::DoubledField(SpinorField p, SpinorField q) : psi(std::move(p)), phi(std::move(q)) {
    require_same_grid(psi.grid, phi.grid, "DoubledField");
}

void require_same_grid(const Grid& a, const Grid& b, const char* where) {
    if (!(a == b)) {
        throw std::invalid_argument(std::string(where) + ": grid mismatch");
    }
}

SpinorField gaussian_packet(const Grid& grid, const PacketParams& p) {
    if (!(p.sigma >= 2 * grid.dx)) {
        throw PreconditionError("packet width sigma must be at least 2*dx (under-resolved packet)");
    }
    if (!(p.x0 >= grid.x_begin() && p.x0 < grid.x_end())) {
        throw PreconditionError("packet center x0 lies outside the grid extent");
    }
    const Complex up_weight = std::cos(p.chi);
    const Complex down_weight = std::polar(std::sin(p.chi), p.phase);

    SpinorField field(grid);
    for (int j = 0; j < grid.n_sites; ++j) {
        const Real x = grid.position(j);
        const Real r = x - p.x0;
        const Complex envelope = std::exp(Complex(-r * r / (4 * p.sigma * p.sigma), p.k0 * x));
        field.up[j] = envelope * up_weight;
        field.down[j] = envelope * down_weight;
    }
    // chi == 0 must leave the down component identically zero
    if (std::sin(p.chi) == 0) field.down.setZero();
    const Real norm = prob_norm(field);
    field *= 1 / std::sqrt(norm);
    return field;
}

Real prob_norm(const SpinorField& field) { return field.up.squaredNorm() + field.down.squaredNorm(); }

Real total_norm(const DoubledField& state) { return prob_norm(state.psi) + prob_norm(state.phi); }

Real l2_distance(const SpinorField& a, const SpinorField& b) {
    require_same_grid(a.grid, b.grid, "l2_distance");
    const Real sum = (a.up - b.up).squaredNorm() + (a.down - b.down).squaredNorm();
    return std::sqrt(a.grid.dx * sum);
}

Real l2_distance(const DoubledField& a, const DoubledField& b) {
    const Real psi = l2_distance(a.psi, b.psi);
    const Real phi = l2_distance(a.phi, b.phi);
    return std::sqrt(psi * psi + phi * phi);
}

Real fidelity(const SpinorField& a, const SpinorField& b) {
    require_same_grid(a.grid, b.grid, "fidelity");
    const Real na = prob_norm(a);
    const Real nb = prob_norm(b);
    if (!(na > 0) || !(nb > 0)) {
        throw std::invalid_argument("fidelity: zero-norm input");
    }
    const Complex overlap = a.up.dot(b.up) + a.down.dot(b.down);
    return std::min<Real>(1, std::norm(overlap) / (na * nb));
}

SpinorField apply_site_matrices(const SpinorField& field, std::span<const Matrix2> per_site) {
    if (static_cast<int>(per_site.size()) != field.size()) {
        throw std::invalid_argument("apply_site_matrices: need one matrix per site");
    }
    SpinorField out(field.grid);
    for (int j = 0; j < field.size(); ++j) {
        const Matrix2& m = per_site[j];
        out.up[j] = m(0, 0) * field.up[j] + m(0, 1) * field.down[j];
        out.down[j] = m(1, 0) * field.up[j] + m(1, 1) * field.down[j];
    }
    return out;
}

}  // namespace cwalk
