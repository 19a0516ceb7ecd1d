#include "cwalk/reference.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/FFT>

namespace cwalk {

namespace {

long lattice_steps(const Grid& grid, Real horizon) {
    const Real ratio = horizon / grid.dt;
    const long n = std::lround(ratio);
    if (std::abs(ratio - static_cast<Real>(n)) > 1e-9 * std::max<Real>(1, std::abs(ratio))) {
        throw std::invalid_argument("transport_exact: horizon must be a multiple of dt");
    }
    return n;
}

// out[j] = in[j + offset mod n]
ComplexVector rotated(const ComplexVector& in, long offset) {
    const long n = in.size();
    const long k = ((offset % n) + n) % n;
    ComplexVector out(n);
    out.head(n - k) = in.tail(n - k);
    out.tail(k) = in.head(k);
    return out;
}

Real weighted_norm(const SpinorField& f, const ConformalField& cf, Real t) {
    Real sum = 0;
    for (int j = 0; j < f.size(); ++j) {
        sum += cf.value(t, f.grid.position(j)) * (std::norm(f.up[j]) + std::norm(f.down[j]));
    }
    return sum * f.grid.dx;
}

}  // namespace

SpinorField transport_exact(const SpinorField& psi0, Real horizon) {
    const long n = lattice_steps(psi0.grid, horizon);
    return SpinorField(psi0.grid, rotated(psi0.up, n), rotated(psi0.down, -n));
}

Matrix2 dirac_mode_propagator(Real k, Real mass, Real horizon) {
    const Real energy = std::hypot(k, mass);
    if (energy == 0) return identity2();
    const Real phase = energy * horizon;
    const Matrix2 generator = (k * sigma_z() + mass * sigma_x()) / energy;
    return std::cos(phase) * identity2() + Complex(0, std::sin(phase)) * generator;
}

SpinorField flat_dirac_exact(const SpinorField& psi0, Real mass, Real horizon) {
    const Grid& g = psi0.grid;
    const int n = g.n_sites;
    Eigen::FFT<Real> fft;
    ComplexVector up_hat(n), down_hat(n);
    fft.fwd(up_hat, psi0.up);
    fft.fwd(down_hat, psi0.down);

    for (int m = 0; m < n; ++m) {
        const int wave = (2 * m < n) ? m : m - n;
        const Real k = 2 * std::numbers::pi * wave / g.length();
        const Matrix2 prop = dirac_mode_propagator(k, mass, horizon);
        const Complex u = up_hat[m];
        const Complex d = down_hat[m];
        up_hat[m] = prop(0, 0) * u + prop(0, 1) * d;
        down_hat[m] = prop(1, 0) * u + prop(1, 1) * d;
    }

    SpinorField out(g);
    fft.inv(out.up, up_hat);
    fft.inv(out.down, down_hat);
    return out;
}

SpinorField conformal_oracle(const SpinorField& psi_tilde0, const RealVector& omega0, const RealVector& omega_t,
                             Real horizon) {
    const int n = psi_tilde0.size();
    if (omega0.size() != n || omega_t.size() != n) {
        throw std::invalid_argument("conformal_oracle: weights need one value per site");
    }
    if (omega_t.minCoeff() < kOmegaFloor || omega0.minCoeff() < kOmegaFloor) {
        throw PreconditionError("conformal_oracle: conformal weight below floor 1e-6");
    }
    SpinorField weighted(psi_tilde0.grid, omega0.cwiseProduct(psi_tilde0.up), omega0.cwiseProduct(psi_tilde0.down));
    SpinorField moved = transport_exact(weighted, horizon);
    moved.up = moved.up.cwiseQuotient(omega_t.cast<Complex>());
    moved.down = moved.down.cwiseQuotient(omega_t.cast<Complex>());
    return moved;
}

CnResult cn_evolve(const SpinorField& psi0, const ConformalField& cf, Real mass, Real horizon, int substeps,
                   Real t_start) {
    if (substeps <= 0) throw std::invalid_argument("cn_evolve: substeps must be positive");
    if (!(horizon >= 0)) throw std::invalid_argument("cn_evolve: horizon must be nonnegative");
    const Grid& g = psi0.grid;
    const int n = g.n_sites;
    const int dim = 2 * n;
    const Real h = horizon / substeps;
    const Real inv2dx = 1 / (2 * g.dx);

    CnResult result;
    result.weighted_norm_initial = weighted_norm(psi0, cf, t_start);

    using SpMat = Eigen::SparseMatrix<Complex>;
    std::vector<Eigen::Triplet<Complex>> entries;
    entries.reserve(static_cast<std::size_t>(dim) * 4);

    // Generator L(t) with unknowns interleaved as (up_j, down_j).
    auto generator = [&](Real t) {
        entries.clear();
        for (int j = 0; j < n; ++j) {
            const Real x = g.position(j);
            const Real omega = cf.value(t, x);
            if (!(omega > 0)) throw PreconditionError("nonpositive conformal factor in cn_evolve");
            const Real gx = cf.dx(t, x) / (2 * omega);
            const Real gt = cf.dt(t, x) / (2 * omega);
            if (std::abs(2 * gx) * g.dx > 0.5 || std::abs(2 * gt) * h > 0.5) result.under_resolved = true;
            const int up = 2 * j, dn = 2 * j + 1;
            const int up_next = 2 * g.wrap(j + 1), up_prev = 2 * g.wrap(j - 1);
            entries.emplace_back(up, up_next, inv2dx);
            entries.emplace_back(up, up_prev, -inv2dx);
            entries.emplace_back(up, up, gx - gt);
            entries.emplace_back(dn, up_next + 1, -inv2dx);
            entries.emplace_back(dn, up_prev + 1, inv2dx);
            entries.emplace_back(dn, dn, -gx - gt);
            if (mass != 0) {
                entries.emplace_back(up, dn, Complex(0, mass * omega));
                entries.emplace_back(dn, up, Complex(0, mass * omega));
            }
        }
        SpMat op(dim, dim);
        op.setFromTriplets(entries.begin(), entries.end());
        return op;
    };

    SpMat identity(dim, dim);
    identity.setIdentity();

    ComplexVector z(dim);
    for (int j = 0; j < n; ++j) {
        z[2 * j] = psi0.up[j];
        z[2 * j + 1] = psi0.down[j];
    }

    Eigen::SparseLU<SpMat> solver;
    SpMat forward;
    bool factored = false;
    const bool frozen = cf.is_static();
    for (int s = 0; s < substeps; ++s) {
        if (!factored || !frozen) {
            const SpMat op = generator(t_start + (s + 0.5) * h);
            forward = identity + (0.5 * h) * op;
            SpMat backward = identity - (0.5 * h) * op;
            backward.makeCompressed();
            if (!factored) solver.analyzePattern(backward);
            solver.factorize(backward);
            if (solver.info() != Eigen::Success) {
                throw std::runtime_error("cn_evolve: linear solve failed: " + solver.lastErrorMessage());
            }
            factored = true;
        }
        const ComplexVector rhs = forward * z;
        z = solver.solve(rhs);
        if (solver.info() != Eigen::Success) throw std::runtime_error("cn_evolve: linear solve failed");
    }

    result.field = SpinorField(g);
    for (int j = 0; j < n; ++j) {
        result.field.up[j] = z[2 * j];
        result.field.down[j] = z[2 * j + 1];
    }
    result.weighted_norm_final = weighted_norm(result.field, cf, t_start + horizon);
    return result;
}

}  // namespace cwalk
