#pragma once

#include <functional>
#include <vector>

#include "adlab/linalg.hpp"

namespace adlab {

// Uniform periodic grid on [0, 2 pi).
struct PeriodicGrid {
    int m = 0;
    double theta(int j) const { return 2.0 * PI * j / m; }
    double weight() const { return 2.0 * PI / m; }  // quadrature weight d mu
};

// Generator of the classical flow on the circle, L = omega d/dtheta, applied
// spectrally.  The dense matrix form is available for operator-level checks.
struct LiouvilleOperator {
    PeriodicGrid grid;
    double omega = 0.0;

    RealMatrix matrix() const;            // m x m spectral differentiation * omega
    Vector apply(const Vector& f) const;  // same action via FFT
};

LiouvilleOperator liouville_operator(const PeriodicGrid& grid, double omega);

// state on H (x) grid: d x m complex array
struct SKState {
    Matrix values;  // rows: system components, cols: grid nodes

    double mu_norm(const PeriodicGrid& g) const {
        return std::sqrt(values.squaredNorm() * g.weight());
    }
};

struct SKTrajectory {
    std::vector<double> times;
    std::vector<SKState> states;
    double norm_drift = 0.0;  // max relative mu-norm drift
};

// i d_t Psi = (H - i L) Psi with H block-diagonal over grid nodes.
SKTrajectory sk_propagate(const std::function<Matrix(double)>& H_of_theta,
                          const LiouvilleOperator& L, const SKState& psi0,
                          const std::vector<double>& times, double tol = 1e-10);

// band-limited interpolation of the grid data at angle theta
Vector sk_evaluate(const SKState& state, const PeriodicGrid& grid, double theta);

// max_t || <theta(t)|Psi(t)> / ||.|| - psi_ref(t) / ||.|| ||
double correspondence_check(const SKTrajectory& sk, const PeriodicGrid& grid,
                            const std::function<double(double)>& theta_of_t,
                            const std::vector<Vector>& psi_ref);

// smooth positive bump exp(kappa (cos(theta - theta0) - 1))
SKState sk_bump_state(const Vector& psi0, const PeriodicGrid& grid, double theta0,
                      double width);

}  // namespace adlab
