#include "adlab/koopman.hpp"

#include <cmath>

#include "adlab/ode.hpp"

namespace adlab {

namespace {

bool is_pow2(int m) { return m > 0 && (m & (m - 1)) == 0; }

// iterative radix-2 FFT, forward: F_k = sum_j f_j e^{-2 pi i jk / m}
void fft_pow2(std::vector<Complex>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * PI / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        Complex wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                Complex u = a[i + j], v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& z : a) z /= static_cast<double>(n);
}

std::vector<Complex> dft(const Vector& f) {
    const int m = static_cast<int>(f.size());
    std::vector<Complex> F(m);
    if (is_pow2(m)) {
        for (int j = 0; j < m; ++j) F[j] = f[j];
        fft_pow2(F, false);
        return F;
    }
    for (int k = 0; k < m; ++k) {
        Complex acc = 0.0;
        for (int j = 0; j < m; ++j)
            acc += f[j] * std::exp(Complex(0, -2.0 * PI * j * k / m));
        F[k] = acc;
    }
    return F;
}

Vector idft(std::vector<Complex> F) {
    const int m = static_cast<int>(F.size());
    Vector f(m);
    if (is_pow2(m)) {
        fft_pow2(F, true);
        for (int j = 0; j < m; ++j) f[j] = F[j];
        return f;
    }
    for (int j = 0; j < m; ++j) {
        Complex acc = 0.0;
        for (int k = 0; k < m; ++k)
            acc += F[k] * std::exp(Complex(0, 2.0 * PI * j * k / m));
        f[j] = acc / static_cast<double>(m);
    }
    return f;
}

double freq_of(int k, int m) {
    return (k <= m / 2) ? k : k - m;  // caller zeroes the Nyquist mode
}

}  // namespace

RealMatrix LiouvilleOperator::matrix() const {
    const int m = grid.m;
    if (m % 2 != 0)
        throw std::invalid_argument("LiouvilleOperator: even grid size required");
    RealMatrix D = RealMatrix::Zero(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            double d = 0.5 * (grid.theta(i) - grid.theta(j));
            D(i, j) = omega * 0.5 * (((i - j) % 2 == 0) ? 1.0 : -1.0) / std::tan(d);
        }
    return D;
}

Vector LiouvilleOperator::apply(const Vector& f) const {
    const int m = grid.m;
    auto F = dft(f);
    for (int k = 0; k < m; ++k) {
        if (m % 2 == 0 && k == m / 2) {
            F[k] = 0.0;  // drop the unresolved Nyquist mode in the derivative
            continue;
        }
        F[k] *= Complex(0, omega * freq_of(k, m));
    }
    return idft(std::move(F));
}

LiouvilleOperator liouville_operator(const PeriodicGrid& grid, double omega) {
    return LiouvilleOperator{grid, omega};
}

SKTrajectory sk_propagate(const std::function<Matrix(double)>& H_of_theta,
                          const LiouvilleOperator& L, const SKState& psi0,
                          const std::vector<double>& times, double tol) {
    const int d = static_cast<int>(psi0.values.rows());
    const int m = static_cast<int>(psi0.values.cols());
    if (m != L.grid.m)
        throw std::invalid_argument("sk_propagate: grid size mismatch");
    std::vector<Matrix> Hj(m);
    for (int j = 0; j < m; ++j) Hj[j] = H_of_theta(L.grid.theta(j));

    OdeRhs rhs = [&](double, const Vector& y, Vector& dy) {
        Eigen::Map<const Matrix> Psi(y.data(), d, m);
        dy.resize(d * m);
        Eigen::Map<Matrix> dPsi(dy.data(), d, m);
        for (int j = 0; j < m; ++j)
            dPsi.col(j) = Complex(0, -1) * (Hj[j] * Psi.col(j));
        for (int r = 0; r < d; ++r) {
            Vector row = Psi.row(r).transpose();
            dPsi.row(r) -= L.apply(row).transpose();
        }
    };

    Vector y0(d * m);
    Eigen::Map<Matrix>(y0.data(), d, m) = psi0.values;
    OdeOptions opts;
    opts.rtol = tol;
    opts.atol = tol * 1e-2;
    auto ys = ode_integrate_at(rhs, y0, times, opts);

    SKTrajectory traj;
    traj.times = times;
    traj.states.resize(times.size());
    double n0 = psi0.mu_norm(L.grid);
    for (std::size_t k = 0; k < times.size(); ++k) {
        traj.states[k].values = Eigen::Map<const Matrix>(ys[k].data(), d, m);
        double nk = traj.states[k].mu_norm(L.grid);
        traj.norm_drift = std::max(traj.norm_drift, std::abs(nk - n0) / n0);
    }
    return traj;
}

Vector sk_evaluate(const SKState& state, const PeriodicGrid& grid, double theta) {
    const int d = static_cast<int>(state.values.rows());
    const int m = grid.m;
    Vector out = Vector::Zero(d);
    for (int r = 0; r < d; ++r) {
        Vector row = state.values.row(r).transpose();
        auto F = dft(row);
        Complex acc = 0.0;
        for (int k = 0; k < m; ++k) {
            if (m % 2 == 0 && k == m / 2) {
                // Nyquist mode interpolates as a pure cosine
                acc += F[k] * std::cos(0.5 * m * theta);
                continue;
            }
            acc += F[k] * std::exp(Complex(0, freq_of(k, m) * theta));
        }
        out[r] = acc / static_cast<double>(m);
    }
    return out;
}

double correspondence_check(const SKTrajectory& sk, const PeriodicGrid& grid,
                            const std::function<double(double)>& theta_of_t,
                            const std::vector<Vector>& psi_ref) {
    if (psi_ref.size() != sk.times.size())
        throw std::invalid_argument("correspondence_check: trajectory size mismatch");
    double worst = 0.0;
    for (std::size_t k = 0; k < sk.times.size(); ++k) {
        Vector v = sk_evaluate(sk.states[k], grid, theta_of_t(sk.times[k]));
        double nv = v.norm();
        if (nv == 0.0) return std::numeric_limits<double>::infinity();
        Vector r = psi_ref[k] / psi_ref[k].norm();
        worst = std::max(worst, (v / nv - r).norm());
    }
    return worst;
}

SKState sk_bump_state(const Vector& psi0, const PeriodicGrid& grid, double theta0,
                      double width) {
    const int m = grid.m;
    double kappa = 1.0 / (width * width);
    SKState s;
    s.values.resize(psi0.size(), m);
    for (int j = 0; j < m; ++j) {
        double prof = std::exp(kappa * (std::cos(grid.theta(j) - theta0) - 1.0));
        s.values.col(j) = psi0 * prof;
    }
    return s;
}

}  // namespace adlab
