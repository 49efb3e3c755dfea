#include "adlab/models.hpp"

#include <cmath>
#include <random>

namespace adlab {

HamiltonianFamily conical_model() {
    HamiltonianFamily fam;
    fam.hdim = 2;
    fam.pdim = 2;
    fam.H = [](const RealVector& x) {
        Matrix h(2, 2);
        h << 0.0, Complex(x[0], -x[1]), Complex(x[0], x[1]), 0.0;
        return h;
    };
    fam.dH_analytic = [](const RealVector&, int dir) {
        return dir == 0 ? pauli(1) : pauli(2);
    };
    return fam;
}

HamiltonianFamily spin_monopole_model(double sign) {
    HamiltonianFamily fam;
    fam.hdim = 2;
    fam.pdim = 3;
    fam.H = [sign](const RealVector& x) {
        Matrix h = Matrix::Zero(2, 2);
        for (int i = 0; i < 3; ++i) h += sign * x[i] * pauli(i + 1);
        return h;
    };
    fam.dH_analytic = [sign](const RealVector&, int dir) {
        return Matrix(sign * pauli(dir + 1));
    };
    return fam;
}

HamiltonianFamily two_monopole_model(const RealVector& c1, const RealVector& c2,
                                     double coupling) {
    HamiltonianFamily fam;
    fam.hdim = 4;
    fam.pdim = 3;
    Matrix mix = Matrix::Zero(4, 4);
    mix(0, 2) = Complex(1.0, 0.3);
    mix(1, 3) = Complex(0.7, -0.2);
    mix(0, 3) = Complex(0.2, 0.1);
    mix += Matrix(mix.adjoint());
    fam.H = [c1, c2, coupling, mix](const RealVector& x) {
        Matrix h = Matrix::Zero(4, 4);
        for (int i = 0; i < 3; ++i) {
            h.block(0, 0, 2, 2) += (x[i] - c1[i]) * pauli(i + 1);
            h.block(2, 2, 2, 2) += (x[i] - c2[i]) * pauli(i + 1);
        }
        // constant energy offset separates the two lowest bands from the rest
        h += coupling * mix;
        return h;
    };
    return fam;
}

Matrix random_hermitian(int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = Complex(g(rng), g(rng));
    return 0.5 * (m + Matrix(m.adjoint()));
}

HamiltonianFamily random_smooth_model(int d, int n, std::uint64_t seed) {
    HamiltonianFamily fam;
    fam.hdim = d;
    fam.pdim = n;
    Matrix h0 = random_hermitian(d, seed);
    std::vector<Matrix> hs, hc;
    for (int i = 0; i < n; ++i) {
        hs.push_back(0.5 * random_hermitian(d, seed + 101 * (i + 1)));
        hc.push_back(0.5 * random_hermitian(d, seed + 211 * (i + 1)));
    }
    fam.H = [h0, hs, hc, n](const RealVector& x) {
        Matrix h = h0;
        for (int i = 0; i < n; ++i)
            h += std::sin(x[i]) * hs[i] + std::cos(x[i]) * hc[i];
        return h;
    };
    fam.dH_analytic = [hs, hc](const RealVector& x, int dir) {
        return Matrix(std::cos(x[dir]) * hs[dir] - std::sin(x[dir]) * hc[dir]);
    };
    return fam;
}

ParameterPath circle_path(double r, double omega, double T, std::size_t n,
                          double theta0) {
    auto pos = [r, omega, theta0](double t) {
        RealVector x(2);
        x << r * std::cos(theta0 + omega * t), r * std::sin(theta0 + omega * t);
        return x;
    };
    auto vel = [r, omega, theta0](double t) {
        RealVector v(2);
        v << -r * omega * std::sin(theta0 + omega * t),
             r * omega * std::cos(theta0 + omega * t);
        return v;
    };
    return sample_path(pos, 0.0, T, n, vel);
}

}  // namespace adlab
