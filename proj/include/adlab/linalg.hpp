#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace adlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex IM{0.0, 1.0};
inline constexpr double PI = 3.14159265358979323846;

// max |M - M^dag| relative to max |entry| (0 for the zero matrix)
inline double hermiticity_defect(const Matrix& m) {
    double scale = m.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

inline void require_hermitian(const Matrix& m, double tol = 1e-12,
                              const std::string& what = "operator") {
    if (m.rows() != m.cols())
        throw std::invalid_argument(what + ": matrix not square");
    if (!m.allFinite())
        throw std::invalid_argument(what + ": non-finite entries");
    double d = hermiticity_defect(m);
    if (d > tol)
        throw std::invalid_argument(what + ": not Hermitian, max asymmetry " +
                                    std::to_string(d));
}

inline Matrix pauli(int i) {
    Matrix s(2, 2);
    switch (i) {
        case 1: s << 0, 1, 1, 0; break;
        case 2: s << 0, Complex(0, -1), Complex(0, 1), 0; break;
        case 3: s << 1, 0, 0, -1; break;
        default: throw std::invalid_argument("pauli index must be 1,2,3");
    }
    return s;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// wrap to (-pi, pi]
inline double wrap_angle(double x) {
    double y = std::remainder(x, 2.0 * PI);
    if (y <= -PI) y += 2.0 * PI;
    return y;
}

inline Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

}  // namespace adlab
