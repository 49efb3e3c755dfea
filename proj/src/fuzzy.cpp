#include "adlab/fuzzy.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "adlab/ode.hpp"
#include "adlab/util.hpp"

namespace adlab {

FockSpace fock_operators(int N) {
    if (N < 2) throw std::invalid_argument("fock_operators: N >= 2 required");
    FockSpace f;
    f.N = N;
    f.a = Matrix::Zero(N, N);
    for (int n = 1; n < N; ++n) f.a(n - 1, n) = std::sqrt(static_cast<double>(n));
    f.adag = f.a.adjoint();
    return f;
}

Vector coherent_state(Complex alpha, int N, double* tail_mass) {
    if (std::norm(alpha) > N / 4.0)
        throw std::invalid_argument("coherent_state: |alpha|^2 > N/4 tail guard");
    Vector v(N);
    // c_n = alpha^n / sqrt(n!) with the e^{-|a|^2/2} prefactor
    Complex c = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n < N; ++n) {
        v[n] = c;
        c *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    double kept = v.squaredNorm();
    if (tail_mass) *tail_mass = std::max(0.0, 1.0 - kept);
    v /= std::sqrt(kept);
    return v;
}

Matrix FuzzyGeometry::dirac(const RealVector& x) const {
    const Eigen::Index m = X[0].rows();
    Matrix D = Matrix::Zero(2 * m, 2 * m);
    for (int i = 0; i < 3; ++i)
        D += kron(pauli(i + 1), Matrix(X[i] - x[i] * Matrix::Identity(m, m)));
    return D;
}

FuzzyGeometry plane_geometry(int N) {
    FockSpace f = fock_operators(N);
    FuzzyGeometry g;
    g.fock_dim = N;
    g.kind = "plane";
    g.X = {0.5 * (f.a + f.adag), (f.a - f.adag) / Complex(0, 2),
           Matrix::Zero(N, N)};
    return g;
}

WormholeModel wormhole_observables(int N) {
    WormholeModel w;
    w.N = N;
    w.fock = fock_operators(N);
    w.X = 0.5 * (w.fock.a + w.fock.adag);
    w.Y = (w.fock.a - w.fock.adag) / Complex(0, 2);
    w.reZ = Matrix::Zero(N, N);
    for (int n = 1; n < N; ++n)
        w.reZ(n, n) = std::log(std::sqrt(static_cast<double>(n)) +
                               std::sqrt(static_cast<double>(n - 1)));
    w.imZ = Matrix::Zero(N, N);
    w.imZ(0, 0) = -PI / 2.0;
    return w;
}

Complex WormholeModel::z_of(Complex alpha) const {
    double r = std::abs(alpha);
    if (r >= 1.0) return Complex(std::log(r + std::sqrt(r * r - 1.0)), 0.0);
    // z = ln(r - i sqrt(1 - r^2)): |.| = 1, so Re z = 0 and Im z < 0
    return Complex(0.0, -std::acos(r));
}

namespace {

Matrix spin_fock(const Matrix& s, const Matrix& f) { return kron(s, f); }

}  // namespace

Matrix WormholeModel::dirac_sheet(Complex alpha, int sign) const {
    double x = alpha.real(), y = alpha.imag();
    double zr = z_of(alpha).real();
    Matrix D = spin_fock(pauli(1), X - x * Matrix::Identity(N, N)) +
               spin_fock(pauli(2), Y - y * Matrix::Identity(N, N)) +
               static_cast<double>(sign) *
                   spin_fock(pauli(3), reZ - zr * Matrix::Identity(N, N));
    return D;
}

Matrix WormholeModel::dirac_single(Complex alpha, bool z_real_only) const {
    Complex z = z_of(alpha);
    if (z_real_only) z = Complex(z.real(), 0.0);
    Matrix D = dirac_sheet(alpha, +1);
    Matrix K = imZ - z.imag() * Matrix::Identity(N, N);
    D += Complex(0, 1) * kron(Matrix::Identity(2, 2), K);
    return D;
}

Matrix WormholeModel::dirac_double(Complex alpha) const {
    double x = alpha.real(), y = alpha.imag();
    Complex z = z_of(alpha);
    Matrix I2 = Matrix::Identity(2, 2);
    Matrix IN = Matrix::Identity(N, N);
    Matrix K = imZ - z.imag() * IN;
    // spin (x) sheet (x) Fock
    Matrix D = kron(pauli(1), kron(I2, Matrix(X - x * IN))) +
               kron(pauli(2), kron(I2, Matrix(Y - y * IN))) +
               kron(pauli(3), kron(pauli(3), Matrix(reZ - z.real() * IN))) +
               kron(I2, kron(Matrix(-pauli(2)), K));
    return D;
}

FuzzyGeometry WormholeModel::double_sheet_geometry() const {
    Matrix I2 = Matrix::Identity(2, 2);
    FuzzyGeometry g;
    g.fock_dim = N;
    g.kind = "wormhole-double-sheet";
    g.X = {kron(I2, X), kron(I2, Y), kron(pauli(3), reZ)};
    return g;
}

QuasiStates quasi_coherent_solve(const Matrix& D, int count, int fock_dim) {
    require_hermitian(D, 1e-10, "quasi_coherent_solve");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (D + D.adjoint()));
    const Eigen::Index n = D.rows();
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto absl = [&](Eigen::Index i) { return std::abs(es.eigenvalues()[i]); };
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index p, Eigen::Index q) { return absl(p) < absl(q); });

    auto tail_of = [&](const Vector& v) {
        int tail = std::max(1, fock_dim / 8);
        double m = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (static_cast<int>(i) % fock_dim >= fock_dim - tail)
                m += std::norm(v[i]);
        return m;
    };

    // within near-degenerate |lambda| groups, order by truncation tail so the
    // spurious corner modes of the truncated ladder never shadow a real one
    double scale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1.0);
    std::size_t take = std::min<std::size_t>(std::max(count * 3, 8), n);
    std::vector<Eigen::Index> head(order.begin(), order.begin() + take);
    std::stable_sort(head.begin(), head.end(), [&](Eigen::Index p, Eigen::Index q) {
        if (std::abs(absl(p) - absl(q)) > 1e-8 * scale) return absl(p) < absl(q);
        return tail_of(es.eigenvectors().col(p)) < tail_of(es.eigenvectors().col(q));
    });

    QuasiStates out;
    for (int k = 0; k < count && k < static_cast<int>(head.size()); ++k) {
        Eigen::Index i = head[k];
        out.lambda.push_back(es.eigenvalues()[i]);
        out.state.push_back(es.eigenvectors().col(i));
        out.tail_mass.push_back(tail_of(es.eigenvectors().col(i)));
        double res = (D * es.eigenvectors().col(i) -
                      es.eigenvalues()[i] * es.eigenvectors().col(i))
                         .norm();
        out.residual = std::max(out.residual, res);
    }
    return out;
}

namespace {

double expect(const Vector& v, const Matrix& op) {
    return std::real(Complex(v.dot(op * v)));
}

}  // namespace

DoubleSheetPoint solve_double_sheet(const WormholeModel& wm, Complex alpha) {
    const int N = wm.N;
    Matrix D = wm.dirac_double(alpha);
    QuasiStates qs = quasi_coherent_solve(D, 2, N);

    Matrix I2 = Matrix::Identity(2, 2);
    Matrix IN = Matrix::Identity(N, N);
    Matrix P_up = kron(I2, kron(Matrix(0.5 * (I2 + pauli(3))), IN));
    Matrix signedZ = kron(I2, kron(pauli(3), wm.reZ));
    Matrix imZ_tot = kron(I2, kron(I2, wm.imZ));

    double pu0 = expect(qs.state[0], P_up);
    double pu1 = expect(qs.state[1], P_up);
    int plus = (pu0 > pu1) ? 0 : 1;
    if (std::abs(pu0 - pu1) < 1e-10) {
        // tie-break: the state with larger signed <ReZ> is the upper one
        double z0 = expect(qs.state[0], signedZ);
        double z1 = expect(qs.state[1], signedZ);
        plus = (z0 > z1) ? 0 : 1;
    }
    int minus = 1 - plus;

    DoubleSheetPoint pt;
    pt.alpha = alpha;
    pt.lambda_plus = qs.lambda[plus];
    pt.lambda_minus = qs.lambda[minus];
    pt.state_plus = qs.state[plus];
    pt.state_minus = qs.state[minus];
    pt.p_up_plus = expect(pt.state_plus, P_up);
    pt.p_up_minus = expect(pt.state_minus, P_up);
    pt.reZ_plus = expect(pt.state_plus, signedZ);
    pt.reZ_minus = expect(pt.state_minus, signedZ);
    pt.spin_plus.resize(3);
    for (int i = 0; i < 3; ++i)
        pt.spin_plus[i] =
            expect(pt.state_plus, kron(pauli(i + 1), kron(I2, IN)));
    pt.coupling = std::abs(Complex(pt.state_plus.dot(imZ_tot * pt.state_minus)));
    return pt;
}

DecayFit single_sheet_decay(const WormholeModel& wm, Complex alpha,
                            double duration, bool with_dissipator) {
    Matrix D = with_dissipator ? wm.dirac_single(alpha, /*z_real_only=*/true)
                               : wm.dirac_sheet(alpha, +1);
    Vector psi0(2 * wm.N);
    psi0.setZero();
    double tail = 0.0;
    psi0.head(wm.N) = coherent_state(alpha, wm.N, &tail);  // spin-up sheet state
    OdeRhs rhs = [&D](double, const Vector& y, Vector& dy) {
        dy.noalias() = Complex(0, -1) * (D * y);
    };
    OdeOptions opts;
    opts.rtol = 1e-10;
    opts.atol = 1e-14;
    const int samples = 33;
    std::vector<double> ts(samples), lognorm(samples);
    for (int k = 0; k < samples; ++k)
        ts[k] = duration * static_cast<double>(k) / (samples - 1);
    Vector psi = psi0;
    lognorm[0] = std::log(psi.norm());
    for (int k = 1; k < samples; ++k) {
        psi = ode_integrate(rhs, psi, ts[k - 1], ts[k], opts);
        lognorm[k] = std::log(psi.norm());
    }
    // least-squares slope of log ||psi||
    double tm = 0, lm = 0;
    for (int k = 0; k < samples; ++k) { tm += ts[k]; lm += lognorm[k]; }
    tm /= samples;
    lm /= samples;
    double num = 0, den = 0;
    for (int k = 0; k < samples; ++k) {
        num += (ts[k] - tm) * (lognorm[k] - lm);
        den += (ts[k] - tm) * (ts[k] - tm);
    }
    DecayFit fit;
    double slope = num / den;
    fit.rate = -slope;
    double ss = 0;
    for (int k = 0; k < samples; ++k) {
        double r = lognorm[k] - (lm + slope * (ts[k] - tm));
        ss += r * r;
    }
    fit.fit_residual = std::sqrt(ss / samples);
    if (fit.fit_residual > 0.02)
        throw std::runtime_error("single_sheet_decay: non-exponential norm decay, rms " +
                                 std::to_string(fit.fit_residual));
    return fit;
}

std::vector<ScanRow> surface_scan(const WormholeModel& wm,
                                  const std::vector<Complex>& alphas,
                                  int threads) {
    std::vector<ScanRow> rows(alphas.size());
    parallel_for(alphas.size(), threads, [&](std::size_t k) {
        Complex a = alphas[k];
        ScanRow& r = rows[k];
        r.re_a = a.real();
        r.im_a = a.imag();
        r.abs_a = std::abs(a);
        DoubleSheetPoint pt = solve_double_sheet(wm, a);
        r.l0_plus = pt.lambda_plus;
        r.l0_minus = pt.lambda_minus;
        r.p_up_plus = pt.p_up_plus;
        r.p_up_minus = pt.p_up_minus;
        r.rez_plus = pt.reZ_plus;
        r.rez_minus = pt.reZ_minus;
        r.sx = pt.spin_plus[0];
        r.sy = pt.spin_plus[1];
        r.sz = pt.spin_plus[2];
        r.coupling = pt.coupling;
        QuasiStates sp = quasi_coherent_solve(wm.dirac_sheet(a, +1), 1, wm.N);
        QuasiStates sm = quasi_coherent_solve(wm.dirac_sheet(a, -1), 1, wm.N);
        r.single_plus = std::abs(sp.lambda[0]);
        r.single_minus = std::abs(sm.lambda[0]);
    });
    return rows;
}

double refine_probability_crossing(const WormholeModel& wm, double lo, double hi,
                                   double tol) {
    auto f = [&](double r) {
        return solve_double_sheet(wm, Complex(r, 0.0)).p_up_plus - 0.5;
    };
    double flo = f(lo), fhi = f(hi);
    if (flo * fhi > 0.0)
        throw std::invalid_argument("refine_probability_crossing: no sign change");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (flo * fm <= 0.0) { hi = mid; fhi = fm; }
        else { lo = mid; flo = fm; }
    }
    return 0.5 * (lo + hi);
}

Vector gauge_fix_to_seed(const Vector& v, const Vector& seed) {
    Complex ov = seed.dot(v);
    if (std::abs(ov) < 1e-12)
        throw std::runtime_error("gauge_fix_to_seed: seed overlap vanished");
    return v * (std::conj(ov) / std::abs(ov));
}

InducedMetric induced_metric(
    const FuzzyGeometry& geom,
    const std::function<Vector(const RealVector&)>& state_at,
    const std::function<RealVector(const RealVector&)>& x_of_u,
    const RealVector& u0, double h) {
    const Eigen::Index m = geom.X[0].rows();
    Matrix I2 = Matrix::Identity(2, 2);
    RealVector x0 = x_of_u(u0);
    Vector v0 = state_at(u0);

    // distance-squared observable at x0
    Matrix Q = Matrix::Zero(m, m);
    for (int i = 0; i < 3; ++i) {
        Matrix d = geom.X[i] - x0[i] * Matrix::Identity(m, m);
        Q += d * d;
    }
    Matrix Qs = kron(I2, Q);
    // noncommutativity observable (1/4) [sigma_i, sigma_j] (x) [X_i, X_j]
    Matrix S = Matrix::Zero(2 * m, 2 * m);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            Matrix sij = pauli(i + 1) * pauli(j + 1) - pauli(j + 1) * pauli(i + 1);
            Matrix xij = geom.X[i] * geom.X[j] - geom.X[j] * geom.X[i];
            S += 0.25 * kron(sij, xij);
        }

    // gauge-matched derivatives along the parametrization
    std::vector<Vector> dv(2);
    for (int a = 0; a < 2; ++a) {
        RealVector up = u0, um = u0;
        up[a] += h;
        um[a] -= h;
        Vector vp = gauge_fix_to_seed(state_at(up), v0);
        Vector vm = gauge_fix_to_seed(state_at(um), v0);
        dv[a] = (vp - vm) / (2.0 * h);
    }

    InducedMetric im;
    im.gamma_dist = RealMatrix::Zero(2, 2);
    im.gamma_nc = RealMatrix::Zero(2, 2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            Complex gd = dv[a].dot(Qs * dv[b]);
            Complex gn = dv[a].dot(S * dv[b]);
            im.gamma_dist(a, b) = gd.real();
            im.gamma_nc(a, b) = gn.real();
            im.imag_residue =
                std::max({im.imag_residue, std::abs(gd.imag()), std::abs(gn.imag())});
        }
    im.gamma_dist = 0.5 * (im.gamma_dist + im.gamma_dist.transpose()).eval();
    im.gamma_nc = 0.5 * (im.gamma_nc + im.gamma_nc.transpose()).eval();
    im.gamma = im.gamma_dist + im.gamma_nc;
    return im;
}

RealVector shift_vector(const std::function<Vector(const RealVector&)>& state_at,
                        const RealVector& u0, double h) {
    Vector v0 = state_at(u0);
    RealVector A(u0.size());
    for (Eigen::Index a = 0; a < u0.size(); ++a) {
        RealVector up = u0, um = u0;
        up[a] += h;
        um[a] -= h;
        Complex der = v0.dot((state_at(up) - state_at(um)) / (2.0 * h));
        A[a] = (Complex(0, -1) * der).real();
    }
    return A;
}

LineElement emergent_line_element(const RealMatrix& gamma, const RealVector& A) {
    LineElement le;
    le.g_tt = 1.0 - (A.transpose() * gamma * A)(0, 0);
    le.g_ta = -(gamma * A);
    le.g_ab = -gamma;
    return le;
}

}  // namespace adlab
