#include "adlab/opensys.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "adlab/ode.hpp"
#include "adlab/util.hpp"

namespace adlab {

void DensityMatrix::validate(double tol) const {
    require_hermitian(rho, 1e-12, "DensityMatrix");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    if (es.eigenvalues().minCoeff() < -tol)
        throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                    std::to_string(es.eigenvalues().minCoeff()));
    if (std::abs(rho.trace().real() - 1.0) > tol)
        throw std::invalid_argument("DensityMatrix: trace != 1");
}

double purity(const DensityMatrix& rho) {
    return (rho.rho * rho.rho).trace().real();
}

double von_neumann_entropy(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.rho);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double p = es.eigenvalues()[i];
        if (p < -1e-10)
            throw std::invalid_argument("von_neumann_entropy: negative eigenvalue");
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.rho - b.rho);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Matrix tensor_assemble(const Matrix& H_S, const Matrix& H_E, const Matrix& V,
                       double eps) {
    if (eps < 0.0) throw std::invalid_argument("tensor_assemble: eps < 0");
    const Eigen::Index dS = H_S.rows(), dE = H_E.rows();
    if (V.rows() != dS * dE)
        throw std::invalid_argument("tensor_assemble: V dimension mismatch");
    Matrix h = kron(H_S, identity(dE)) + kron(identity(dS), H_E) + eps * V;
    require_hermitian(h, 1e-12, "tensor_assemble");
    return h;
}

Matrix BipartiteFamily::H_tot(const RealVector& x) const {
    return tensor_assemble(sys.H(x), env.H(x), V(x), eps);
}

HamiltonianFamily BipartiteFamily::total_family() const {
    HamiltonianFamily fam;
    fam.hdim = dim_total();
    fam.pdim = sys.pdim;
    fam.fd_step = sys.fd_step;
    const BipartiteFamily self = *this;
    fam.H = [self](const RealVector& x) { return self.H_tot(x); };
    return fam;
}

DensityMatrix partial_trace(const Matrix& rho_tot, int d_S, int d_E,
                            bool keep_system) {
    if (rho_tot.rows() != static_cast<Eigen::Index>(d_S) * d_E)
        throw std::invalid_argument("partial_trace: dimension mismatch");
    DensityMatrix out;
    if (keep_system) {
        out.rho = Matrix::Zero(d_S, d_S);
        for (int s = 0; s < d_S; ++s)
            for (int t = 0; t < d_S; ++t)
                for (int e = 0; e < d_E; ++e)
                    out.rho(s, t) += rho_tot(s * d_E + e, t * d_E + e);
    } else {
        out.rho = Matrix::Zero(d_E, d_E);
        for (int e = 0; e < d_E; ++e)
            for (int f = 0; f < d_E; ++f)
                for (int s = 0; s < d_S; ++s)
                    out.rho(e, f) += rho_tot(s * d_E + e, s * d_E + f);
    }
    return out;
}

namespace {

struct LabeledFrames {
    EigenFrame sys, env, tot;
};

LabeledFrames frames_at(const BipartiteFamily& fam, const RealVector& x) {
    LabeledFrames lf;
    lf.sys = eigendecompose(fam.sys.H(x), x);
    lf.env = eigendecompose(fam.env.H(x), x);
    lf.tot = eigendecompose(fam.H_tot(x), x);
    return lf;
}

// total eigenvector matching |b,x> (x) |beta,x| by max overlap
std::pair<int, double> labeled_index(const LabeledFrames& lf, int b, int beta,
                                     int d_E) {
    Vector prod = kron(lf.sys.eigenvectors.col(b).eval(),
                       lf.env.eigenvectors.col(beta).eval());
    int best = -1;
    double best_ov = -1.0;
    for (int c = 0; c < lf.tot.dim(); ++c) {
        double ov = std::abs(prod.dot(lf.tot.eigenvectors.col(c)));
        if (ov > best_ov) { best_ov = ov; best = c; }
    }
    (void)d_E;
    return {best, best_ov};
}

// labeled total eigenvector, canonical gauge
struct LabeledVector {
    Vector v;
    double eigenvalue;
    double overlap;
};

LabeledVector labeled_vector(const BipartiteFamily& fam, const RealVector& x,
                             int a, int alpha) {
    LabeledFrames lf = frames_at(fam, x);
    auto [idx, ov] = labeled_index(lf, a, alpha, fam.env.hdim);
    if (ov < 0.5)
        throw AmbiguousMatchError(ov,
                                  "eigen mixed state labeling (quasi-resonance?)");
    return {lf.tot.eigenvectors.col(idx), lf.tot.eigenvalues[idx], ov};
}

}  // namespace

EigenMixedState eigen_mixed_state(const BipartiteFamily& fam, int a, int alpha,
                                  const RealVector& x) {
    LabeledFrames lf = frames_at(fam, x);
    auto [idx, ov] = labeled_index(lf, a, alpha, fam.env.hdim);
    if (ov < 0.5)
        throw AmbiguousMatchError(ov, "eigen_mixed_state labeling");
    EigenMixedState ems;
    ems.total_eigenvector = lf.tot.eigenvectors.col(idx);
    ems.total_eigenvalue = lf.tot.eigenvalues[idx];
    ems.label_overlap = ov;
    Matrix proj = ems.total_eigenvector * ems.total_eigenvector.adjoint();
    ems.rho = partial_trace(proj, fam.sys.hdim, fam.env.hdim, true);
    // no-quasi-resonance gap |mu_b + nu_beta - mu_c - nu_alpha|
    double mg = std::numeric_limits<double>::infinity();
    for (int b = 0; b < fam.sys.hdim; ++b)
        for (int beta = 0; beta < fam.env.hdim; ++beta)
            for (int c = 0; c < fam.sys.hdim; ++c) {
                if (b == c && beta == alpha) continue;
                double g = std::abs(lf.sys.eigenvalues[b] + lf.env.eigenvalues[beta] -
                                    lf.sys.eigenvalues[c] - lf.env.eigenvalues[alpha]);
                mg = std::min(mg, g);
            }
    ems.min_resonance_gap = mg;
    ems.quasi_resonant = mg < 10.0 * fam.eps;
    return ems;
}

namespace {

// central finite difference of the labeled canonical-gauge eigenvector
std::vector<Vector> dk_fd(const BipartiteFamily& fam, const RealVector& x, int a,
                          int alpha) {
    double h = fam.sys.fd_step;
    std::vector<Vector> dk(fam.sys.pdim);
    for (int i = 0; i < fam.sys.pdim; ++i) {
        RealVector xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        LabeledVector kp = labeled_vector(fam, xp, a, alpha);
        LabeledVector km = labeled_vector(fam, xm, a, alpha);
        dk[i] = (kp.v - km.v) / (2.0 * h);
    }
    return dk;
}

// solve X rho = M on the support of rho; returns residual
Matrix solve_on_support(const Matrix& M, const Matrix& rho, double* residual,
                        int* rank, bool* pseudo) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
    Matrix pinv = Matrix::Zero(rho.rows(), rho.cols());
    int r = 0;
    for (Eigen::Index b = 0; b < es.eigenvalues().size(); ++b) {
        double p = es.eigenvalues()[b];
        if (p > 1e-12) {
            pinv += (1.0 / p) * es.eigenvectors().col(b) *
                    es.eigenvectors().col(b).adjoint();
            ++r;
        }
    }
    Matrix X = M * pinv;
    if (residual) *residual = (X * rho - M).norm();
    if (rank) *rank = r;
    if (pseudo) *pseudo = (r < rho.rows());
    return X;
}

}  // namespace

OperatorConnection operator_connection(const BipartiteFamily& fam, int a, int alpha,
                                       const RealVector& x,
                                       ConnectionFlavor flavor) {
    const int dS = fam.sys.hdim, dE = fam.env.hdim;
    EigenMixedState ems = eigen_mixed_state(fam, a, alpha, x);
    const Vector& k = ems.total_eigenvector;
    auto dk = dk_fd(fam, x, a, alpha);

    Matrix Palpha = Matrix::Zero(dS * dE, dS * dE);
    if (flavor == ConnectionFlavor::CalA) {
        // P_{. alpha} = sum_b |b,alpha,x><b,alpha,x|
        for (int b = 0; b < dS; ++b) {
            LabeledVector lb = labeled_vector(fam, x, b, alpha);
            Palpha += lb.v * lb.v.adjoint();
        }
    }

    OperatorConnection oc;
    oc.point = x;
    oc.flavor = flavor;
    oc.comp.resize(fam.sys.pdim);
    double worst_res = 0.0;
    for (int i = 0; i < fam.sys.pdim; ++i) {
        Matrix T = dk[i] * k.adjoint();
        if (flavor == ConnectionFlavor::CalA) T = Palpha * T;
        Matrix M = Complex(0, -1) * partial_trace(T, dS, dE, true).rho;
        double res = 0.0;
        oc.comp[i] = solve_on_support(M, ems.rho.rho, &res, &oc.support_rank,
                                      &oc.pseudo_solution);
        worst_res = std::max(worst_res, res);
    }
    oc.residual = worst_res;
    return oc;
}

RealVector scalar_connection(const BipartiteFamily& fam, int a, int alpha,
                             const RealVector& x) {
    LabeledVector k0 = labeled_vector(fam, x, a, alpha);
    auto dk = dk_fd(fam, x, a, alpha);
    RealVector A(fam.sys.pdim);
    for (int i = 0; i < fam.sys.pdim; ++i)
        A[i] = (Complex(0, -1) * k0.v.dot(dk[i])).real();
    return A;
}

AdiabaticFields adiabatic_fields(const BipartiteFamily& fam, int a, int alpha,
                                 const RealVector& x) {
    if (fam.sys.pdim != 3)
        throw std::invalid_argument("adiabatic_fields: needs 3 parameters");
    double h = fam.sys.fd_step;
    auto conn = [&](const RealVector& y, ConnectionFlavor fl) {
        return operator_connection(fam, a, alpha, y, fl).comp;
    };
    auto fields_of = [&](ConnectionFlavor fl, const std::vector<Matrix>& at_x) {
        // derivatives d_i X_j by central differences
        std::vector<std::vector<Matrix>> d(3);
        for (int i = 0; i < 3; ++i) {
            RealVector xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            auto cp = conn(xp, fl);
            auto cm = conn(xm, fl);
            d[i].resize(3);
            for (int j = 0; j < 3; ++j) d[i][j] = (cp[j] - cm[j]) / (2.0 * h);
        }
        std::vector<Matrix> F(3);
        for (int kk = 0; kk < 3; ++kk) {
            int i = (kk + 1) % 3, j = (kk + 2) % 3;
            F[kk] = d[i][j] - d[j][i] +
                    Complex(0, 1) * (at_x[i] * at_x[j] - at_x[j] * at_x[i]);
        }
        return F;
    };
    auto frak = conn(x, ConnectionFlavor::FrakA);
    auto cal = conn(x, ConnectionFlavor::CalA);
    AdiabaticFields out;
    out.B = fields_of(ConnectionFlavor::FrakA, frak);
    auto curlcal = fields_of(ConnectionFlavor::CalA, cal);
    out.F.resize(3);
    for (int kk = 0; kk < 3; ++kk) out.F[kk] = curlcal[kk] - out.B[kk];

    EigenMixedState ems = eigen_mixed_state(fam, a, alpha, x);
    out.meanB.resize(3);
    out.meanF.resize(3);
    for (int kk = 0; kk < 3; ++kk) {
        Complex mb = (ems.rho.rho * out.B[kk]).trace();
        Complex mf = (ems.rho.rho * out.F[kk]).trace();
        out.meanB[kk] = mb.real();
        out.meanF[kk] = mf.real();
        out.max_imag = std::max({out.max_imag, std::abs(mb.imag()),
                                 std::abs(mf.imag())});
    }
    return out;
}

WeakTransportResult weak_adiabatic_propagate(const BipartiteFamily& fam,
                                             const ParameterPath& path, int a,
                                             int alpha) {
    const int dS = fam.sys.hdim;
    const std::size_t n = path.size();
    WeakTransportResult res;
    res.times = path.times;

    std::vector<Matrix> Eops(n), Gops(n);
    std::vector<DensityMatrix> rho_eps(n);
    for (std::size_t k = 0; k < n; ++k) {
        const RealVector& x = path.points[k];
        EigenMixedState ems = eigen_mixed_state(fam, a, alpha, x);
        if (ems.quasi_resonant && res.warnings.empty())
            res.warnings = "quasi-resonance gap " +
                           std::to_string(ems.min_resonance_gap) + " < 10 eps";
        rho_eps[k] = ems.rho;
        // E^eps = sum_b lambda^eps_{b alpha} |b,x><b,x|
        EigenFrame fs = eigendecompose(fam.sys.H(x), x);
        Matrix E = Matrix::Zero(dS, dS);
        for (int b = 0; b < dS; ++b) {
            LabeledVector lb = labeled_vector(fam, x, b, alpha);
            E += lb.eigenvalue * fs.eigenvectors.col(b) *
                 fs.eigenvectors.col(b).adjoint();
        }
        Eops[k] = E;
        OperatorConnection oc =
            operator_connection(fam, a, alpha, x, ConnectionFlavor::CalA);
        RealVector xdot = path.velocity_sample(k);
        Matrix G = Matrix::Zero(dS, dS);
        for (int i = 0; i < fam.sys.pdim; ++i) G += xdot[i] * oc.comp[i];
        res.antiherm_residual =
            std::max(res.antiherm_residual, 0.5 * (G - Matrix(G.adjoint())).norm());
        Gops[k] = 0.5 * (G + Matrix(G.adjoint()));  // unitarity of U_A
    }

    auto interp = [&](const std::vector<Matrix>& ops, double t) -> Matrix {
        if (t <= path.times.front()) return ops.front();
        if (t >= path.times.back()) return ops.back();
        std::size_t lo = 0, hi = n - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            if (path.times[mid] <= t) lo = mid; else hi = mid;
        }
        double w = (t - path.times[lo]) / (path.times[lo + 1] - path.times[lo]);
        return (1.0 - w) * ops[lo] + w * ops[lo + 1];
    };

    // y = [vec U_E ; vec U_A]
    OdeRhs rhs = [&](double t, const Vector& y, Vector& dy) {
        Eigen::Map<const Matrix> UE(y.data(), dS, dS);
        Eigen::Map<const Matrix> UA(y.data() + dS * dS, dS, dS);
        Matrix dUE = Complex(0, -1) * (interp(Eops, t) * UE);
        Matrix dUA = Complex(0, -1) * (UA * interp(Gops, t));
        dy.resize(2 * dS * dS);
        dy.head(dS * dS) = Eigen::Map<Vector>(dUE.data(), dS * dS);
        dy.tail(dS * dS) = Eigen::Map<Vector>(dUA.data(), dS * dS);
    };
    Vector y0(2 * dS * dS);
    Matrix id = Matrix::Identity(dS, dS);
    y0.head(dS * dS) = Eigen::Map<Vector>(id.data(), dS * dS);
    y0.tail(dS * dS) = y0.head(dS * dS);
    OdeOptions opts;
    opts.rtol = 1e-10;
    opts.atol = 1e-12;
    auto ys = ode_integrate_at(rhs, y0, path.times, opts);

    res.rho.resize(n);
    res.min_eigenvalue = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        Eigen::Map<const Matrix> UE(ys[k].data(), dS, dS);
        Eigen::Map<const Matrix> UA(ys[k].data() + dS * dS, dS, dS);
        Matrix U = UE * UA;
        res.rho[k].rho = U * rho_eps[k].rho * U.adjoint();
        res.trace_drift = std::max(
            res.trace_drift, std::abs(res.rho[k].rho.trace().real() - 1.0));
        Eigen::SelfAdjointEigenSolver<Matrix> es(res.rho[k].rho);
        res.min_eigenvalue = std::min(res.min_eigenvalue,
                                      es.eigenvalues().minCoeff());
    }
    return res;
}

}  // namespace adlab
