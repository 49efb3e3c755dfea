#include "adlab/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace adlab {

namespace {

void canonical_phase(Matrix& vecs) {
    for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
        Eigen::Index imax = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < vecs.rows(); ++r) {
            double m = std::abs(vecs(r, c));
            if (m > best) { best = m; imax = r; }
        }
        Complex z = vecs(imax, c);
        if (best > 0.0) vecs.col(c) *= std::conj(z) / std::abs(z);
    }
}

// Greedy max-overlap assignment of frame columns to reference bands.
std::vector<Eigen::Index> match_permutation(const EigenFrame& ref,
                                            const EigenFrame& frame,
                                            Matrix* overlaps_out) {
    const Eigen::Index n = frame.eigenvectors.cols();
    Matrix O = ref.eigenvectors.adjoint() * frame.eigenvectors;
    std::vector<Eigen::Index> perm(n, -1);
    std::vector<bool> used(n, false);
    for (Eigen::Index a = 0; a < n; ++a) {
        Eigen::Index jbest = -1;
        double best = -1.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (used[j]) continue;
            double m = std::abs(O(a, j));
            if (m > best) { best = m; jbest = j; }
        }
        if (best < 0.5)
            throw AmbiguousMatchError(best, "gauge_fix");
        perm[a] = jbest;
        used[jbest] = true;
    }
    if (overlaps_out) *overlaps_out = O;
    return perm;
}

}  // namespace

EigenFrame eigendecompose(const Matrix& H, const RealVector& point) {
    require_hermitian(H, 1e-12, "eigendecompose");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (H + H.adjoint()));
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigendecompose: solver failed");
    EigenFrame f;
    f.point = point;
    f.eigenvalues = es.eigenvalues();
    f.eigenvectors = es.eigenvectors();
    canonical_phase(f.eigenvectors);
    f.gauge_tag = "canonical:max-component-real-positive";
    return f;
}

EigenFrame eigendecompose_at(const HamiltonianFamily& fam, const RealVector& x) {
    return eigendecompose(fam.H(x), x);
}

EigenFrame gauge_fix(const EigenFrame& frame) {
    EigenFrame f = frame;
    canonical_phase(f.eigenvectors);
    f.gauge_tag = "canonical:max-component-real-positive";
    return f;
}

EigenFrame gauge_fix(const EigenFrame& frame, const EigenFrame& reference) {
    if (frame.dim() != reference.dim())
        throw std::invalid_argument("gauge_fix: dimension mismatch");
    Matrix O;
    auto perm = match_permutation(reference, frame, &O);
    EigenFrame out;
    out.point = frame.point;
    out.eigenvalues.resize(frame.dim());
    out.eigenvectors.resize(frame.eigenvectors.rows(), frame.eigenvectors.cols());
    for (Eigen::Index a = 0; a < frame.dim(); ++a) {
        Complex ov = O(a, perm[a]);
        out.eigenvalues[a] = frame.eigenvalues[perm[a]];
        out.eigenvectors.col(a) =
            frame.eigenvectors.col(perm[a]) * (std::conj(ov) / std::abs(ov));
    }
    out.gauge_tag = "matched:max-overlap-real-positive";
    return out;
}

EigenFrame track_bands(const EigenFrame& frame, const EigenFrame& reference) {
    if (frame.dim() != reference.dim())
        throw std::invalid_argument("track_bands: dimension mismatch");
    auto perm = match_permutation(reference, frame, nullptr);
    EigenFrame out;
    out.point = frame.point;
    out.eigenvalues.resize(frame.dim());
    out.eigenvectors.resize(frame.eigenvectors.rows(), frame.eigenvectors.cols());
    for (Eigen::Index a = 0; a < frame.dim(); ++a) {
        out.eigenvalues[a] = frame.eigenvalues[perm[a]];
        out.eigenvectors.col(a) = frame.eigenvectors.col(perm[a]);
    }
    out.gauge_tag = frame.gauge_tag + "+tracked";
    return out;
}

Complex nonadiabatic_coupling(const HamiltonianFamily& fam, const RealVector& x,
                              int a, int b, int dir) {
    if (a == b)
        throw std::invalid_argument(
            "nonadiabatic_coupling: a == b is the connection, not a coupling");
    EigenFrame f = eigendecompose_at(fam, x);
    double gap = std::abs(f.eigenvalues[a] - f.eigenvalues[b]);
    if (gap < degeneracy_scale(f.eigenvalues))
        throw NearDegeneracyError(gap, "nonadiabatic_coupling");
    Matrix dHi = fam.dH(x, dir);
    Complex num = f.eigenvectors.col(b).adjoint() * dHi * f.eigenvectors.col(a);
    return num / (f.eigenvalues[a] - f.eigenvalues[b]);
}

Complex nonadiabatic_coupling_fd(const HamiltonianFamily& fam, const RealVector& x,
                                 int a, int b, int dir) {
    if (a == b)
        throw std::invalid_argument("nonadiabatic_coupling_fd: a == b");
    EigenFrame f0 = eigendecompose_at(fam, x);
    double gap = std::abs(f0.eigenvalues[a] - f0.eigenvalues[b]);
    if (gap < degeneracy_scale(f0.eigenvalues))
        throw NearDegeneracyError(gap, "nonadiabatic_coupling_fd");
    double h = fam.fd_step;
    RealVector xp = x, xm = x;
    xp[dir] += h;
    xm[dir] -= h;
    EigenFrame fp = gauge_fix(eigendecompose_at(fam, xp), f0);
    EigenFrame fm = gauge_fix(eigendecompose_at(fam, xm), f0);
    Vector dv = (fp.eigenvectors.col(a) - fm.eigenvectors.col(a)) / (2.0 * h);
    return f0.eigenvectors.col(b).dot(dv);
}

namespace {

double ratio_at_sample(const HamiltonianFamily& fam, const EigenFrame& f,
                       const RealVector& xdot, const std::vector<int>& bands,
                       bool complement_only) {
    const int n = f.dim();
    std::vector<char> inside(n, 0);
    for (int a : bands) inside[a] = 1;
    double tol = degeneracy_scale(f.eigenvalues);
    // dH . xdot once per sample
    Matrix dHdt = Matrix::Zero(f.eigenvectors.rows(), f.eigenvectors.rows());
    for (int i = 0; i < fam.pdim; ++i)
        if (xdot[i] != 0.0) dHdt += xdot[i] * fam.dH(f.point, i);
    double worst = 0.0;
    for (int a : bands) {
        for (int b = 0; b < n; ++b) {
            if (b == a) continue;
            if (complement_only && inside[b]) continue;
            double gap = std::abs(f.eigenvalues[b] - f.eigenvalues[a]);
            if (gap < tol)
                return std::numeric_limits<double>::infinity();
            Complex num =
                f.eigenvectors.col(b).adjoint() * dHdt * f.eigenvectors.col(a);
            double coupling = std::abs(num) / gap;  // |<b|d_t|a>|
            worst = std::max(worst, coupling / gap);
        }
    }
    return worst;
}

}  // namespace

double adiabaticity_ratio(const HamiltonianFamily& fam, const ParameterPath& path,
                          int band) {
    double worst = 0.0;
    for (std::size_t k = 0; k < path.size(); ++k) {
        EigenFrame f = eigendecompose(fam.H(path.points[k]), path.points[k]);
        double r = ratio_at_sample(fam, f, path.velocity_sample(k), {band}, false);
        if (std::isinf(r)) return r;
        worst = std::max(worst, r);
    }
    return worst;
}

double adiabaticity_ratio_complement(const HamiltonianFamily& fam,
                                     const ParameterPath& path,
                                     const std::vector<int>& bands) {
    if (static_cast<int>(bands.size()) == fam.hdim) return 0.0;  // no complement
    double worst = 0.0;
    for (std::size_t k = 0; k < path.size(); ++k) {
        EigenFrame f = eigendecompose(fam.H(path.points[k]), path.points[k]);
        double r = ratio_at_sample(fam, f, path.velocity_sample(k), bands, true);
        if (std::isinf(r)) return r;
        worst = std::max(worst, r);
    }
    return worst;
}

std::vector<EigenFrame> frames_along_path(const HamiltonianFamily& fam,
                                          const ParameterPath& path) {
    std::vector<EigenFrame> frames;
    frames.reserve(path.size());
    for (std::size_t k = 0; k < path.size(); ++k) {
        EigenFrame f = eigendecompose(fam.H(path.points[k]), path.points[k]);
        if (k == 0)
            frames.push_back(std::move(f));
        else
            frames.push_back(track_bands(f, frames.back()));
    }
    return frames;
}

}  // namespace adlab
