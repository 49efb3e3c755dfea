#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "adlab/errors.hpp"
#include "adlab/linalg.hpp"
#include "adlab/path.hpp"

namespace adlab {

// Spectrum + gauge-fixed eigenvectors at one parameter point.
struct EigenFrame {
    RealVector point;        // parameter point (may be empty for bare operators)
    RealVector eigenvalues;  // ascending for fresh decompositions
    Matrix eigenvectors;     // unit-norm columns
    std::string gauge_tag;   // phase convention applied

    int dim() const { return static_cast<int>(eigenvalues.size()); }
};

// A parameter-dependent Hermitian operator family.  dH falls back to central
// finite differences of step fd_step when no analytic derivative is supplied.
struct HamiltonianFamily {
    int hdim = 0;
    int pdim = 0;
    std::function<Matrix(const RealVector&)> H;
    std::function<Matrix(const RealVector&, int)> dH_analytic;  // optional
    double fd_step = 1e-4;

    Matrix operator()(const RealVector& x) const { return H(x); }

    Matrix dH(const RealVector& x, int dir) const {
        if (dH_analytic) return dH_analytic(x, dir);
        RealVector xp = x, xm = x;
        xp[dir] += fd_step;
        xm[dir] -= fd_step;
        return (H(xp) - H(xm)) / (2.0 * fd_step);
    }
};

// smooth phase field chi(x) used to regauge eigenvector families in tests
using PhaseField = std::function<double(const RealVector&)>;

// Near-degeneracy threshold: gaps below 1e-8 * ||H|| are treated as crossings.
inline double degeneracy_scale(const RealVector& eigenvalues) {
    double s = eigenvalues.cwiseAbs().maxCoeff();
    return 1e-8 * std::max(s, 1e-30);
}

// Full spectrum with the canonical phase convention (largest-magnitude
// component made real positive).  Deterministic for identical input.
EigenFrame eigendecompose(const Matrix& H, const RealVector& point = {});

EigenFrame eigendecompose_at(const HamiltonianFamily& fam, const RealVector& x);

// Without reference: canonical phases.  With reference: bands permuted and
// phased so <ref_a, v_a> is real positive (max-overlap matching).
EigenFrame gauge_fix(const EigenFrame& frame);
EigenFrame gauge_fix(const EigenFrame& frame, const EigenFrame& reference);

// Permute bands to follow `reference` (max overlap) but keep each vector's
// existing phase.  Used for band tracking along paths and grids.
EigenFrame track_bands(const EigenFrame& frame, const EigenFrame& reference);

// <b,x| d_dir |a,x> = <b|dH|a> / (lambda_a - lambda_b).
Complex nonadiabatic_coupling(const HamiltonianFamily& fam, const RealVector& x,
                              int a, int b, int dir);

// Same matrix element from gauge-matched finite differences of eigenvectors.
Complex nonadiabatic_coupling_fd(const HamiltonianFamily& fam, const RealVector& x,
                                 int a, int b, int dir);

// sup over path samples of max_{b != a} |<b|d_i|a> xdot^i / (lambda_b-lambda_a)|,
// hbar = 1.  Returns +inf when a crossing with band a occurs on the path.
double adiabaticity_ratio(const HamiltonianFamily& fam, const ParameterPath& path,
                          int band);

// Band-restricted version: sup over samples, a in `bands`, b outside.
double adiabaticity_ratio_complement(const HamiltonianFamily& fam,
                                     const ParameterPath& path,
                                     const std::vector<int>& bands);

// Frames at every path sample, canonical phases, bands permuted to follow the
// first frame through crossings (max-overlap tracking).
std::vector<EigenFrame> frames_along_path(const HamiltonianFamily& fam,
                                          const ParameterPath& path);

}  // namespace adlab
