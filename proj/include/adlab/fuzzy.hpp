#pragma once

#include <functional>
#include <string>
#include <vector>

#include "adlab/linalg.hpp"

namespace adlab {

// Truncated harmonic-oscillator ladder operators, a|n> = sqrt(n)|n-1>.
struct FockSpace {
    int N = 0;
    Matrix a, adag;
    Matrix number() const { return adag * a; }
};

FockSpace fock_operators(int N);

// Normalized truncated coherent state; tail guard |alpha|^2 <= N/4.
Vector coherent_state(Complex alpha, int N, double* tail_mass = nullptr);

// A triple of Hermitian coordinate operators on a factor space, plus the
// implicit C^2 spin factor of the displacement operator.
struct FuzzyGeometry {
    std::vector<Matrix> X;  // three coordinates
    int fock_dim = 0;       // trailing Fock factor, for truncation diagnostics
    std::string kind;

    // sum_i sigma_i (x) (X_i - x_i), Hermitian, on C^2 (x) F
    Matrix dirac(const RealVector& x) const;
};

FuzzyGeometry plane_geometry(int N);

// Fock-space observables of the throat-radius-one traversable wormhole.
struct WormholeModel {
    int N = 0;
    FockSpace fock;
    Matrix X, Y, reZ, imZ;  // imZ is the real diagonal matrix of Im(Z)

    // classical embedding height; branch sqrt(-1) = -i inside the throat
    Complex z_of(Complex alpha) const;

    Matrix dirac_sheet(Complex alpha, int sign) const;  // Hermitian D^+/D^-
    // single sheet with the dissipative part  +i(imZ - Im z); z_real_only
    // keeps the classical coordinate real (decay studies)
    Matrix dirac_single(Complex alpha, bool z_real_only = false) const;
    // double sheet on spin (x) sheet (x) Fock, Hermitian
    Matrix dirac_double(Complex alpha) const;

    // coordinate triple (1(x)X, 1(x)Y, s3(x)ReZ) on sheet (x) Fock
    FuzzyGeometry double_sheet_geometry() const;
};

WormholeModel wormhole_observables(int N);

struct QuasiStates {
    std::vector<double> lambda;     // signed eigenvalues, |lambda| ascending
    std::vector<Vector> state;
    std::vector<double> tail_mass;  // weight on the top Fock eighth
    double residual = 0.0;          // max eigen-residual
};

// `count` eigenpairs of minimal |lambda|; within near-degenerate groups the
// states with smaller truncation tail come first.
QuasiStates quasi_coherent_solve(const Matrix& D, int count, int fock_dim);

struct DoubleSheetPoint {
    Complex alpha;
    double lambda_plus = 0.0, lambda_minus = 0.0;
    double p_up_plus = 0.0, p_up_minus = 0.0;
    double reZ_plus = 0.0, reZ_minus = 0.0;  // sheet-signed <s3 (x) 1 (x) ReZ>
    RealVector spin_plus;                    // <sigma (x) 1 (x) 1> of |0+>
    double coupling = 0.0;                   // |<0+| ImZ |0->|
    Vector state_plus, state_minus;
};

// Minimal displacement pair of the double-sheet operator with the sheet
// labels assigned by majority sheet probability (ties by larger signed <ReZ>).
DoubleSheetPoint solve_double_sheet(const WormholeModel& wm, Complex alpha);

struct DecayFit {
    double rate = 0.0;
    double fit_residual = 0.0;  // rms residual of the log-norm fit
};

// Norm decay of the Schrodinger-like evolution under the single-sheet
// operator; Hermitian-only evolution when with_dissipator is false.
DecayFit single_sheet_decay(const WormholeModel& wm, Complex alpha,
                            double duration, bool with_dissipator = true);

struct ScanRow {
    double re_a = 0, im_a = 0, abs_a = 0;
    double l0_plus = 0, l0_minus = 0;
    double p_up_plus = 0, p_up_minus = 0;
    double rez_plus = 0, rez_minus = 0;
    double sx = 0, sy = 0, sz = 0;
    double single_plus = 0, single_minus = 0;  // min |Sp(D^+-)|
    double coupling = 0;
};

std::vector<ScanRow> surface_scan(const WormholeModel& wm,
                                  const std::vector<Complex>& alphas,
                                  int threads = 1);

// refine the p_up_plus = 1/2 crossing radius by golden-section on |alpha|
double refine_probability_crossing(const WormholeModel& wm, double lo, double hi,
                                   double tol = 1e-4);

struct InducedMetric {
    RealMatrix gamma_dist, gamma_nc, gamma;  // 2x2, symmetric, real parts
    double imag_residue = 0.0;
};

// gamma from finite differences of gauge-matched quasi-coherent states along
// a surface parametrization u -> x(u).
InducedMetric induced_metric(const FuzzyGeometry& geom,
                             const std::function<Vector(const RealVector&)>& state_at,
                             const std::function<RealVector(const RealVector&)>& x_of_u,
                             const RealVector& u0, double h = 1e-4);

// A_a = -i <0,x| d_a |0,x> for seed-gauge-fixed states (same parametrization).
RealVector shift_vector(const std::function<Vector(const RealVector&)>& state_at,
                        const RealVector& u0, double h = 1e-4);

// v phased so <seed, v> is real positive
Vector gauge_fix_to_seed(const Vector& v, const Vector& seed);

struct LineElement {
    double g_tt;       // coefficient of c^2 dt^2
    RealVector g_ta;   // coefficients of 2 c dt du^a
    RealMatrix g_ab;   // spatial block (negative definite for spacelike)
};

LineElement emergent_line_element(const RealMatrix& gamma, const RealVector& A);

}  // namespace adlab
