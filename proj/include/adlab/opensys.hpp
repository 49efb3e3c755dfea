#pragma once

#include <string>
#include <vector>

#include "adlab/spectral.hpp"

namespace adlab {

// Positive semidefinite, unit-trace state.
struct DensityMatrix {
    Matrix rho;

    int dim() const { return static_cast<int>(rho.rows()); }
    void validate(double tol = 1e-10) const;
};

double purity(const DensityMatrix& rho);
double von_neumann_entropy(const DensityMatrix& rho);

// 0.5 * || r1 - r2 ||_1
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// System (x) Environment family: H_tot = H_S (x) 1 + 1 (x) H_E + eps V.
// Index convention: system factor first, total index = s * d_E + e.
struct BipartiteFamily {
    HamiltonianFamily sys;
    HamiltonianFamily env;
    std::function<Matrix(const RealVector&)> V;
    double eps = 0.0;

    int dim_total() const { return sys.hdim * env.hdim; }
    Matrix H_tot(const RealVector& x) const;
    HamiltonianFamily total_family() const;
};

Matrix tensor_assemble(const Matrix& H_S, const Matrix& H_E, const Matrix& V,
                       double eps);

DensityMatrix partial_trace(const Matrix& rho_tot, int d_S, int d_E,
                            bool keep_system = true);

struct EigenMixedState {
    DensityMatrix rho;
    Vector total_eigenvector;   // the labeled |a,alpha,x>, canonical gauge
    double total_eigenvalue = 0.0;
    double label_overlap = 0.0;      // |<a,x (x) alpha,x | a,alpha,x>|
    double min_resonance_gap = 0.0;  // min |mu_b + nu_beta - mu_c - nu_alpha|
    bool quasi_resonant = false;     // gap < 10 eps
};

// rho^eps_{a alpha}(x): partial trace of the perturbatively labeled
// eigenprojector of H_tot.
EigenMixedState eigen_mixed_state(const BipartiteFamily& fam, int a, int alpha,
                                  const RealVector& x);

enum class ConnectionFlavor { CalA, FrakA };

struct OperatorConnection {
    RealVector point;
    std::vector<Matrix> comp;  // one d_S x d_S component per direction
    ConnectionFlavor flavor = ConnectionFlavor::CalA;
    double residual = 0.0;     // defining-relation residual on the support
    int support_rank = 0;
    bool pseudo_solution = false;  // rank-deficient rho, pseudo-inverse used
};

// Operator-valued connections solved from their defining relations on the
// numerical support of rho (eigenvalues > 1e-12 kept).
OperatorConnection operator_connection(const BipartiteFamily& fam, int a, int alpha,
                                       const RealVector& x, ConnectionFlavor flavor);

// scalar connection A_i = -i <<a,alpha,x| d_i |a,alpha,x>> of the bipartite
// eigenvector (canonical gauge), for the tr(rho A) = A identities
RealVector scalar_connection(const BipartiteFamily& fam, int a, int alpha,
                             const RealVector& x);

struct AdiabaticFields {
    std::vector<Matrix> B;  // curl frakA + i frakA ^ frakA, per direction
    std::vector<Matrix> F;  // curl calA + i calA ^ calA - B
    RealVector meanB;       // tr(rho B_k)
    RealVector meanF;
    double max_imag = 0.0;  // imaginary residue of the means
};

AdiabaticFields adiabatic_fields(const BipartiteFamily& fam, int a, int alpha,
                                 const RealVector& x);

struct WeakTransportResult {
    std::vector<double> times;
    std::vector<DensityMatrix> rho;
    double trace_drift = 0.0;
    double min_eigenvalue = 0.0;     // most negative eigenvalue seen
    double antiherm_residual = 0.0;  // max anti-Hermitian norm of calA . xdot
    std::string warnings;
};

// rho(t) = U_E U_A rho^eps(x(t)) U_A^dag U_E^dag with
// i hbar dU_E/dt = E^eps U_E and i dU_A/dt = U_A (calA . xdot).
WeakTransportResult weak_adiabatic_propagate(const BipartiteFamily& fam,
                                             const ParameterPath& path, int a,
                                             int alpha);

}  // namespace adlab
