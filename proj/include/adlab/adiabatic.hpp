#pragma once

#include <string>
#include <vector>

#include "adlab/ode.hpp"
#include "adlab/spectral.hpp"

namespace adlab {

struct StateTrajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    double norm_drift = 0.0;  // max | ||psi|| - 1 |
    std::string warnings;
};

struct PhaseDecomposition {
    double dynamical = 0.0;  // radians
    double geometric = 0.0;  // radians
    int band = 0;
};

struct TransitCoefficients {
    Complex c1, c2;
    double alpha = 0.0;  // half the bend angle, radians
    double beta = 0.0;   // radians
};

// Exact propagation of i hbar dpsi/dt = H(x(t)) psi, hbar = 1; the oracle for
// every adiabatic claim.  Unitarity is monitored, not silently repaired.
StateTrajectory schrodinger_propagate(const HamiltonianFamily& fam,
                                      const ParameterPath& path,
                                      const Vector& psi0, double tol = 1e-10);

struct SingleBandResult {
    StateTrajectory trajectory;
    PhaseDecomposition phases;         // totals over the path
    std::vector<double> dynamical_at;  // running phase integrals per sample
    std::vector<double> geometric_at;
    double adiabaticity = 0.0;
};

// Strict adiabatic transport on one band: phases by composite trapezoid /
// incremental overlap accumulation on the sample grid.
SingleBandResult adiabatic_propagate_single(const HamiltonianFamily& fam,
                                            const ParameterPath& path, int band);

struct MultiBandResult {
    std::vector<double> times;
    std::vector<Vector> amplitudes;  // per sample, over the chosen bands
    std::vector<EigenFrame> frames;  // tracked frames used for reconstruction
    std::vector<int> bands;
    double unitarity_defect = 0.0;   // max ||U^dag U - 1||
    std::string warnings;

    Vector reconstruct(std::size_t k) const;
};

// Multi-band transport: i dU/dt = (E - i M_i xdot^i) U in the tracked frame
// gauge, M_ab = <a|d_i|b>; amplitudes returned are U(t) c0.
MultiBandResult adiabatic_propagate_multi(const HamiltonianFamily& fam,
                                          const ParameterPath& path,
                                          const std::vector<int>& bands,
                                          const Vector& c0);

// Conical-crossing transit map applied to amplitudes at the crossing.
std::pair<Complex, Complex> crossing_transit(const TransitCoefficients& tc);

// Half-angle between the two path arms meeting at the corner x(t*):
// pi/2 for a straight passage, smaller for a bend.
double transit_half_angle(const ParameterPath& path, double t_star);

// beta = arg( <band1,x|d_i|band2,x> at t->t*- contracted with xdot at t->t*+ ) + pi.
double compute_beta(const HamiltonianFamily& fam, const ParameterPath& path,
                    double t_star, int band1 = 0, int band2 = 1);

// Geometric phase of a cyclic (not necessarily adiabatic) evolution:
// total phase minus dynamical phase, reduced mod 2 pi.
double aharonov_anandan_phase(const StateTrajectory& traj,
                              const HamiltonianFamily& fam,
                              const ParameterPath& path,
                              double cyclicity_tol = 1e-6);

enum class Basis { Bare, Instantaneous };

// Per-sample occupation probabilities |<basis vector, psi>|^2.
std::vector<RealVector> occupation_probabilities(const StateTrajectory& traj,
                                                 const HamiltonianFamily& fam,
                                                 const ParameterPath& path,
                                                 Basis basis);

}  // namespace adlab
