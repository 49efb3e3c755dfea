#pragma once

#include <optional>
#include <vector>

#include "adlab/spectral.hpp"

namespace adlab {

struct ConnectionSample {
    RealVector point;
    int band = 0;
    RealVector A;  // per requested direction; gauge-dependent by construction
};

struct CurvatureSample {
    RealVector point;
    int band = 0;
    RealMatrix F_curl;    // antisymmetric F_ij from curl of finite-difference A
    RealMatrix F_states;  // same from the sum-over-states formula
    double discrepancy = 0.0;
    bool flagged = false;  // methods disagree beyond combined tolerance
};

// Berry connection A_i = -i <a,x| d_i |a,x> in the canonical gauge, optionally
// regauged by a smooth phase field chi (v -> e^{i chi} v).
ConnectionSample berry_connection(const HamiltonianFamily& fam, const RealVector& x,
                                  int band, const std::vector<int>& dirs,
                                  const PhaseField& chi = {});

// Gauge-invariant curvature computed two ways; the discrepancy is reported and
// samples disagreeing beyond max(1e-6, 10 h^2) * scale are flagged.
CurvatureSample berry_curvature(const HamiltonianFamily& fam, const RealVector& x,
                                int band, const PhaseField& chi = {});

struct Circulation {
    double raw = 0.0;       // loop integral of A . dx
    double in_2pi = 0.0;    // raw / (2 pi)
};

// Discrete holonomy of a closed loop (incremental gauge matching).
Circulation loop_circulation(const HamiltonianFamily& fam, const ParameterPath& loop,
                             int band, const PhaseField& chi = {});

struct ChargeResult {
    int charge = 0;
    double residual = 0.0;  // |flux/2pi - charge|
    double flux = 0.0;      // raw total flux
};

// Total Berry-curvature flux through a sphere around `center`, via plaquette
// link-phase products on a latitude-longitude mesh (gauge-independent).
ChargeResult monopole_charge(const HamiltonianFamily& fam, const RealVector& center,
                             double radius, int band, int n_lat = 64,
                             int n_lon = 128, int threads = 1);

// A patch is a spherical cap; its gauge is fixed by phasing each eigenvector
// against the seed frame at the cap center.
struct Patch {
    RealVector center_dir;  // unit direction of the cap center from the sphere center
    double cap_radius;      // angular radius, radians
};

struct TransitionFunction {
    std::vector<RealVector> points;
    std::vector<double> chi;  // unwrapped phase difference, chi[0] = 0
};

// chi^{AB} along a sample chain inside the overlap of two patch gauges;
// A^B - A^A = grad chi^{AB} up to the base-point constant.
TransitionFunction transition_function(const HamiltonianFamily& fam,
                                       const Patch& patchA, const Patch& patchB,
                                       int band,
                                       const std::vector<RealVector>& chain,
                                       const RealVector& sphere_center,
                                       double sphere_radius);

struct CocycleResult {
    int integer = 0;
    double residual = 0.0;
};

// (chi^{AB} + chi^{BC} - chi^{AC}) / 2 pi at the common end point of three
// chains sharing base and end points.
CocycleResult cocycle_integer(const TransitionFunction& chiAB,
                              const TransitionFunction& chiBC,
                              const TransitionFunction& chiAC);

// Three caps covering the sphere with both poles in the triple overlap; the
// chains run pole to pole along the pairwise bisector meridians.
struct ThreeCapCover {
    std::vector<Patch> patches;                  // 3 caps
    std::vector<std::vector<RealVector>> chains; // AB, BC, AC chains
};

ThreeCapCover make_three_cap_cover(const RealVector& center, double radius,
                                   std::size_t chain_samples = 181,
                                   double cap_radius_deg = 122.0);

}  // namespace adlab
