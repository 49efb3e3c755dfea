#pragma once

#include <cstdint>

#include "adlab/spectral.hpp"

namespace adlab {

// Two-level conical-intersection model on the (x, y) plane:
//   H = [[0, x - i y], [x + i y, 0]],  eigenvalues -r, +r.
HamiltonianFamily conical_model();

// Three-parameter spin model H = x . sigma (unit conical crossing at 0).
HamiltonianFamily spin_monopole_model(double sign = 1.0);

// Two displaced spin blocks weakly coupled; carries two like-signed unit
// crossings at c1, c2 in the lowest band.
HamiltonianFamily two_monopole_model(const RealVector& c1, const RealVector& c2,
                                     double coupling);

// Smooth random d-level family on n parameters (for property tests).
HamiltonianFamily random_smooth_model(int d, int n, std::uint64_t seed);

// Seeded dense random Hermitian matrix.
Matrix random_hermitian(int d, std::uint64_t seed);

// circle of radius r traversed at constant angular speed omega, starting at
// angle theta0; n samples over [0, T]
ParameterPath circle_path(double r, double omega, double T, std::size_t n,
                          double theta0 = 0.0);

}  // namespace adlab
