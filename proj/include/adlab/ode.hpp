#pragma once

#include <functional>
#include <vector>

#include "adlab/errors.hpp"
#include "adlab/linalg.hpp"

namespace adlab {

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double safety = 0.9;
    double min_step_fraction = 1e-14;  // relative to interval length
    std::size_t max_steps = 50'000'000;
};

using OdeRhs = std::function<void(double, const Vector&, Vector&)>;

// Integrate y' = f(t, y) from t0 to t1, Dormand-Prince 5(4) embedded pair.
Vector ode_integrate(const OdeRhs& f, Vector y0, double t0, double t1,
                     const OdeOptions& opts = {});

// Integrate and record the state at each requested output time
// (times must be nondecreasing, times.front() == t0).
std::vector<Vector> ode_integrate_at(const OdeRhs& f, const Vector& y0,
                                     const std::vector<double>& times,
                                     const OdeOptions& opts = {});

}  // namespace adlab
