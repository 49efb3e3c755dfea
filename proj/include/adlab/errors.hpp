#pragma once

#include <stdexcept>
#include <string>

namespace adlab {

struct NearDegeneracyError : std::runtime_error {
    double gap;
    explicit NearDegeneracyError(double g, const std::string& where)
        : std::runtime_error(where + ": bands nearly degenerate, gap = " +
                             std::to_string(g)),
          gap(g) {}
};

struct AmbiguousMatchError : std::runtime_error {
    double best_overlap;
    explicit AmbiguousMatchError(double ov, const std::string& where)
        : std::runtime_error(where + ": band matching ambiguous, best overlap " +
                             std::to_string(ov) +
                             " < 0.5 (grid too coarse near a crossing?)"),
          best_overlap(ov) {}
};

struct IntegrationError : std::runtime_error {
    double t_fail;
    explicit IntegrationError(double t, const std::string& msg)
        : std::runtime_error("integration failed at t = " + std::to_string(t) +
                             ": " + msg),
          t_fail(t) {}
};

struct RefinementNeededError : std::runtime_error {
    double residual;
    explicit RefinementNeededError(double r, const std::string& where)
        : std::runtime_error(where + ": non-integer residual " +
                             std::to_string(r) + " >= 0.05, refine the mesh"),
          residual(r) {}
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace adlab
