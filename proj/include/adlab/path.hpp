#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "adlab/linalg.hpp"

namespace adlab {

// Sampled map t -> x(t) into the control manifold.  Velocities come either
// from an analytic callable or from finite differences of the samples.
class ParameterPath {
public:
    std::vector<double> times;
    std::vector<RealVector> points;
    // optional analytic definition; when set it is used between samples
    std::function<RealVector(double)> position_fn;
    std::function<RealVector(double)> velocity_fn;

    ParameterPath() = default;
    ParameterPath(std::vector<double> t, std::vector<RealVector> x)
        : times(std::move(t)), points(std::move(x)) {
        validate();
    }

    void validate() const {
        if (times.size() < 2 || times.size() != points.size())
            throw std::invalid_argument("path needs at least 2 samples");
        for (std::size_t k = 0; k + 1 < times.size(); ++k)
            if (!(times[k + 1] > times[k]))
                throw std::invalid_argument("path times must strictly increase");
    }

    std::size_t size() const { return times.size(); }
    int dim() const { return static_cast<int>(points.at(0).size()); }
    double t0() const { return times.front(); }
    double t1() const { return times.back(); }
    double duration() const { return t1() - t0(); }

    bool closed(double tol = 1e-9) const {
        return (points.front() - points.back()).norm() <= tol;
    }

    RealVector position_at(double t) const {
        if (position_fn) return position_fn(t);
        // piecewise-linear interpolation of the samples
        if (t <= times.front()) return points.front();
        if (t >= times.back()) return points.back();
        std::size_t k = segment_index(t);
        double w = (t - times[k]) / (times[k + 1] - times[k]);
        return (1.0 - w) * points[k] + w * points[k + 1];
    }

    RealVector velocity_sample(std::size_t k) const {
        if (velocity_fn) return velocity_fn(times[k]);
        if (k == 0) return (points[1] - points[0]) / (times[1] - times[0]);
        std::size_t last = times.size() - 1;
        if (k == last)
            return (points[last] - points[last - 1]) / (times[last] - times[last - 1]);
        return (points[k + 1] - points[k - 1]) / (times[k + 1] - times[k - 1]);
    }

    // one-sided velocities, for corners
    RealVector velocity_before(double t) const {
        if (velocity_fn) return velocity_fn(t - 1e-9 * duration());
        std::size_t k = segment_index(t - 1e-12 * duration());
        return (points[k + 1] - points[k]) / (times[k + 1] - times[k]);
    }
    RealVector velocity_after(double t) const {
        if (velocity_fn) return velocity_fn(t + 1e-9 * duration());
        std::size_t k = segment_index(t + 1e-12 * duration());
        return (points[k + 1] - points[k]) / (times[k + 1] - times[k]);
    }

private:
    std::size_t segment_index(double t) const {
        std::size_t lo = 0, hi = times.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            if (times[mid] <= t) lo = mid; else hi = mid;
        }
        return lo;
    }
};

// Uniform sampling of an analytic path on [t0, t1].
inline ParameterPath sample_path(const std::function<RealVector(double)>& x,
                                 double t0, double t1, std::size_t n,
                                 std::function<RealVector(double)> v = {}) {
    std::vector<double> ts(n);
    std::vector<RealVector> xs(n);
    for (std::size_t k = 0; k < n; ++k) {
        ts[k] = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(n - 1);
        xs[k] = x(ts[k]);
    }
    ParameterPath p(std::move(ts), std::move(xs));
    p.position_fn = x;
    p.velocity_fn = std::move(v);
    return p;
}

// Piecewise-linear path through breakpoints at given times, n samples total.
inline ParameterPath piecewise_linear_path(const std::vector<RealVector>& bp,
                                           const std::vector<double>& bt,
                                           std::size_t n) {
    if (bp.size() != bt.size() || bp.size() < 2)
        throw std::invalid_argument("piecewise path needs matching breakpoints/times");
    auto pos = [bp, bt](double t) -> RealVector {
        if (t <= bt.front()) return bp.front();
        if (t >= bt.back()) return bp.back();
        std::size_t k = 0;
        while (k + 2 < bt.size() && bt[k + 1] <= t) ++k;
        double w = (t - bt[k]) / (bt[k + 1] - bt[k]);
        return (1.0 - w) * bp[k] + w * bp[k + 1];
    };
    ParameterPath p = sample_path(pos, bt.front(), bt.back(), n);
    return p;
}

}  // namespace adlab
