#include "adlab/ode.hpp"

#include <algorithm>
#include <cmath>

namespace adlab {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187,
                 A53 = 64448.0 / 6561, A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
// 4th-order weights (the embedded solution uses k7 = f at the new point)
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

struct Stepper {
    const OdeRhs& f;
    Vector k1, k2, k3, k4, k5, k6, k7, ytmp, y5;
    bool have_k1 = false;

    explicit Stepper(const OdeRhs& rhs, Eigen::Index n) : f(rhs) {
        for (Vector* v : {&k1, &k2, &k3, &k4, &k5, &k6, &k7, &ytmp, &y5})
            v->resize(n);
    }

    // attempts one step; returns scaled error estimate
    double attempt(double t, const Vector& y, double h, const OdeOptions& o) {
        if (!have_k1) { f(t, y, k1); have_k1 = true; }
        ytmp = y + h * (A21 * k1);
        f(t + C2 * h, ytmp, k2);
        ytmp = y + h * (A31 * k1 + A32 * k2);
        f(t + C3 * h, ytmp, k3);
        ytmp = y + h * (A41 * k1 + A42 * k2 + A43 * k3);
        f(t + C4 * h, ytmp, k4);
        ytmp = y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4);
        f(t + C5 * h, ytmp, k5);
        ytmp = y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5);
        f(t + h, ytmp, k6);
        y5 = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        f(t + h, y5, k7);
        double err = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            Complex e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] +
                             E6 * k6[i] + E7 * k7[i]);
            double sc = o.atol + o.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            double r = std::abs(e) / sc;
            err += r * r;
        }
        return std::sqrt(err / static_cast<double>(y.size()));
    }

    void accept() { k1.swap(k7); }  // FSAL
};

double initial_step(const OdeRhs& f, double t0, const Vector& y0, double span,
                    const OdeOptions& o) {
    Vector k(y0.size());
    f(t0, y0, k);
    double dnorm = k.norm();
    double ynorm = std::max(y0.norm(), 1.0);
    double h = (dnorm > 0) ? 0.01 * ynorm / dnorm : 1e-3 * span;
    return std::min(h, 0.1 * span);
}

}  // namespace

Vector ode_integrate(const OdeRhs& f, Vector y0, double t0, double t1,
                     const OdeOptions& opts) {
    if (t1 == t0) return y0;
    double span = t1 - t0;
    Stepper st(f, y0.size());
    double t = t0;
    double h = initial_step(f, t0, y0, span, opts);
    std::size_t steps = 0;
    while (t < t1) {
        h = std::min(h, t1 - t);
        if (h < opts.min_step_fraction * span)
            throw IntegrationError(t, "step size collapsed");
        double err = st.attempt(t, y0, h, opts);
        if (++steps > opts.max_steps)
            throw IntegrationError(t, "step budget exhausted");
        if (err <= 1.0) {
            t += h;
            y0 = st.y5;
            st.accept();
            double grow = (err > 0) ? opts.safety * std::pow(err, -0.2) : 5.0;
            h *= std::clamp(grow, 0.2, 5.0);
        } else {
            h *= std::max(0.2, opts.safety * std::pow(err, -0.2));
            st.have_k1 = true;  // k1 still valid at (t, y0)
        }
    }
    return y0;
}

std::vector<Vector> ode_integrate_at(const OdeRhs& f, const Vector& y0,
                                     const std::vector<double>& times,
                                     const OdeOptions& opts) {
    std::vector<Vector> out;
    out.reserve(times.size());
    Vector y = y0;
    out.push_back(y);
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        y = ode_integrate(f, y, times[k], times[k + 1], opts);
        out.push_back(y);
    }
    return out;
}

}  // namespace adlab
