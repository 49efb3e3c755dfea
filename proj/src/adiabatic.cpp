#include "adlab/adiabatic.hpp"

#include <cmath>

#include "adlab/util.hpp"

namespace adlab {

StateTrajectory schrodinger_propagate(const HamiltonianFamily& fam,
                                      const ParameterPath& path,
                                      const Vector& psi0, double tol) {
    if (std::abs(psi0.norm() - 1.0) > 1e-8)
        throw std::invalid_argument("schrodinger_propagate: psi0 not normalized");
    if (!(tol > 1e-13 && tol < 1e-4))
        throw std::invalid_argument("schrodinger_propagate: tol outside (1e-13, 1e-4)");
    OdeRhs rhs = [&fam, &path](double t, const Vector& y, Vector& dy) {
        dy.noalias() = Complex(0, -1) * (fam.H(path.position_at(t)) * y);
    };
    OdeOptions opts;
    opts.rtol = tol;
    opts.atol = tol * 1e-2;
    StateTrajectory traj;
    traj.times = path.times;
    traj.states = ode_integrate_at(rhs, psi0, path.times, opts);
    for (const auto& s : traj.states)
        traj.norm_drift = std::max(traj.norm_drift, std::abs(s.norm() - 1.0));
    return traj;
}

SingleBandResult adiabatic_propagate_single(const HamiltonianFamily& fam,
                                            const ParameterPath& path, int band) {
    SingleBandResult res;
    res.adiabaticity = adiabaticity_ratio(fam, path, band);
    if (std::isinf(res.adiabaticity))
        throw NearDegeneracyError(
            0.0, "adiabatic_propagate_single: crossing on path, use multi-band transport");
    if (res.adiabaticity > 0.1)
        res.trajectory.warnings =
            "adiabaticity ratio " + std::to_string(res.adiabaticity) + " > 0.1";

    auto frames = frames_along_path(fam, path);
    const std::size_t n = path.size();
    res.dynamical_at.assign(n, 0.0);
    res.geometric_at.assign(n, 0.0);
    res.trajectory.times = path.times;
    res.trajectory.states.resize(n);
    double phi_d = 0.0, phi_g = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) {
            double dt = path.times[k] - path.times[k - 1];
            phi_d += 0.5 * dt * (frames[k - 1].eigenvalues[band] +
                                 frames[k].eigenvalues[band]);
            Complex ov = frames[k - 1].eigenvectors.col(band).dot(
                frames[k].eigenvectors.col(band));
            phi_g += std::arg(ov);
        }
        res.dynamical_at[k] = phi_d;
        res.geometric_at[k] = phi_g;
        res.trajectory.states[k] = std::exp(Complex(0, -(phi_d + phi_g))) *
                                   frames[k].eigenvectors.col(band);
    }
    res.phases.dynamical = phi_d;
    res.phases.geometric = phi_g;
    res.phases.band = band;
    return res;
}

Vector MultiBandResult::reconstruct(std::size_t k) const {
    Vector psi = Vector::Zero(frames[k].eigenvectors.rows());
    for (std::size_t j = 0; j < bands.size(); ++j)
        psi += amplitudes[k][j] * frames[k].eigenvectors.col(bands[j]);
    return psi;
}

MultiBandResult adiabatic_propagate_multi(const HamiltonianFamily& fam,
                                          const ParameterPath& path,
                                          const std::vector<int>& bands,
                                          const Vector& c0) {
    const int nb = static_cast<int>(bands.size());
    if (c0.size() != nb)
        throw std::invalid_argument("adiabatic_propagate_multi: c0 size mismatch");
    MultiBandResult res;
    res.bands = bands;
    res.times = path.times;
    res.frames = frames_along_path(fam, path);
    double comp_ratio = adiabaticity_ratio_complement(fam, path, bands);
    if (std::isinf(comp_ratio))
        throw NearDegeneracyError(
            0.0, "adiabatic_propagate_multi: band set touches its complement");
    if (comp_ratio > 0.1)
        res.warnings = "band-set/complement adiabaticity ratio " +
                       std::to_string(comp_ratio) + " > 0.1";

    const std::size_t n = path.size();
    // per-sample generator G_k = -i E - M xdot in the tracked gauge
    std::vector<Matrix> gen(n);
    for (std::size_t k = 0; k < n; ++k) {
        const EigenFrame& f = res.frames[k];
        RealVector xdot = path.velocity_sample(k);
        Matrix dHdt = Matrix::Zero(fam.hdim, fam.hdim);
        for (int i = 0; i < fam.pdim; ++i)
            if (xdot[i] != 0.0) dHdt += xdot[i] * fam.dH(path.points[k], i);
        Matrix g = Matrix::Zero(nb, nb);
        double tol = degeneracy_scale(f.eigenvalues);
        double hnorm = f.eigenvalues.cwiseAbs().maxCoeff();
        for (int p = 0; p < nb; ++p) {
            g(p, p) = Complex(0, -1) * f.eigenvalues[bands[p]];
            for (int q = 0; q < nb; ++q) {
                if (p == q) continue;
                Complex num = f.eigenvectors.col(bands[p]).adjoint() * dHdt *
                              f.eigenvectors.col(bands[q]);
                double gap = f.eigenvalues[bands[q]] - f.eigenvalues[bands[p]];
                if (std::abs(gap) < tol) {
                    // exact crossings inside the band set are traversable only
                    // when the contracted coupling vanishes with the gap
                    if (std::abs(num) < 1e-8 * std::max(hnorm, 1.0))
                        continue;
                    throw NearDegeneracyError(std::abs(gap),
                                              "adiabatic_propagate_multi");
                }
                // -M xdot, M_pq = <p| dH.xdot |q> / (lambda_q - lambda_p)
                g(p, q) = -num / gap;
            }
        }
        // diagonal connection <a|da/dt> from the stored-frame overlaps
        for (int p = 0; p < nb; ++p) {
            std::size_t kl = (k == 0) ? 0 : k - 1;
            std::size_t kr = (k + 1 == n) ? k : k + 1;
            if (kl == kr) continue;
            Complex ov = res.frames[kl].eigenvectors.col(bands[p]).dot(
                res.frames[kr].eigenvectors.col(bands[p]));
            double rate = std::arg(ov) / (path.times[kr] - path.times[kl]);
            g(p, p) += Complex(0, -rate);  // -<a|adot> with <a|adot> = i * rate
        }
        gen[k] = g;
    }

    auto gen_at = [&](double t) -> Matrix {
        if (t <= path.times.front()) return gen.front();
        if (t >= path.times.back()) return gen.back();
        std::size_t lo = 0, hi = n - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            if (path.times[mid] <= t) lo = mid; else hi = mid;
        }
        double w = (t - path.times[lo]) / (path.times[lo + 1] - path.times[lo]);
        return (1.0 - w) * gen[lo] + w * gen[lo + 1];
    };

    // propagate the full U to expose unitarity
    OdeRhs rhs = [&](double t, const Vector& y, Vector& dy) {
        Eigen::Map<const Matrix> U(y.data(), nb, nb);
        Matrix dU = gen_at(t) * U;
        dy = Eigen::Map<Vector>(dU.data(), nb * nb);
    };
    Matrix U0 = Matrix::Identity(nb, nb);
    Vector u0 = Eigen::Map<Vector>(U0.data(), nb * nb);
    OdeOptions opts;
    opts.rtol = 1e-10;
    opts.atol = 1e-12;
    auto us = ode_integrate_at(rhs, u0, path.times, opts);
    res.amplitudes.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        Eigen::Map<const Matrix> U(us[k].data(), nb, nb);
        res.amplitudes[k] = U * c0;
        double defect = (U.adjoint() * U - Matrix::Identity(nb, nb)).norm();
        res.unitarity_defect = std::max(res.unitarity_defect, defect);
    }
    return res;
}

std::pair<Complex, Complex> crossing_transit(const TransitCoefficients& tc) {
    double n2 = std::norm(tc.c1) + std::norm(tc.c2);
    if (std::abs(n2 - 1.0) > 1e-8)
        throw std::invalid_argument("crossing_transit: |c1|^2 + |c2|^2 != 1");
    Complex eib = std::exp(Complex(0, tc.beta));
    Complex c1p = std::cos(tc.alpha) * tc.c2 + eib * std::sin(tc.alpha) * tc.c1;
    Complex c2p =
        std::cos(tc.alpha) * tc.c1 + std::conj(eib) * std::sin(tc.alpha) * tc.c2;
    return {c1p, c2p};
}

double transit_half_angle(const ParameterPath& path, double t_star) {
    RealVector vb = path.velocity_before(t_star);
    RealVector va = path.velocity_after(t_star);
    if (vb.norm() == 0.0 || va.norm() == 0.0)
        throw std::invalid_argument("transit_half_angle: vanishing tangent");
    // angle between the incoming arm (-v_before) and the outgoing arm (+v_after)
    double c = -vb.dot(va) / (vb.norm() * va.norm());
    c = std::clamp(c, -1.0, 1.0);
    return 0.5 * std::acos(c);
}

double compute_beta(const HamiltonianFamily& fam, const ParameterPath& path,
                    double t_star, int band1, int band2) {
    RealVector va = path.velocity_after(t_star);
    RealVector vb = path.velocity_before(t_star);
    if (va.norm() == 0.0 || vb.norm() == 0.0)
        throw std::invalid_argument("compute_beta: vanishing tangent at t*");
    // coupling evaluated approaching the crossing from below
    double dt = 1e-3 * path.duration();
    RealVector xm = path.position_at(t_star - dt);
    Complex contracted = 0.0;
    for (int i = 0; i < fam.pdim; ++i)
        if (va[i] != 0.0)
            contracted += nonadiabatic_coupling(fam, xm, band2, band1, i) * va[i];
    if (std::abs(contracted) == 0.0)
        throw std::invalid_argument("compute_beta: contracted coupling vanished");
    return std::arg(contracted) + PI;
}

double aharonov_anandan_phase(const StateTrajectory& traj,
                              const HamiltonianFamily& fam,
                              const ParameterPath& path, double cyclicity_tol) {
    const Vector& psi0 = traj.states.front();
    const Vector& psiT = traj.states.back();
    Complex ov = psi0.dot(psiT);
    double mod = std::abs(ov) / (psi0.norm() * psiT.norm());
    if (mod < 1.0 - cyclicity_tol)
        throw std::invalid_argument(
            "aharonov_anandan_phase: trajectory not cyclic, final overlap " +
            std::to_string(mod));
    std::vector<double> h_expect(traj.times.size());
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const Vector& s = traj.states[k];
        Complex e = s.dot(fam.H(path.position_at(traj.times[k])) * s);
        h_expect[k] = e.real() / s.squaredNorm();
    }
    double dynamical = -trapezoid(traj.times, h_expect);
    double total = std::arg(ov);
    return wrap_angle(total - dynamical);
}

std::vector<RealVector> occupation_probabilities(const StateTrajectory& traj,
                                                 const HamiltonianFamily& fam,
                                                 const ParameterPath& path,
                                                 Basis basis) {
    std::vector<RealVector> out(traj.times.size());
    if (basis == Basis::Bare) {
        for (std::size_t k = 0; k < traj.times.size(); ++k)
            out[k] = traj.states[k].cwiseAbs2();
        return out;
    }
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        EigenFrame f = eigendecompose(fam.H(path.position_at(traj.times[k])));
        RealVector p(f.dim());
        for (int a = 0; a < f.dim(); ++a)
            p[a] = std::norm(f.eigenvectors.col(a).dot(traj.states[k]));
        out[k] = p;
    }
    return out;
}

}  // namespace adlab
