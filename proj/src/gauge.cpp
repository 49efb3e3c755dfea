#include "adlab/gauge.hpp"

#include <cmath>

#include "adlab/util.hpp"

namespace adlab {

namespace {

Complex phase_of(const PhaseField& chi, const RealVector& x) {
    return chi ? std::exp(Complex(0, chi(x))) : Complex(1, 0);
}

// band eigenvector at x with band identity tracked against `center`
Vector band_vector(const HamiltonianFamily& fam, const RealVector& x, int band,
                   const EigenFrame& center, const PhaseField& chi) {
    EigenFrame f = track_bands(eigendecompose_at(fam, x), center);
    return phase_of(chi, x) * f.eigenvectors.col(band);
}

}  // namespace

ConnectionSample berry_connection(const HamiltonianFamily& fam, const RealVector& x,
                                  int band, const std::vector<int>& dirs,
                                  const PhaseField& chi) {
    EigenFrame f0 = eigendecompose_at(fam, x);
    // degeneracy guard
    double tol = degeneracy_scale(f0.eigenvalues);
    for (int b = 0; b < f0.dim(); ++b)
        if (b != band && std::abs(f0.eigenvalues[b] - f0.eigenvalues[band]) < tol)
            throw NearDegeneracyError(
                std::abs(f0.eigenvalues[b] - f0.eigenvalues[band]),
                "berry_connection");
    Vector v0 = phase_of(chi, x) * f0.eigenvectors.col(band);
    double h = fam.fd_step;
    ConnectionSample s;
    s.point = x;
    s.band = band;
    s.A.resize(static_cast<Eigen::Index>(dirs.size()));
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        RealVector xp = x, xm = x;
        xp[dirs[d]] += h;
        xm[dirs[d]] -= h;
        Vector vp = band_vector(fam, xp, band, f0, chi);
        Vector vm = band_vector(fam, xm, band, f0, chi);
        Complex der = v0.dot((vp - vm) / (2.0 * h));
        s.A[static_cast<Eigen::Index>(d)] = (Complex(0, -1) * der).real();
    }
    return s;
}

CurvatureSample berry_curvature(const HamiltonianFamily& fam, const RealVector& x,
                                int band, const PhaseField& chi) {
    const int n = fam.pdim;
    CurvatureSample s;
    s.point = x;
    s.band = band;
    s.F_curl = RealMatrix::Zero(n, n);
    s.F_states = RealMatrix::Zero(n, n);
    double h = fam.fd_step;

    std::vector<int> all_dirs(n);
    for (int i = 0; i < n; ++i) all_dirs[i] = i;

    // curl of the finite-difference connection
    std::vector<RealVector> Ap(n), Am(n);
    for (int i = 0; i < n; ++i) {
        RealVector xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        Ap[i] = berry_connection(fam, xp, band, all_dirs, chi).A;
        Am[i] = berry_connection(fam, xm, band, all_dirs, chi).A;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            s.F_curl(i, j) = (Ap[i][j] - Am[i][j]) / (2.0 * h) -
                             (Ap[j][i] - Am[j][i]) / (2.0 * h);

    // sum over states: F_ij = 2 Im sum_b conj(<b|d_i|a>) <b|d_j|a>
    EigenFrame f = eigendecompose_at(fam, x);
    std::vector<std::vector<Complex>> c(n, std::vector<Complex>(f.dim(), 0.0));
    for (int i = 0; i < n; ++i) {
        Matrix dHi = fam.dH(x, i);
        for (int b = 0; b < f.dim(); ++b) {
            if (b == band) continue;
            Complex num =
                f.eigenvectors.col(b).adjoint() * dHi * f.eigenvectors.col(band);
            c[i][b] = num / (f.eigenvalues[band] - f.eigenvalues[b]);
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Complex acc = 0.0;
            for (int b = 0; b < f.dim(); ++b)
                if (b != band) acc += std::conj(c[i][b]) * c[j][b];
            s.F_states(i, j) = 2.0 * acc.imag();
        }

    s.discrepancy = (s.F_curl - s.F_states).cwiseAbs().maxCoeff();
    double scale = 1.0 + s.F_states.cwiseAbs().maxCoeff();
    s.flagged = s.discrepancy > std::max(1e-6, 10.0 * h * h) * scale;
    return s;
}

Circulation loop_circulation(const HamiltonianFamily& fam, const ParameterPath& loop,
                             int band, const PhaseField& chi) {
    if (!loop.closed(1e-9))
        throw std::invalid_argument("loop_circulation: path is not closed");
    auto frames = frames_along_path(fam, loop);
    for (const auto& f : frames) {
        double tol = degeneracy_scale(f.eigenvalues);
        for (int b = 0; b < f.dim(); ++b)
            if (b != band && std::abs(f.eigenvalues[b] - f.eigenvalues[band]) < tol)
                throw NearDegeneracyError(
                    std::abs(f.eigenvalues[b] - f.eigenvalues[band]),
                    "loop_circulation");
    }
    // closure: the final frame must carry the same band vector as the start
    Complex closing = frames.back().eigenvectors.col(band).dot(
        frames.front().eigenvectors.col(band));
    if (std::abs(closing) < 0.5)
        throw AmbiguousMatchError(std::abs(closing),
                                  "loop_circulation: band permuted around loop");
    double phi = 0.0;
    for (std::size_t k = 0; k + 1 < frames.size(); ++k) {
        Complex ov = (phase_of(chi, frames[k].point) *
                      frames[k].eigenvectors.col(band))
                         .dot(phase_of(chi, frames[k + 1].point) *
                              frames[k + 1].eigenvectors.col(band));
        phi += std::arg(ov);
    }
    phi += std::arg((phase_of(chi, frames.back().point) *
                     frames.back().eigenvectors.col(band))
                        .dot(phase_of(chi, frames.front().point) *
                             frames.front().eigenvectors.col(band)));
    Circulation c;
    c.raw = phi;
    c.in_2pi = phi / (2.0 * PI);
    return c;
}

namespace {

RealVector sphere_point(const RealVector& center, double radius, double theta,
                        double phi) {
    RealVector x = center;
    x[0] += radius * std::sin(theta) * std::cos(phi);
    x[1] += radius * std::sin(theta) * std::sin(phi);
    x[2] += radius * std::cos(theta);
    return x;
}

}  // namespace

ChargeResult monopole_charge(const HamiltonianFamily& fam, const RealVector& center,
                             double radius, int band, int n_lat, int n_lon,
                             int threads) {
    if (fam.pdim != 3)
        throw std::invalid_argument("monopole_charge: needs a 3-parameter family");
    // vertex eigenvectors: rings 1..n_lat-1 plus the two poles
    std::vector<std::vector<Vector>> ring(n_lat + 1);
    auto band_vec = [&](double theta, double phi) {
        EigenFrame f = eigendecompose_at(fam, sphere_point(center, radius, theta, phi));
        double tol = degeneracy_scale(f.eigenvalues);
        for (int b = 0; b < f.dim(); ++b)
            if (b != band && std::abs(f.eigenvalues[b] - f.eigenvalues[band]) < tol)
                throw NearDegeneracyError(
                    std::abs(f.eigenvalues[b] - f.eigenvalues[band]),
                    "monopole_charge: degeneracy on the sphere");
        return Vector(f.eigenvectors.col(band));
    };
    for (int j = 0; j <= n_lat; ++j) ring[j].resize(j == 0 || j == n_lat ? 1 : n_lon);
    parallel_for(static_cast<std::size_t>(n_lat + 1), threads, [&](std::size_t j) {
        double theta = PI * static_cast<double>(j) / n_lat;
        if (j == 0 || static_cast<int>(j) == n_lat) {
            ring[j][0] = band_vec(theta, 0.0);
        } else {
            for (int l = 0; l < n_lon; ++l)
                ring[j][l] = band_vec(theta, 2.0 * PI * l / n_lon);
        }
    });

    auto link = [](const Vector& a, const Vector& b) { return std::arg(a.dot(b)); };
    double flux = 0.0;
    // north fan: (pole, v(1,l), v(1,l+1))
    for (int l = 0; l < n_lon; ++l) {
        int lp = (l + 1) % n_lon;
        flux += wrap_angle(link(ring[0][0], ring[1][l]) +
                           link(ring[1][l], ring[1][lp]) +
                           link(ring[1][lp], ring[0][0]));
    }
    // quads ordered for outward flux: (j,l) -> (j+1,l) -> (j+1,l+1) -> (j,l+1)
    for (int j = 1; j + 1 < n_lat; ++j) {
        for (int l = 0; l < n_lon; ++l) {
            int lp = (l + 1) % n_lon;
            double cell = link(ring[j][l], ring[j + 1][l]) +
                          link(ring[j + 1][l], ring[j + 1][lp]) +
                          link(ring[j + 1][lp], ring[j][lp]) +
                          link(ring[j][lp], ring[j][l]);
            flux += wrap_angle(cell);
        }
    }
    // south fan: (pole, v(n_lat-1, l+1), v(n_lat-1, l))
    for (int l = 0; l < n_lon; ++l) {
        int lp = (l + 1) % n_lon;
        flux += wrap_angle(link(ring[n_lat][0], ring[n_lat - 1][lp]) +
                           link(ring[n_lat - 1][lp], ring[n_lat - 1][l]) +
                           link(ring[n_lat - 1][l], ring[n_lat][0]));
    }

    ChargeResult res;
    res.flux = flux;
    double q = flux / (2.0 * PI);
    res.charge = static_cast<int>(std::lround(q));
    res.residual = std::abs(q - res.charge);
    if (res.residual >= 0.05)
        throw RefinementNeededError(res.residual, "monopole_charge");
    return res;
}

namespace {

// patch gauge: sorted bands tracked to the seed frame, each vector phased so
// its overlap with the seed vector is real positive
Vector patch_gauge_vector(const HamiltonianFamily& fam, const RealVector& x,
                          int band, const EigenFrame& seed) {
    EigenFrame f = track_bands(eigendecompose_at(fam, x), seed);
    Vector v = f.eigenvectors.col(band);
    Complex ov = seed.eigenvectors.col(band).dot(v);
    if (std::abs(ov) < 1e-6)
        throw AmbiguousMatchError(std::abs(ov), "patch gauge: seed overlap vanished");
    return v * (std::conj(ov) / std::abs(ov));
}

}  // namespace

TransitionFunction transition_function(const HamiltonianFamily& fam,
                                       const Patch& patchA, const Patch& patchB,
                                       int band,
                                       const std::vector<RealVector>& chain,
                                       const RealVector& sphere_center,
                                       double sphere_radius) {
    if (chain.size() < 2)
        throw std::invalid_argument("transition_function: chain too short");
    EigenFrame seedA = eigendecompose_at(
        fam, RealVector(sphere_center + sphere_radius * patchA.center_dir));
    EigenFrame seedB = eigendecompose_at(
        fam, RealVector(sphere_center + sphere_radius * patchB.center_dir));
    TransitionFunction tf;
    tf.points = chain;
    tf.chi.resize(chain.size());
    double prev_raw = 0.0;
    for (std::size_t k = 0; k < chain.size(); ++k) {
        Vector va = patch_gauge_vector(fam, chain[k], band, seedA);
        Vector vb = patch_gauge_vector(fam, chain[k], band, seedB);
        double raw = std::arg(va.dot(vb));
        if (k == 0) {
            tf.chi[0] = 0.0;  // base-point normalization
        } else {
            tf.chi[k] = tf.chi[k - 1] + wrap_angle(raw - prev_raw);
        }
        prev_raw = raw;
    }
    return tf;
}

CocycleResult cocycle_integer(const TransitionFunction& chiAB,
                              const TransitionFunction& chiBC,
                              const TransitionFunction& chiAC) {
    auto endpoint_close = [](const TransitionFunction& a,
                             const TransitionFunction& b) {
        return (a.points.back() - b.points.back()).norm() < 1e-9 &&
               (a.points.front() - b.points.front()).norm() < 1e-9;
    };
    if (!endpoint_close(chiAB, chiBC) || !endpoint_close(chiAB, chiAC))
        throw std::invalid_argument(
            "cocycle_integer: chains must share base and end points");
    double s = chiAB.chi.back() + chiBC.chi.back() - chiAC.chi.back();
    double z = s / (2.0 * PI);
    CocycleResult res;
    res.integer = static_cast<int>(std::lround(z));
    res.residual = std::abs(z - res.integer);
    if (res.residual >= 0.05)
        throw RefinementNeededError(res.residual, "cocycle_integer");
    return res;
}

ThreeCapCover make_three_cap_cover(const RealVector& center, double radius,
                                   std::size_t chain_samples,
                                   double cap_radius_deg) {
    ThreeCapCover cover;
    double azim[3] = {0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0};
    for (double az : azim) {
        Patch p;
        p.center_dir = RealVector::Zero(3);
        p.center_dir << std::cos(az), std::sin(az), 0.0;
        p.cap_radius = cap_radius_deg * PI / 180.0;
        cover.patches.push_back(p);
    }
    // chains along the bisector meridians, south pole to north pole
    double bis[3] = {PI / 3.0, PI, 5.0 * PI / 3.0};  // AB, BC, AC azimuths
    // AC bisector between azimuth 0 and 240: near side is 300 deg
    for (double az : bis) {
        std::vector<RealVector> chain(chain_samples);
        for (std::size_t k = 0; k < chain_samples; ++k) {
            double theta = PI * (1.0 - static_cast<double>(k) / (chain_samples - 1));
            chain[k] = sphere_point(center, radius, theta, az);
        }
        cover.chains.push_back(std::move(chain));
    }
    return cover;
}

}  // namespace adlab
