#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "becflow/errors.hpp"

namespace becflow {

/// Three-mode Bloch wave psi_q(z) = sqrt(n) e^{iqz} (c0 + cm e^{-2iz} + cp e^{2iz})
/// with the coefficients parametrized by two angles:
///   c0 = cos(theta), cm = sin(theta) sin(phi), cp = sin(theta) cos(phi),
/// which satisfies |c0|^2 + |cm|^2 + |cp|^2 = 1 identically.
struct BlochAnsatz {
    double q = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    double n = 0.0; ///< average density inside the lattice

    std::array<double, 3> coefficients() const {
        return {std::cos(theta), std::sin(theta) * std::sin(phi),
                std::sin(theta) * std::cos(phi)};
    }
};

namespace bloch_detail {

struct Coeffs {
    double c0, cm, cp;
};

inline Coeffs coeffs(double theta, double phi) {
    return {std::cos(theta), std::sin(theta) * std::sin(phi),
            std::sin(theta) * std::cos(phi)};
}

/// Period average of |c0 + cm e^{-2iz} + cp e^{2iz}|^4 for real coefficients.
inline double quartic_average(const Coeffs& c) {
    const double c0 = c.c0, cm = c.cm, cp = c.cp;
    return c0 * c0 * c0 * c0 + cm * cm * cm * cm + cp * cp * cp * cp +
           4.0 * c0 * c0 * (cp * cp + cm * cm) + 4.0 * c0 * c0 * cp * cm +
           4.0 * cp * cp * cm * cm;
}

} // namespace bloch_detail

/// Energy per particle of the three-mode ansatz, averaged over one lattice
/// period, as a closed form in the angle variables:
///
///   e(q, theta, phi) = [ q^2 c0^2 + (q-2)^2 cm^2 + (q+2)^2 cp^2 ] / 2
///                    + s c0 (cp + cm)
///                    + (n beta / 2) <|u|^4>  +  v
///
/// with <|u|^4> = c0^4 + cm^4 + cp^4 + 4 c0^2 (cp^2 + cm^2)
///              + 4 c0^2 cp cm + 4 cp^2 cm^2.
///
/// The expression is certified against energy_quadrature (see the tests);
/// the pure plane-wave limit theta = 0 correctly reduces to
/// q^2/2 + n beta/2 + v with no residual phi dependence.
inline double energy_closed_form(double q, double theta, double phi, double lattice_depth,
                                 double n_beta, double offset = 0.0) {
    const auto c = bloch_detail::coeffs(theta, phi);
    const double kin = 0.5 * (q * q * c.c0 * c.c0 + (q - 2.0) * (q - 2.0) * c.cm * c.cm +
                              (q + 2.0) * (q + 2.0) * c.cp * c.cp);
    const double lat = lattice_depth * c.c0 * (c.cp + c.cm);
    return kin + lat + 0.5 * n_beta * bloch_detail::quartic_average(c) + offset;
}

/// Same energy by direct midpoint quadrature of the energy functional over
/// one period. The integrand is a trigonometric polynomial, so the midpoint
/// rule is exact to roundoff once the panel count exceeds the bandwidth;
/// the refinable panel count makes this the ground truth the closed form is
/// checked against.
inline double energy_quadrature(double q, double theta, double phi, double lattice_depth,
                                double n_beta, double offset = 0.0, std::size_t panels = 512) {
    if (n_beta < 0) throw config_error("energy_quadrature: n_beta must be >= 0");
    const auto c = bloch_detail::coeffs(theta, phi);
    const double h = std::numbers::pi / static_cast<double>(panels);
    double acc = 0.0;
    for (std::size_t j = 0; j < panels; ++j) {
        const double z = (static_cast<double>(j) + 0.5) * h;
        const std::complex<double> em(std::cos(2.0 * z), -std::sin(2.0 * z));
        const std::complex<double> ep = std::conj(em);
        const std::complex<double> u = c.c0 + c.cm * em + c.cp * ep;
        // (e^{iqz} u)' = i q e^{iqz} u + e^{iqz} u'; the plane-wave factor drops
        // out of |.|^2.
        const std::complex<double> du =
            std::complex<double>(0.0, q) * u +
            std::complex<double>(0.0, 2.0) * (c.cp * ep - c.cm * em);
        const double d2 = std::norm(u);
        acc += 0.5 * std::norm(du) + (lattice_depth * std::cos(2.0 * z) + offset) * d2 +
               0.5 * n_beta * d2 * d2;
    }
    return acc / static_cast<double>(panels);
}

/// Chemical potential of the ansatz state: the interaction part of the
/// energy per particle is linear in n, so mu = e + n de/dn adds the
/// quartic term once more.
inline double ansatz_chemical_potential(double q, double theta, double phi,
                                        double lattice_depth, double n_beta,
                                        double offset = 0.0) {
    const auto c = bloch_detail::coeffs(theta, phi);
    return energy_closed_form(q, theta, phi, lattice_depth, n_beta, offset) +
           0.5 * n_beta * bloch_detail::quartic_average(c);
}

namespace bloch_detail {

/// Analytic gradient of the closed-form energy with respect to (theta, phi).
inline std::array<double, 2> energy_gradient(double q, double theta, double phi, double s,
                                             double n_beta) {
    const auto c = coeffs(theta, phi);
    const double c0 = c.c0, cm = c.cm, cp = c.cp;

    const double dI_dc0 = 4.0 * c0 * c0 * c0 + 8.0 * c0 * (cp * cp + cm * cm) + 8.0 * c0 * cp * cm;
    const double dI_dcm = 4.0 * cm * cm * cm + 8.0 * c0 * c0 * cm + 4.0 * c0 * c0 * cp + 8.0 * cp * cp * cm;
    const double dI_dcp = 4.0 * cp * cp * cp + 8.0 * c0 * c0 * cp + 4.0 * c0 * c0 * cm + 8.0 * cp * cm * cm;

    const double dE_dc0 = q * q * c0 + s * (cp + cm) + 0.5 * n_beta * dI_dc0;
    const double dE_dcm = (q - 2.0) * (q - 2.0) * cm + s * c0 + 0.5 * n_beta * dI_dcm;
    const double dE_dcp = (q + 2.0) * (q + 2.0) * cp + s * c0 + 0.5 * n_beta * dI_dcp;

    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cf = std::cos(phi);
    return {dE_dc0 * (-st) + dE_dcm * ct * sp + dE_dcp * ct * cf,
            dE_dcm * cp - dE_dcp * cm};
}

inline std::array<double, 4> energy_hessian(double q, double theta, double phi, double s,
                                            double n_beta) {
    const double h = 1e-5;
    const auto gtp = energy_gradient(q, theta + h, phi, s, n_beta);
    const auto gtm = energy_gradient(q, theta - h, phi, s, n_beta);
    const auto gpp = energy_gradient(q, theta, phi + h, s, n_beta);
    const auto gpm = energy_gradient(q, theta, phi - h, s, n_beta);
    const double htt = (gtp[0] - gtm[0]) / (2.0 * h);
    const double htf = 0.5 * ((gtp[1] - gtm[1]) / (2.0 * h) + (gpp[0] - gpm[0]) / (2.0 * h));
    const double hff = (gpp[1] - gpm[1]) / (2.0 * h);
    return {htt, htf, htf, hff};
}

} // namespace bloch_detail

enum class StationaryKind { minimum, saddle, maximum };

/// One stationary point of the energy surface at fixed quasi-momentum.
struct StationaryPoint {
    double theta = 0.0;
    double phi = 0.0;
    double energy = 0.0;
    double grad_norm = 0.0;
    StationaryKind kind = StationaryKind::minimum;
};

struct StationarySearchOptions {
    std::size_t seed_grid = 64;  ///< seeds per angle direction
    std::size_t max_newton = 100;
    double grad_tol = 1e-11;
    double dedup_distance = 1e-6; ///< on the coefficient vector
    double dedup_energy = 1e-9;
};

/// All stationary points of the energy surface over (theta, phi) at fixed
/// q, found by dense seeding plus Newton refinement on the gradient.
///
/// The parametrization has a coordinate pole at sin(theta) = 0 where the
/// azimuthal gradient vanishes identically; the pure plane-wave state found
/// there is a genuine stationary point only when the lattice coupling is
/// absent, so pole hits are discarded for s > 0.
inline std::vector<StationaryPoint> stationary_points(double q, double lattice_depth,
                                                      double n_beta, double offset = 0.0,
                                                      const StationarySearchOptions& opt = {}) {
    using namespace bloch_detail;
    std::vector<StationaryPoint> found;
    const double pi = std::numbers::pi;
    const std::size_t m = opt.seed_grid;

    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            double th = (static_cast<double>(a) + 0.5) * pi / static_cast<double>(m);
            double ph = (static_cast<double>(b) + 0.5) * 2.0 * pi / static_cast<double>(m);
            bool ok = false;
            for (std::size_t it = 0; it < opt.max_newton; ++it) {
                const auto g = energy_gradient(q, th, ph, lattice_depth, n_beta);
                const double gn = std::hypot(g[0], g[1]);
                if (gn < opt.grad_tol) {
                    ok = true;
                    break;
                }
                const auto H = energy_hessian(q, th, ph, lattice_depth, n_beta);
                const double det = H[0] * H[3] - H[1] * H[2];
                if (std::abs(det) < 1e-14) break;
                double dth = (-g[0] * H[3] + g[1] * H[1]) / det;
                double dph = (-g[1] * H[0] + g[0] * H[2]) / det;
                const double dn = std::hypot(dth, dph);
                if (dn > 0.5) {
                    dth *= 0.5 / dn;
                    dph *= 0.5 / dn;
                }
                th += dth;
                ph += dph;
            }
            if (!ok) continue;

            // Canonicalize into the sin(theta) >= 0 hemisphere.
            th = std::fmod(th, 2.0 * pi);
            if (th < 0) th += 2.0 * pi;
            if (th >= pi) {
                th = 2.0 * pi - th;
                ph += pi;
            }
            ph = std::fmod(ph, 2.0 * pi);
            if (ph < 0) ph += 2.0 * pi;

            if (std::abs(std::sin(th)) < 1e-5 && lattice_depth > 1e-14)
                continue; // coordinate pole, not a stationary state

            const double e = energy_closed_form(q, th, ph, lattice_depth, n_beta, offset);
            const auto c = coeffs(th, ph);
            bool dup = false;
            for (const auto& p : found) {
                if (std::abs(p.energy - e) > opt.dedup_energy) continue;
                const auto c2 = coeffs(p.theta, p.phi);
                const double dplus = std::hypot(c.c0 - c2.c0, std::hypot(c.cm - c2.cm, c.cp - c2.cp));
                const double dminus = std::hypot(c.c0 + c2.c0, std::hypot(c.cm + c2.cm, c.cp + c2.cp));
                if (std::min(dplus, dminus) < opt.dedup_distance) {
                    dup = true;
                    break;
                }
            }
            if (dup) continue;

            StationaryPoint p;
            p.theta = th;
            p.phi = ph;
            p.energy = e;
            const auto g = energy_gradient(q, th, ph, lattice_depth, n_beta);
            p.grad_norm = std::hypot(g[0], g[1]);
            const auto H = energy_hessian(q, th, ph, lattice_depth, n_beta);
            const double tr = H[0] + H[3];
            const double det = H[0] * H[3] - H[1] * H[2];
            if (det > 0)
                p.kind = tr > 0 ? StationaryKind::minimum : StationaryKind::maximum;
            else
                p.kind = StationaryKind::saddle;
            found.push_back(p);
        }
    }
    std::sort(found.begin(), found.end(),
              [](const StationaryPoint& a, const StationaryPoint& b) { return a.energy < b.energy; });
    return found;
}

enum class Branch { lower, upper, loop };

inline const char* branch_name(Branch b) {
    switch (b) {
        case Branch::lower: return "lower";
        case Branch::upper: return "upper";
        default: return "loop";
    }
}

struct BandPoint {
    double q = 0.0;
    double energy_per_particle = 0.0;
    double chemical_potential = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    Branch branch = Branch::lower;
    StationaryKind kind = StationaryKind::minimum;
};

struct BandStructure {
    std::vector<BandPoint> points;
    std::vector<double> failed_q; ///< q values where no stationary point converged
};

/// Band structure from the stationary points of the three-mode energy
/// surface. At each q the lowest point is the lower band, the two highest
/// continue the second and third linear branches (upper), and anything in
/// between belongs to the loop that opens at the band edge once the
/// interaction dominates the lattice depth. A constant offset shifts all
/// energies rigidly and leaves the stationary angles untouched.
inline BandStructure band_structure(std::span<const double> q_values, double lattice_depth,
                                    double n_beta, double offset = 0.0,
                                    const StationarySearchOptions& opt = {}) {
    BandStructure out;
    for (double q : q_values) {
        const auto pts = stationary_points(q, lattice_depth, n_beta, offset, opt);
        if (pts.empty()) {
            out.failed_q.push_back(q);
            continue;
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            BandPoint bp;
            bp.q = q;
            bp.energy_per_particle = pts[i].energy;
            bp.chemical_potential = ansatz_chemical_potential(q, pts[i].theta, pts[i].phi,
                                                              lattice_depth, n_beta, offset);
            bp.theta = pts[i].theta;
            bp.phi = pts[i].phi;
            bp.kind = pts[i].kind;
            if (i == 0)
                bp.branch = Branch::lower;
            else if (pts.size() >= 3 && i >= pts.size() - 2)
                bp.branch = Branch::upper;
            else
                bp.branch = Branch::loop;
            out.points.push_back(bp);
        }
    }
    return out;
}

/// Loop presence at the first band edge: the three linear branches acquire
/// extra stationary companions at |q| = 1 once n beta exceeds the lattice
/// depth.
inline bool has_band_edge_loop(double lattice_depth, double n_beta, double offset = 0.0,
                               const StationarySearchOptions& opt = {}) {
    return stationary_points(1.0, lattice_depth, n_beta, offset, opt).size() > 3;
}

/// First band gap at the zone edge of the degenerate two-mode problem: the
/// e^{iz} / e^{-iz} pair split symmetrically by the lattice coupling s/2,
/// giving a gap of exactly s at leading order. (The three-mode band
/// structure shifts both edge states through the far mode and its gap
/// differs from s at order s^3.)
inline double zone_edge_gap_two_mode(double lattice_depth) {
    const double diag = 0.5, coupling = 0.5 * lattice_depth;
    const double lo = diag - std::abs(coupling);
    const double hi = diag + std::abs(coupling);
    return hi - lo;
}

/// Real amplitudes of the period-matched ground ansatz psi = d0 + d1 cos(2z).
struct DCoefficients {
    double d0 = 0.0;
    double d1 = 0.0;
    double n = 0.0; ///< d0^2 + d1^2/2
    double mu = 0.0;
    double beta = 0.0;
    double lattice_depth = 0.0;

    /// Residuals of the two stationarity equations.
    std::array<double, 2> residuals() const {
        const double r1 = 2.0 * beta * d0 * d0 * d0 + d0 * (3.0 * beta * d1 * d1 - 2.0 * mu) +
                          lattice_depth * d1;
        const double r2 = 3.0 * beta * d1 * d1 * d1 +
                          4.0 * d1 * (2.0 + 3.0 * beta * d0 * d0 - mu) +
                          4.0 * lattice_depth * d0;
        return {r1, r2};
    }
};

/// Solves the coupled cubic system for (d0, d1) at fixed chemical potential
/// by numerical continuation in the lattice depth, starting from the
/// uniform solution d0 = sqrt(mu/beta), d1 = 0 at depth zero. Newton steps
/// use the analytic Jacobian; the step in depth is capped so the branch is
/// followed without jumping at near-tangencies.
inline DCoefficients solve_d_system(double mu, double beta, double lattice_depth,
                                    double depth_step = 0.005) {
    if (!(beta > 0)) throw config_error("solve_d_system: beta must be positive");
    if (lattice_depth < 0) throw config_error("solve_d_system: lattice depth must be >= 0");
    if (!(depth_step > 0)) throw config_error("solve_d_system: depth step must be positive");
    if (!(mu > 0))
        throw numerics_error("solve_d_system: branch from depth 0 requires mu > 0, got mu = " +
                             std::to_string(mu));

    double d0 = std::sqrt(mu / beta);
    double d1 = 0.0;
    double s = 0.0;
    const double scale = std::max(1.0, mu);
    while (s < lattice_depth - 1e-15) {
        const double s_prev = s;
        s = std::min(s + depth_step, lattice_depth);
        bool ok = false;
        double x0 = d0, x1 = d1;
        for (int it = 0; it < 60; ++it) {
            const double f1 = 2.0 * beta * x0 * x0 * x0 + x0 * (3.0 * beta * x1 * x1 - 2.0 * mu) + s * x1;
            const double f2 = 3.0 * beta * x1 * x1 * x1 + 4.0 * x1 * (2.0 + 3.0 * beta * x0 * x0 - mu) +
                              4.0 * s * x0;
            if (std::abs(f1) < 1e-14 * scale && std::abs(f2) < 1e-14 * scale) {
                ok = true;
                break;
            }
            const double j11 = 6.0 * beta * x0 * x0 + 3.0 * beta * x1 * x1 - 2.0 * mu;
            const double j12 = 6.0 * beta * x0 * x1 + s;
            const double j21 = 24.0 * beta * x0 * x1 + 4.0 * s;
            const double j22 = 9.0 * beta * x1 * x1 + 4.0 * (2.0 + 3.0 * beta * x0 * x0 - mu);
            const double det = j11 * j22 - j12 * j21;
            if (std::abs(det) < 1e-300 || !std::isfinite(det)) break;
            x0 -= (f1 * j22 - f2 * j12) / det;
            x1 -= (f2 * j11 - f1 * j21) / det;
            if (!std::isfinite(x0) || !std::isfinite(x1)) break;
        }
        if (!ok)
            throw numerics_error("solve_d_system: branch terminated at depth " +
                                 std::to_string(s_prev));
        d0 = x0;
        d1 = x1;
    }

    DCoefficients d;
    d.d0 = d0;
    d.d1 = d1;
    d.n = d0 * d0 + 0.5 * d1 * d1;
    d.mu = mu;
    d.beta = beta;
    d.lattice_depth = lattice_depth;
    return d;
}

/// Density of the q = 0 ansatz evaluated as the direct square
/// (d0 + d1 cos 2z)^2. This is the reference evaluator.
inline std::vector<double> bloch_density(const DCoefficients& d, std::span<const double> z) {
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double a = d.d0 + d.d1 * std::cos(2.0 * z[i]);
        out[i] = a * a;
    }
    return out;
}

/// Alternate expanded harmonic form of the ansatz density, with a sin(4z)
/// double-period term:
///   n + 2 d0 d1 cos(2z) + (d1^2/2) sin(4z).
/// Kept for comparison only; it differs from the direct square, whose
/// double-period term is (d1^2/2) cos(4z), by (d1^2/2)(sin 4z - cos 4z).
/// The double-period term is negligible whenever d1^2/2 << 2|d0 d1|.
inline std::vector<double> bloch_density_expanded(const DCoefficients& d,
                                                  std::span<const double> z) {
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i)
        out[i] = d.d0 * d.d0 + 0.5 * d.d1 * d.d1 + 2.0 * d.d0 * d.d1 * std::cos(2.0 * z[i]) +
                 0.5 * d.d1 * d.d1 * std::sin(4.0 * z[i]);
    return out;
}

/// Particle number gained when the cloud advances by one lattice site:
/// the ansatz density integrated over one period.
inline double delta_N(const DCoefficients& d) { return std::numbers::pi * d.n; }

} // namespace becflow
