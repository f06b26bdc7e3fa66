#include "micz/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "micz/errors.hpp"
#include "micz/numerics.hpp"

namespace micz {

namespace {

bool is_elliptic(RadicandVar v) {
    return v == RadicandVar::XiElliptic || v == RadicandVar::EtaElliptic;
}

}  // namespace

SeparationConstants extract_constants(const PhaseState& s, const SystemSpec& spec) {
    SeparationConstants c;
    const ConservedSet cons = conserved_quantities(s, spec);
    if (!cons.separation)
        throw FamilyMismatchError("separation constant defined only for the separable families");
    if (spec.family == Family::TwoCenterElliptic) {
        const EllipticMomenta p = elliptic_momenta(s.r, s.v, spec.a, spec.cfg);
        c.p_phi = p.p_phi;
        const double H = cons.E;
        c.E = H;
        c.sep_n = *cons.separation + 2.0 * spec.a * spec.a * H;  // I_e = n - 2 a^2 E
    } else if (spec.family == Family::StarkZeemanParabolic) {
        const ParabolicMomenta p = parabolic_momenta(s.r, s.v, spec.cfg);
        c.p_phi = p.p_phi;
        c.E = cons.E + 0.5 * spec.cfg.e * spec.cfg.B0.z * p.p_phi;  // shifted energy
        c.sep_n = *cons.separation;                                  // I_p = n
    } else {
        throw FamilyMismatchError("extract_constants: family has no separated form");
    }
    return c;
}

Radicand::Radicand(SystemSpec spec, SeparationConstants constants, RadicandVar var)
    : spec_(std::move(spec)), constants_(constants), var_(var) {
    const bool elliptic_family = spec_.family == Family::TwoCenterElliptic;
    if (is_elliptic(var_) != elliptic_family)
        throw FamilyMismatchError("radicand variable does not match the spec family");
}

double Radicand::operator()(double x) const {
    const double E = constants_.E, n = constants_.sep_n, p = constants_.p_phi;
    switch (var_) {
        case RadicandVar::XiElliptic: {
            const double u2 = x * x - 1.0;
            if (u2 <= 0) return -std::numeric_limits<double>::infinity();
            return 2.0 * spec_.a * spec_.a * E + (n - elliptic_potential_xi(x, p, spec_)) / u2;
        }
        case RadicandVar::EtaElliptic: {
            const double v2 = 1.0 - x * x;
            if (v2 <= 0) return -std::numeric_limits<double>::infinity();
            return 2.0 * spec_.a * spec_.a * E - (n + elliptic_potential_eta(x, p, spec_)) / v2;
        }
        case RadicandVar::XiParabolic: {
            if (x <= 0) return -std::numeric_limits<double>::infinity();
            return 2.0 * E + (n - parabolic_potential_xi(x, p, spec_)) / x;
        }
        case RadicandVar::EtaParabolic: {
            if (x <= 0) return -std::numeric_limits<double>::infinity();
            return 2.0 * E - (n + parabolic_potential_eta(x, p, spec_)) / x;
        }
    }
    return 0.0;
}

double Radicand::derivative(double x) const {
    const double h = 1e-7 * std::max(1.0, std::abs(x));
    return ((*this)(x + h) - (*this)(x - h)) / (2.0 * h);
}

double Radicand::second_derivative(double x) const {
    const double h = 1e-5 * std::max(1.0, std::abs(x));
    return ((*this)(x + h) - 2.0 * (*this)(x) + (*this)(x - h)) / (h * h);
}

double Radicand::domain_min() const {
    switch (var_) {
        case RadicandVar::XiElliptic: return 1.0;
        case RadicandVar::EtaElliptic: return -1.0;
        default: return 0.0;
    }
}

double Radicand::domain_max() const {
    return var_ == RadicandVar::EtaElliptic ? 1.0 : std::numeric_limits<double>::infinity();
}

double Radicand::time_weight(double) const {
    return is_elliptic(var_) ? spec_.a * spec_.a : 0.5;
}

double Radicand::azimuth_weight(double x) const {
    const double p = constants_.p_phi;
    switch (var_) {
        case RadicandVar::XiElliptic: {
            const double u2 = x * x - 1.0;
            return (p + spec_.s_minus() * x) / (u2 * u2);
        }
        case RadicandVar::EtaElliptic: {
            const double v2 = 1.0 - x * x;
            return (p + spec_.s_plus() * x) / (v2 * v2);
        }
        case RadicandVar::XiParabolic:
            return 0.5 * (p - spec_.cfg.s(0)) / (x * x);
        case RadicandVar::EtaParabolic:
            return 0.5 * (p + spec_.cfg.s(0)) / (x * x);
    }
    return 0.0;
}

double Radicand::trajectory_weight(double x) const {
    switch (var_) {
        case RadicandVar::XiElliptic: return 1.0 / (x * x - 1.0);
        case RadicandVar::EtaElliptic: return 1.0 / (1.0 - x * x);
        default: return 1.0 / x;
    }
}

Radicand radicand(const SystemSpec& spec, const SeparationConstants& constants, RadicandVar var) {
    return Radicand(spec, constants, var);
}

std::vector<LibrationInterval> turning_points(const Radicand& R, double search_lo,
                                              double search_hi, int grid) {
    if (!(search_hi > search_lo)) throw InvalidArgument("turning_points: empty search interval");
    const double lo = std::max(search_lo, R.domain_min() + 1e-12);
    const double hi = std::min(search_hi, R.domain_max() - 1e-12);

    std::vector<double> xs(grid), fs(grid);
    for (int i = 0; i < grid; ++i) {
        xs[i] = lo + (hi - lo) * i / (grid - 1.0);
        const double f = R(xs[i]);
        fs[i] = std::isfinite(f) ? f : -std::numeric_limits<double>::max();
    }

    std::vector<double> roots;
    for (int i = 0; i + 1 < grid; ++i) {
        if (fs[i] == 0.0) {
            roots.push_back(xs[i]);
        } else if (fs[i] * fs[i + 1] < 0.0) {
            roots.push_back(
                brent_root([&R](double x) { return R(x); }, xs[i], xs[i + 1], 1e-14));
        }
    }
    if (fs[grid - 1] == 0.0) roots.push_back(xs[grid - 1]);
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](double a, double b) { return std::abs(a - b) < 1e-12; }),
                roots.end());

    std::vector<LibrationInterval> out;
    const double fmax = *std::max_element(fs.begin(), fs.end());
    if (roots.empty()) {
        if (fmax < 0.0) {
            // Either truly negative or a grazing double root: refine the maximum.
            const int imax = static_cast<int>(std::max_element(fs.begin(), fs.end()) - fs.begin());
            double xa = xs[std::max(0, imax - 1)], xb = xs[std::min(grid - 1, imax + 1)];
            // golden-section refinement of the maximum
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            double c = xb - gr * (xb - xa), d = xa + gr * (xb - xa);
            for (int it = 0; it < 200 && xb - xa > 1e-13 * std::max(1.0, std::abs(xb)); ++it) {
                if (R(c) > R(d)) {
                    xb = d;
                } else {
                    xa = c;
                }
                c = xb - gr * (xb - xa);
                d = xa + gr * (xb - xa);
            }
            const double xstar = 0.5 * (xa + xb);
            const double scale = std::max(1.0, std::abs(R.constants().E));
            if (std::abs(R(xstar)) < 1e-8 * scale) {
                out.push_back({xstar, xstar, LibrationKind::Degenerate, true, true});
                return out;
            }
            throw NoLibrationError();
        }
        // Positive throughout the window: scattering-like with no interior roots.
        out.push_back({lo, hi, LibrationKind::Scattering, false, false});
        return out;
    }

    auto positive_between = [&](double a, double b) { return R(0.5 * (a + b)) > 0.0; };

    // Leading edge: positive from the domain edge down to the first root.
    if (fs[0] > 0.0 && positive_between(lo, roots.front()))
        out.push_back({lo, roots.front(), LibrationKind::Bound, false, true});
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
        if (positive_between(roots[i], roots[i + 1]))
            out.push_back({roots[i], roots[i + 1], LibrationKind::Bound, true, true});
    }
    if (fs[grid - 1] > 0.0 && positive_between(roots.back(), hi))
        out.push_back({roots.back(), hi, LibrationKind::Scattering, true, false});

    if (out.empty()) {
        // Roots found but no positive stretch: all are grazing double roots.
        out.push_back({roots.front(), roots.front(), LibrationKind::Degenerate, true, true});
    }
    return out;
}

namespace {

// Integral of w(x) dx / sqrt(R) over [x0,x1] within the libration interval.
// Substitutions remove the inverse-square-root endpoint singularities:
// both ends roots -> x = lo + (hi-lo) sin^2(u); one end root -> x = root +- w^2.
double weighted_segment(const Radicand& R, const LibrationInterval& li, double x0, double x1,
                        const std::function<double(double)>& w, int nodes) {
    if (li.kind == LibrationKind::Degenerate) throw DegenerateIntervalError();
    if (x1 < x0) std::swap(x0, x1);
    x0 = std::clamp(x0, li.lo, li.hi);
    x1 = std::clamp(x1, li.lo, li.hi);
    if (x1 - x0 < 1e-15) return 0.0;
    const double lo = li.lo, hi = li.hi, len = hi - lo;

    if (li.lo_is_root && li.hi_is_root) {
        // x = lo + len sin^2(u): dx = 2 len s c du, sqrt(R) = sqrt(q h) with
        // q = (x-lo)(hi-x) = len^2 s^2 c^2 and h = R/q smooth and positive.
        const auto g = [&](double u) {
            const double s = std::sin(u);
            const double x = lo + len * s * s;
            const double q = (x - lo) * (hi - x);
            double h;
            if (q > 1e-300) {
                h = R(x) / q;
            } else {
                h = std::abs(R.derivative(x < 0.5 * (lo + hi) ? lo : hi)) / len;
            }
            if (!(h > 0)) h = std::abs(h) + 1e-300;
            return 2.0 * w(x) / std::sqrt(h);
        };
        const double u0 = std::asin(std::sqrt(std::clamp((x0 - lo) / len, 0.0, 1.0)));
        const double u1 = std::asin(std::sqrt(std::clamp((x1 - lo) / len, 0.0, 1.0)));
        return gauss_legendre_integrate(g, u0, u1, nodes);
    }

    if (li.lo_is_root && !li.hi_is_root) {
        // x = lo + u^2, sqrt(R) = u sqrt(h), h = R/(x-lo)
        const auto g = [&](double u) {
            const double x = lo + u * u;
            const double d = x - lo;
            double h = d > 1e-300 ? R(x) / d : std::abs(R.derivative(lo));
            if (!(h > 0)) h = std::abs(h) + 1e-300;
            return 2.0 * w(x) / std::sqrt(h);
        };
        return gauss_legendre_integrate(g, std::sqrt(std::max(0.0, x0 - lo)),
                                        std::sqrt(std::max(0.0, x1 - lo)), nodes);
    }
    if (!li.lo_is_root && li.hi_is_root) {
        const auto g = [&](double u) {
            const double x = hi - u * u;
            const double d = hi - x;
            double h = d > 1e-300 ? R(x) / d : std::abs(R.derivative(hi));
            if (!(h > 0)) h = std::abs(h) + 1e-300;
            return 2.0 * w(x) / std::sqrt(h);
        };
        // integrate ascending in u: swaps orientation, compensate with sign
        return gauss_legendre_integrate(g, std::sqrt(std::max(0.0, hi - x1)),
                                        std::sqrt(std::max(0.0, hi - x0)), nodes);
    }
    // No singular ends.
    const auto g = [&](double x) {
        const double r = R(x);
        return r > 0 ? w(x) / std::sqrt(r) : 0.0;
    };
    return gauss_legendre_integrate(g, x0, x1, nodes);
}

// Stationary (double-root) estimate: harmonic period about x*.
double harmonic_period(const Radicand& R, double xstar) {
    const double d2 = R.second_derivative(xstar);
    if (!(d2 < 0)) throw DegenerateIntervalError();
    double omega2 = 0.0;
    if (is_elliptic(R.var())) {
        // xidot = (xi^2-1) p_xi / (a^2 (xi^2-eta^2)); eta frozen at the twin
        // stationary value is not known here, so use the xi-only prefactor
        // with eta ~ xstar mirrored into the parabolic-style estimate.
        const double a2 = R.spec().a * R.spec().a;
        const double u2 = xstar * xstar - 1.0;
        const double S = std::max(xstar * xstar, 1e-12);
        omega2 = -0.5 * d2 * (u2 / (a2 * S)) * (u2 / (a2 * S));
    } else {
        // xidot = 4 xi p_xi / (xi+eta) = (2 xi / Sigma) sqrt(R); Sigma ~ 2 xi*.
        const double pref = 2.0 * xstar / (2.0 * xstar);
        omega2 = -0.5 * d2 * pref * pref;
    }
    if (!(omega2 > 0)) throw DegenerateIntervalError();
    return 2.0 * M_PI / std::sqrt(omega2);
}

}  // namespace

QuadratureResult time_integral(const Radicand& R, const LibrationInterval& li, int nodes) {
    QuadratureResult out;
    if (li.kind == LibrationKind::Degenerate) {
        out.value = harmonic_period(R, li.lo);
        out.degenerate = true;
        return out;
    }
    out.value = weighted_segment(R, li, li.lo, li.hi,
                                 [&R](double x) { return R.time_weight(x); }, nodes);
    return out;
}

QuadratureResult azimuth_integral(const Radicand& R, const LibrationInterval& li, int nodes) {
    QuadratureResult out;
    if (li.kind == LibrationKind::Degenerate) {
        out.degenerate = true;
        out.value = 0.0;
        return out;
    }
    out.value = weighted_segment(R, li, li.lo, li.hi,
                                 [&R](double x) { return R.azimuth_weight(x); }, nodes);
    return out;
}

double segment_time_integral(const Radicand& R, const LibrationInterval& li, double x0, double x1,
                             int nodes) {
    return weighted_segment(R, li, x0, x1, [&R](double x) { return R.time_weight(x); }, nodes);
}

double segment_azimuth_integral(const Radicand& R, const LibrationInterval& li, double x0,
                                double x1, int nodes) {
    return weighted_segment(R, li, x0, x1, [&R](double x) { return R.azimuth_weight(x); }, nodes);
}

double segment_trajectory_integral(const Radicand& R, const LibrationInterval& li, double x0,
                                   double x1, int nodes) {
    return weighted_segment(R, li, x0, x1, [&R](double x) { return R.trajectory_weight(x); },
                            nodes);
}

TrajectoryRelation trajectory_relation(const Radicand& R_xi, const LibrationInterval& li_xi,
                                       const Radicand& R_eta, const LibrationInterval& li_eta,
                                       int samples) {
    TrajectoryRelation rel;
    rel.xi.resize(samples);
    rel.F_xi.resize(samples);
    rel.eta.resize(samples);
    rel.F_eta.resize(samples);
    for (int i = 0; i < samples; ++i) {
        const double fx = li_xi.lo + (li_xi.hi - li_xi.lo) * i / (samples - 1.0);
        const double fe = li_eta.lo + (li_eta.hi - li_eta.lo) * i / (samples - 1.0);
        rel.xi[i] = fx;
        rel.eta[i] = fe;
        rel.F_xi[i] = i == 0 ? 0.0 : rel.F_xi[i - 1] + segment_trajectory_integral(
                                                           R_xi, li_xi, rel.xi[i - 1], fx);
        rel.F_eta[i] = i == 0 ? 0.0 : rel.F_eta[i - 1] + segment_trajectory_integral(
                                                             R_eta, li_eta, rel.eta[i - 1], fe);
    }
    return rel;
}

namespace {

struct SampleCoords {
    double x = 0, p = 0;  // separated coordinate and its conjugate momentum
};

// Predicted increment of an accumulated quadrature between two samples of one
// separated variable, splitting the path at a turning point when the momentum
// changes sign.
double branch_increment(const Radicand& R, const LibrationInterval& li, const SampleCoords& from,
                        const SampleCoords& to,
                        double (*seg)(const Radicand&, const LibrationInterval&, double, double,
                                      int),
                        int nodes) {
    const bool sign_from = from.p >= 0.0;
    const bool sign_to = to.p >= 0.0;
    if (sign_from == sign_to) return seg(R, li, from.x, to.x, nodes);
    if (sign_from && !sign_to)  // up through the outer turning point
        return seg(R, li, from.x, li.hi, nodes) + seg(R, li, to.x, li.hi, nodes);
    return seg(R, li, li.lo, from.x, nodes) + seg(R, li, li.lo, to.x, nodes);
}

}  // namespace

ValidationReport validate_quadrature(const Trajectory& traj, const SystemSpec& spec) {
    if (traj.samples.size() < 3)
        throw InvalidArgument("validate_quadrature needs a sampled trajectory");
    const bool elliptic = spec.family == Family::TwoCenterElliptic;
    if (!elliptic && spec.family != Family::StarkZeemanParabolic)
        throw FamilyMismatchError("validate_quadrature: family has no quadrature solution");

    const SeparationConstants c = extract_constants(traj.samples.front(), spec);
    const Radicand R_xi(spec, c, elliptic ? RadicandVar::XiElliptic : RadicandVar::XiParabolic);
    const Radicand R_eta(spec, c, elliptic ? RadicandVar::EtaElliptic : RadicandVar::EtaParabolic);

    // Coordinates and momenta at every sample.
    std::vector<SampleCoords> xi(traj.samples.size()), eta(traj.samples.size());
    double xi_max = 0.0;
    for (std::size_t k = 0; k < traj.samples.size(); ++k) {
        const PhaseState& s = traj.samples[k];
        if (elliptic) {
            const EllipticPoint q = to_elliptic(s.r, spec.a);
            const EllipticMomenta p = elliptic_momenta(s.r, s.v, spec.a, spec.cfg);
            xi[k] = {q.xi, p.p_xi};
            eta[k] = {q.eta, p.p_eta};
        } else {
            const ParabolicPoint q = to_parabolic(s.r);
            const ParabolicMomenta p = parabolic_momenta(s.r, s.v, spec.cfg);
            xi[k] = {q.xi, p.p_xi};
            eta[k] = {q.eta, p.p_eta};
        }
        xi_max = std::max(xi_max, xi[k].x);
    }

    // Libration intervals containing the motion.
    const auto find_interval = [](const std::vector<LibrationInterval>& intervals, double x_lo,
                                  double x_hi) -> LibrationInterval {
        for (const LibrationInterval& li : intervals) {
            if (li.kind == LibrationKind::Degenerate) continue;
            if (x_lo >= li.lo - 1e-6 && x_hi <= li.hi + 1e-6) return li;
        }
        throw BranchTrackingFailureError(
            "trajectory's coordinate range is not contained in one libration interval");
    };
    double xi_seen_lo = std::numeric_limits<double>::max(), xi_seen_hi = 0.0;
    double eta_seen_lo = std::numeric_limits<double>::max(), eta_seen_hi = -eta_seen_lo;
    for (std::size_t k = 0; k < xi.size(); ++k) {
        xi_seen_lo = std::min(xi_seen_lo, xi[k].x);
        xi_seen_hi = std::max(xi_seen_hi, xi[k].x);
        eta_seen_lo = std::min(eta_seen_lo, eta[k].x);
        eta_seen_hi = std::max(eta_seen_hi, eta[k].x);
    }
    const double xi_cap = elliptic ? std::max(4.0, 3.0 * xi_max) : std::max(10.0, 3.0 * xi_max);
    const LibrationInterval li_xi =
        find_interval(turning_points(R_xi, R_xi.domain_min(), xi_cap), xi_seen_lo, xi_seen_hi);
    const double eta_cap = elliptic ? 1.0 : std::max(10.0, 3.0 * eta_seen_hi);
    const LibrationInterval li_eta = find_interval(
        turning_points(R_eta, R_eta.domain_min(), eta_cap), eta_seen_lo, eta_seen_hi);

    // Accumulate predicted t and phi along the samples.
    ValidationReport report;
    report.xi_interval = li_xi;
    report.eta_interval = li_eta;

    // Unwrapped azimuth from the Cartesian samples.
    std::vector<double> phi_actual(traj.samples.size());
    double prev_raw = std::atan2(traj.samples[0].r.y, traj.samples[0].r.x);
    double offset = 0.0;
    phi_actual[0] = prev_raw;
    for (std::size_t k = 1; k < traj.samples.size(); ++k) {
        const double raw = std::atan2(traj.samples[k].r.y, traj.samples[k].r.x);
        double d = raw - prev_raw;
        if (d > M_PI) offset -= 2.0 * M_PI;
        if (d < -M_PI) offset += 2.0 * M_PI;
        phi_actual[k] = raw + offset;
        prev_raw = raw;
    }

    const double eB0 = spec.cfg.e * spec.cfg.B0.z;
    double t_pred = traj.samples.front().t;
    double phi_pred = phi_actual.front();
    const int nodes = 64;
    for (std::size_t k = 0; k + 1 < traj.samples.size(); ++k) {
        const double dt_actual = traj.samples[k + 1].t - traj.samples[k].t;
        const double dt = branch_increment(R_xi, li_xi, xi[k], xi[k + 1], &segment_time_integral,
                                           nodes) +
                          branch_increment(R_eta, li_eta, eta[k], eta[k + 1],
                                           &segment_time_integral, nodes);
        const double dphi = branch_increment(R_xi, li_xi, xi[k], xi[k + 1],
                                             &segment_azimuth_integral, nodes) +
                            branch_increment(R_eta, li_eta, eta[k], eta[k + 1],
                                             &segment_azimuth_integral, nodes) -
                            0.5 * eB0 * dt_actual;
        t_pred += dt;
        phi_pred += dphi;
        report.max_dt_residual =
            std::max(report.max_dt_residual, std::abs(t_pred - traj.samples[k + 1].t));
        report.max_dphi_residual =
            std::max(report.max_dphi_residual, std::abs(phi_pred - phi_actual[k + 1]));
        ++report.samples_compared;
    }
    return report;
}

}  // namespace micz
