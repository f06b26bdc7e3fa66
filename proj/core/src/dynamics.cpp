#include "micz/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "micz/errors.hpp"

namespace micz {

namespace {

using State6 = std::array<double, 6>;

State6 pack(const Vec3& r, const Vec3& v) { return {r.x, r.y, r.z, v.x, v.y, v.z}; }
Vec3 head(const State6& y) { return {y[0], y[1], y[2]}; }
Vec3 tail(const State6& y) { return {y[3], y[4], y[5]}; }

// Newton-Lorentz right-hand side for the flat families. Velocity form: the
// monopole fields enter only through B, so Dirac strings never appear here.
StateDerivative flat_rhs(const PhaseState& s, const SystemSpec& spec) {
    const DyonConfig& cfg = spec.cfg;
    Vec3 B{};           // sum_i s_i d_i / r_i^3  (charge e already absorbed)
    Vec3 grad_root{};   // gradient of sum_i s_i/r_i - e B0 z
    Vec3 f_coulomb{};
    double root = 0.0;
    for (std::size_t i = 0; i < cfg.dyons.size(); ++i) {
        const Vec3 d = s.r - cfg.dyons[i].position;
        const double ri = d.norm();
        if (ri < 1e-13) throw AtCenterError(static_cast<int>(i));
        const double inv3 = 1.0 / (ri * ri * ri);
        B += d * (cfg.s(i) * inv3);
        root += cfg.s(i) / ri;
        grad_root -= d * (cfg.s(i) * inv3);
        f_coulomb += d * (cfg.e * cfg.dyons[i].q * inv3);
    }
    root -= cfg.e * cfg.B0.z * s.r.z;
    grad_root -= Vec3{0, 0, cfg.e * cfg.B0.z};

    StateDerivative out;
    out.dr = s.v;
    out.dv = s.v.cross(B) + s.v.cross(cfg.B0) * cfg.e  // magnetic force
             - grad_root * root                        // replacement quadratic
             + f_coulomb                               // -grad of sum e q_i/r_i
             + Vec3{0, 0, cfg.e * cfg.E0.z};           // -grad of -e E0 z
    return out;
}

Vec3 curved_potential_gradient(const Vec3& r, const SystemSpec& spec, const GreenFunction& green) {
    double phi_g = 0.0;
    std::vector<double> ri(spec.cfg.dyons.size());
    for (std::size_t i = 0; i < spec.cfg.dyons.size(); ++i) {
        ri[i] = (r - spec.cfg.dyons[i].position).norm();
        if (ri[i] < 1e-13) throw AtCenterError(static_cast<int>(i));
        phi_g += spec.cfg.dyons[i].g * green(ri[i]);
    }
    const double e = spec.cfg.e;
    Vec3 grad{};
    for (std::size_t i = 0; i < spec.cfg.dyons.size(); ++i) {
        const Vec3 dhat = (r - spec.cfg.dyons[i].position) / ri[i];
        const double dphi = green.derivative(ri[i]);
        grad += dhat * (dphi * (e * e * phi_g * spec.cfg.dyons[i].g + e * spec.cfg.dyons[i].q));
    }
    return grad;
}

// Curved family in the gauge-free form: state carries pi = G v, and
//   pi_dot = e v x B + v^2 grad(G)/2 - grad(U),  r_dot = pi / G.
StateDerivative curved_rhs(const PhaseState& s, const SystemSpec& spec,
                           const GreenFunction& green) {
    const double rnorm = s.r.norm();
    const double G = spec.profile.G(rnorm);
    if (!(G > 0)) throw DomainError("metric factor G must be positive");
    const Vec3 v = s.v / G;
    Vec3 B{};
    for (std::size_t i = 0; i < spec.cfg.dyons.size(); ++i) {
        const Vec3 d = s.r - spec.cfg.dyons[i].position;
        const double ri = d.norm();
        if (ri < 1e-13) throw AtCenterError(static_cast<int>(i));
        B += d * (spec.cfg.s(i) / (ri * ri * ri));
    }
    const Vec3 gradG = rnorm > 1e-13 ? s.r * (spec.profile.dG_dr(rnorm) / rnorm) : Vec3{};
    StateDerivative out;
    out.dr = v;
    out.dv = v.cross(B) + gradG * (0.5 * v.norm2()) - curved_potential_gradient(s.r, spec, green);
    return out;
}

Vec3 total_eA(const Vec3& r, const DyonConfig& cfg) {
    Vec3 eA{};
    for (std::size_t i = 0; i < cfg.dyons.size(); ++i)
        eA += dirac_vector_potential(r, cfg.dyons[i].position, cfg.dyons[i].string,
                                     static_cast<int>(i)) *
              cfg.s(i);
    return eA;
}

// Curved family, canonical form with explicit strings: state carries the
// canonical momentum p = pi + eA(r).
StateDerivative curved_canonical_rhs(const PhaseState& s, const SystemSpec& spec,
                                     const GreenFunction& green, const DyonConfig& gauged) {
    const double rnorm = s.r.norm();
    const double G = spec.profile.G(rnorm);
    if (!(G > 0)) throw DomainError("metric factor G must be positive");
    const Vec3 pi = s.v - total_eA(s.r, gauged);

    Vec3 force{};
    const double piv[3] = {pi.x, pi.y, pi.z};
    for (std::size_t i = 0; i < gauged.dyons.size(); ++i) {
        const Mat3 J = dirac_vector_potential_jacobian(s.r, gauged.dyons[i].position,
                                                       gauged.dyons[i].string, static_cast<int>(i));
        const double si = gauged.s(i);
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) acc += piv[k] * J.m[k][j];
            (&force.x)[j] += si * acc / G;
        }
    }
    const double dG = spec.profile.dG_dr(rnorm);
    const Vec3 gradG_term =
        rnorm > 1e-13 ? s.r * (pi.norm2() * dG / (2.0 * G * G * rnorm)) : Vec3{};

    StateDerivative out;
    out.dr = pi / G;
    out.dv = force + gradG_term - curved_potential_gradient(s.r, spec, green);
    return out;
}

constexpr double kCos10Deg = 0.98480775301220805936;

bool needs_patch(const Vec3& point, const DyonConfig& cfg) {
    for (const Dyon& dy : cfg.dyons) {
        const Vec3 d = point - dy.position;
        const double ri = d.norm();
        if (ri < 1e-13) return true;
        if (d.dot(dy.string) / ri > kCos10Deg) return true;
    }
    return false;
}

struct StepperResult {
    bool accepted = false;
    double error = 0.0;
    State6 y_new{};
};

// Dormand-Prince 5(4) embedded pair, FSAL.
class Dopri5 {
public:
    template <class RHS>
    StepperResult step(const RHS& f, double t, const State6& y, double h, const State6& k1,
                       double rel_tol, double abs_tol) {
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                                a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                                a75 = -2187.0 / 6784, a76 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        State6 w;
        for (int i = 0; i < 6; ++i) w[i] = y[i] + h * a21 * k1[i];
        const State6 k2 = f(t + h / 5.0, w);
        for (int i = 0; i < 6; ++i) w[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        const State6 k3 = f(t + 3.0 * h / 10.0, w);
        for (int i = 0; i < 6; ++i) w[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        const State6 k4 = f(t + 4.0 * h / 5.0, w);
        for (int i = 0; i < 6; ++i)
            w[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        const State6 k5 = f(t + 8.0 * h / 9.0, w);
        for (int i = 0; i < 6; ++i)
            w[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        const State6 k6 = f(t + h, w);
        StepperResult res;
        for (int i = 0; i < 6; ++i)
            res.y_new[i] =
                y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        k7_ = f(t + h, res.y_new);

        double err = 0.0;
        for (int i = 0; i < 6; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7_[i]);
            const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(res.y_new[i]));
            err += (ei / sc) * (ei / sc);
        }
        res.error = std::sqrt(err / 6.0);
        res.accepted = res.error <= 1.0 && std::isfinite(res.error);
        return res;
    }

    const State6& last_stage() const { return k7_; }

private:
    State6 k7_{};
};

template <class RHS>
double initial_step(const RHS& f, double t0, const State6& y0, const State6& f0, double rel_tol,
                    double abs_tol, double interval) {
    double d0 = 0.0, d1 = 0.0;
    for (int i = 0; i < 6; ++i) {
        const double sc = abs_tol + rel_tol * std::abs(y0[i]);
        d0 += (y0[i] / sc) * (y0[i] / sc);
        d1 += (f0[i] / sc) * (f0[i] / sc);
    }
    d0 = std::sqrt(d0 / 6.0);
    d1 = std::sqrt(d1 / 6.0);
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, 0.1 * interval);
    // one Euler probe to bound the second derivative
    State6 y1;
    for (int i = 0; i < 6; ++i) y1[i] = y0[i] + h * f0[i];
    const State6 f1 = f(t0 + h, y1);
    double d2 = 0.0;
    for (int i = 0; i < 6; ++i) {
        const double sc = abs_tol + rel_tol * std::abs(y0[i]);
        d2 += ((f1[i] - f0[i]) / sc) * ((f1[i] - f0[i]) / sc);
    }
    d2 = std::sqrt(d2 / 6.0) / h;
    const double m = std::max(d1, d2);
    const double h1 = m > 1e-15 ? std::pow(0.01 / m, 0.2) : std::max(1e-6, h * 1e-3);
    return std::min({100.0 * h, h1, interval});
}

}  // namespace

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::Completed: return "completed";
        case Termination::Collision: return "collision";
        case Termination::StepUnderflow: return "step_underflow";
        case Termination::MaxSteps: return "max_steps";
    }
    return "?";
}

StateDerivative equations_of_motion(const PhaseState& s, const SystemSpec& spec,
                                    const GreenFunction* green) {
    if (spec.family == Family::CurvedMultiCenter) {
        if (green) return curved_rhs(s, spec, *green);
        const GreenFunction local(spec.profile);
        return curved_rhs(s, spec, local);
    }
    return flat_rhs(s, spec);
}

DyonConfig gauge_patch(const Vec3& point, const DyonConfig& cfg) {
    DyonConfig out = cfg;
    for (std::size_t i = 0; i < out.dyons.size(); ++i) {
        Dyon& dy = out.dyons[i];
        const Vec3 d = point - dy.position;
        const double ri = d.norm();
        if (ri < 1e-13) throw UnpatchableError();
        if (d.dot(dy.string) / ri > kCos10Deg) dy.string = -dy.string;
    }
    return out;
}

Trajectory integrate(const PhaseState& s0, const SystemSpec& spec, double t_end,
                     const IntegratorControls& controls) {
    validate_spec(spec);
    if (!(t_end > s0.t)) throw InvalidArgument("integrate: t_end must exceed the initial time");
    const bool curved = spec.family == Family::CurvedMultiCenter;
    const bool canonical = curved && controls.curved_canonical;
    const GreenFunction green = curved ? GreenFunction(spec.profile) : GreenFunction();

    DyonConfig gauged = spec.cfg;  // canonical mode re-gauges strings on the fly
    if (canonical) gauged = gauge_patch(s0.r, gauged);

    Trajectory traj;
    traj.t_end_requested = t_end;

    const auto rhs = [&](double t, const State6& y) -> State6 {
        PhaseState s{t, head(y), tail(y)};
        const StateDerivative d = canonical ? curved_canonical_rhs(s, spec, green, gauged)
                                 : curved  ? curved_rhs(s, spec, green)
                                           : flat_rhs(s, spec);
        return pack(d.dr, d.dv);
    };

    const auto store_sample = [&](double t, const State6& y) {
        Vec3 vv = tail(y);
        if (canonical) vv -= total_eA(head(y), gauged);  // store gauge-free momentum
        traj.samples.push_back({t, head(y), vv});
    };

    const auto collision_index = [&](const Vec3& r) -> int {
        for (std::size_t i = 0; i < spec.cfg.dyons.size(); ++i)
            if ((r - spec.cfg.dyons[i].position).norm() < controls.r_collide)
                return static_cast<int>(i);
        return -1;
    };

    double t = s0.t;
    State6 y = pack(s0.r, s0.v);
    if (canonical) y = pack(s0.r, s0.v + total_eA(s0.r, gauged));

    store_sample(t, y);
    double next_sample = controls.sample_dt > 0 ? t + controls.sample_dt : 0.0;

    // Rounding can leave t an ulp short of the next sample time; treat that as
    // having reached it rather than scheduling a microscopic step.
    const auto sample_reached = [&](double now) {
        return controls.sample_dt > 0 &&
               next_sample - now <= 1e-12 * std::max(1.0, std::abs(next_sample));
    };

    if (controls.method == IntegratorMethod::ImplicitMidpoint) {
        const double h0 = controls.fixed_step > 0 ? controls.fixed_step : 1e-3;
        while (t < t_end - 1e-15 * std::max(1.0, std::abs(t_end))) {
            if (sample_reached(t)) {
                store_sample(t, y);
                next_sample += controls.sample_dt;
                continue;
            }
            double h = std::min(h0, t_end - t);
            if (controls.sample_dt > 0) h = std::min(h, next_sample - t);
            // fixed-point iteration for k = f(t+h/2, y + h k / 2)
            State6 k = rhs(t, y);
            for (int it = 0; it < 100; ++it) {
                State6 ymid;
                for (int i = 0; i < 6; ++i) ymid[i] = y[i] + 0.5 * h * k[i];
                const State6 k_new = rhs(t + 0.5 * h, ymid);
                double delta = 0.0;
                for (int i = 0; i < 6; ++i) delta = std::max(delta, std::abs(k_new[i] - k[i]));
                k = k_new;
                if (delta < 1e-14) break;
            }
            for (int i = 0; i < 6; ++i) y[i] += h * k[i];
            t += h;
            ++traj.steps;
            const int hit = collision_index(head(y));
            if (hit >= 0) {
                store_sample(t, y);
                traj.termination = Termination::Collision;
                traj.collision_dyon = hit;
                return traj;
            }
            if (canonical && needs_patch(head(y), gauged)) {
                const Vec3 r = head(y);
                const Vec3 eA_old = total_eA(r, gauged);
                gauged = gauge_patch(r, gauged);
                const Vec3 eA_new = total_eA(r, gauged);
                const Vec3 dp = eA_new - eA_old;
                y[3] += dp.x; y[4] += dp.y; y[5] += dp.z;
                ++traj.gauge_patches;
            }
            bool record = controls.sample_dt <= 0;
            if (controls.sample_dt > 0 && t >= next_sample - 1e-12) {
                record = true;
                next_sample += controls.sample_dt;
            }
            if (record || t >= t_end - 1e-15) store_sample(t, y);
            if (traj.steps >= controls.max_steps) {
                traj.termination = Termination::MaxSteps;
                return traj;
            }
        }
        return traj;
    }

    Dopri5 stepper;
    State6 k1 = rhs(t, y);
    double h = initial_step(rhs, t, y, k1, controls.rel_tol, controls.abs_tol, t_end - t);
    if (controls.max_step > 0) h = std::min(h, controls.max_step);
    bool just_rejected = false;

    while (t < t_end - 1e-15 * std::max(1.0, std::abs(t_end))) {
        if (traj.steps + traj.rejected_steps >= controls.max_steps) {
            traj.termination = Termination::MaxSteps;
            return traj;
        }
        if (sample_reached(t)) {
            store_sample(t, y);
            next_sample += controls.sample_dt;
            continue;
        }
        double h_try = h;
        if (controls.max_step > 0) h_try = std::min(h_try, controls.max_step);
        bool cut_for_sample = false;
        if (controls.sample_dt > 0 &&
            t + h_try >= next_sample - 1e-12 * std::max(1.0, std::abs(next_sample))) {
            h_try = next_sample - t;
            cut_for_sample = true;
        }
        bool cut_for_end = false;
        if (t + h_try > t_end) {
            h_try = t_end - t;
            cut_for_end = true;
        }
        // a step truncated at a sample time or at t_end may be arbitrarily
        // small; only the adaptive step size itself signals underflow
        if (h_try < 1e-14 * std::max(1.0, std::abs(t)) && !cut_for_sample && !cut_for_end) {
            traj.termination = Termination::StepUnderflow;
            return traj;
        }

        const StepperResult res =
            stepper.step(rhs, t, y, h_try, k1, controls.rel_tol, controls.abs_tol);
        const double err = std::max(res.error, 1e-10);
        double factor = 0.9 * std::pow(err, -0.2);
        factor = std::clamp(factor, 0.2, 5.0);
        if (just_rejected) factor = std::min(factor, 1.0);

        if (!res.accepted) {
            ++traj.rejected_steps;
            just_rejected = true;
            h = h_try * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
            continue;
        }

        t += h_try;
        y = res.y_new;
        k1 = stepper.last_stage();
        ++traj.steps;
        just_rejected = false;
        // steps truncated at a sample boundary must not pin the step size down
        h = cut_for_sample ? std::max(h, h_try * factor) : h_try * factor;

        const int hit = collision_index(head(y));
        if (hit >= 0) {
            store_sample(t, y);
            traj.termination = Termination::Collision;
            traj.collision_dyon = hit;
            return traj;
        }
        if (canonical && needs_patch(head(y), gauged)) {
            const Vec3 r = head(y);
            const Vec3 eA_old = total_eA(r, gauged);
            gauged = gauge_patch(r, gauged);
            const Vec3 eA_new = total_eA(r, gauged);
            const Vec3 dp = eA_new - eA_old;
            y[3] += dp.x; y[4] += dp.y; y[5] += dp.z;
            k1 = rhs(t, y);  // gauge jump invalidates the FSAL stage
            ++traj.gauge_patches;
        }

        if (controls.sample_dt > 0) {
            if (cut_for_sample) {
                store_sample(t, y);
                next_sample += controls.sample_dt;
            } else if (t >= t_end - 1e-15) {
                store_sample(t, y);
            }
        } else {
            store_sample(t, y);
        }
    }
    if (traj.samples.empty() || traj.samples.back().t < t - 1e-15) store_sample(t, y);
    return traj;
}

bool axially_symmetric(const SystemSpec& spec) {
    for (const Dyon& dy : spec.cfg.dyons)
        if (std::hypot(dy.position.x, dy.position.y) > 1e-12) return false;
    return true;
}

double axial_momentum(const PhaseState& s, const SystemSpec& spec) {
    const double lz = s.r.x * s.v.y - s.r.y * s.v.x;
    if (spec.family == Family::CurvedMultiCenter) {
        // s.v stores pi = G v, so lz is already G rho^2 phidot.
        double gauge = 0.0;
        for (std::size_t i = 0; i < spec.cfg.dyons.size(); ++i) {
            const Vec3 d = s.r - spec.cfg.dyons[i].position;
            const double ri = d.norm();
            if (ri < 1e-13) throw AtCenterError(static_cast<int>(i));
            gauge -= spec.cfg.s(i) * d.z / ri;
        }
        return lz + gauge;
    }
    return lz + axial_gauge_term(spec.cfg, s.r);
}

ConservedSet conserved_quantities(const PhaseState& s, const SystemSpec& spec,
                                  const GreenFunction* green) {
    ConservedSet out;
    switch (spec.family) {
        case Family::FlatMultiCenter:
        case Family::TwoCenterElliptic:
        case Family::StarkZeemanParabolic:
            out.E = flat_hamiltonian(s.r, s.v, spec).total;
            break;
        case Family::CurvedMultiCenter: {
            if (green) {
                out.E = curved_hamiltonian(s.r, s.v, spec, *green);
            } else {
                const GreenFunction local(spec.profile);
                out.E = curved_hamiltonian(s.r, s.v, spec, local);
            }
            break;
        }
    }

    if (axially_symmetric(spec)) out.p_phi = axial_momentum(s, spec);

    if (spec.family == Family::TwoCenterElliptic) {
        const EllipticPoint q = to_elliptic(s.r, spec.a);
        const EllipticMomenta p = elliptic_momenta(s.r, s.v, spec.a, spec.cfg);
        const double u2 = q.xi * q.xi - 1.0, v2 = 1.0 - q.eta * q.eta;
        const double V = elliptic_potential_xi(q.xi, p.p_phi, spec);
        const double W = elliptic_potential_eta(q.eta, p.p_phi, spec);
        out.separation = -(q.eta * q.eta * (u2 * p.p_xi * p.p_xi + V) +
                           q.xi * q.xi * (v2 * p.p_eta * p.p_eta + W)) /
                         (q.xi * q.xi - q.eta * q.eta);
    } else if (spec.family == Family::StarkZeemanParabolic) {
        const ParabolicPoint q = to_parabolic(s.r);
        const ParabolicMomenta p = parabolic_momenta(s.r, s.v, spec.cfg);
        const double V = parabolic_potential_xi(q.xi, p.p_phi, spec);
        const double W = parabolic_potential_eta(q.eta, p.p_phi, spec);
        out.separation = (4.0 * q.xi * q.eta * (p.p_xi * p.p_xi - p.p_eta * p.p_eta) +
                          q.eta * V - q.xi * W) /
                         (q.xi + q.eta);
    }

    if (spec.family == Family::FlatMultiCenter && spec.cfg.dyons.size() == 1) {
        const Vec3 d = s.r - spec.cfg.dyons[0].position;
        const double rn = d.norm();
        if (rn > 1e-13) {
            const Vec3 J = d.cross(s.v) - d * (spec.cfg.s(0) / rn);
            out.J = J;
            const double Jn = J.norm();
            if (Jn > 1e-300) out.cone_cos = d.dot(J) / (rn * Jn);
        }
    }
    return out;
}

ConservationReport monitor(const Trajectory& traj, const SystemSpec& spec, double flag_threshold) {
    if (traj.samples.empty()) throw InvalidArgument("monitor: empty trajectory");
    const GreenFunction green =
        spec.family == Family::CurvedMultiCenter ? GreenFunction(spec.profile) : GreenFunction();
    const GreenFunction* gp = spec.family == Family::CurvedMultiCenter ? &green : nullptr;

    ConservationReport report;
    report.flag_threshold = flag_threshold;
    auto& series = report.series;
    for (const PhaseState& s : traj.samples) {
        const ConservedSet c = conserved_quantities(s, spec, gp);
        series["E"].push_back(c.E);
        if (c.p_phi) series["p_phi"].push_back(*c.p_phi);
        if (c.separation)
            series[spec.family == Family::TwoCenterElliptic ? "I_e" : "I_p"].push_back(
                *c.separation);
        if (c.J) {
            series["J_x"].push_back(c.J->x);
            series["J_y"].push_back(c.J->y);
            series["J_z"].push_back(c.J->z);
        }
        if (c.cone_cos) series["cone_cos"].push_back(*c.cone_cos);
    }
    for (const auto& [name, values] : series) {
        DriftStats st;
        st.first = values.front();
        for (double v : values)
            st.max_abs_drift = std::max(st.max_abs_drift, std::abs(v - st.first));
        st.max_rel_drift = st.max_abs_drift / std::max(std::abs(st.first), 1e-12);
        // quantities that are zero to round-off never flag on the relative test
        st.flagged = st.max_rel_drift > flag_threshold && st.max_abs_drift > 1e-12;
        report.quantities[name] = st;
    }
    return report;
}

}  // namespace micz
