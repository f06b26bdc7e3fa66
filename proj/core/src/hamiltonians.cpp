#include "micz/hamiltonians.hpp"

#include <cmath>
#include <limits>

#include "micz/errors.hpp"

namespace micz {

namespace {

constexpr double kPosTol = 1e-12;

double infinity_signed(double numerator) {
    if (numerator > 0) return std::numeric_limits<double>::infinity();
    if (numerator < 0) return -std::numeric_limits<double>::infinity();
    return 0.0;
}

}  // namespace

const char* family_name(Family f) {
    switch (f) {
        case Family::FlatMultiCenter: return "flat_multi_center";
        case Family::TwoCenterElliptic: return "two_center_elliptic";
        case Family::StarkZeemanParabolic: return "stark_zeeman_parabolic";
        case Family::CurvedMultiCenter: return "curved_multi_center";
    }
    return "?";
}

void validate_spec(const SystemSpec& spec) {
    if (spec.cfg.dyons.empty()) throw InvalidArgument("spec needs at least one dyon");
    if (spec.cfg.e == 0.0) throw InvalidArgument("probe charge e must be nonzero");
    const bool has_uniform = spec.cfg.B0.norm() > 0 || spec.cfg.E0.norm() > 0;
    switch (spec.family) {
        case Family::FlatMultiCenter:
            if (!spec.profile.is_flat())
                throw FamilyMismatchError("flat_multi_center requires the flat profile");
            if (has_uniform)
                throw FamilyMismatchError("flat_multi_center takes no uniform fields");
            break;
        case Family::TwoCenterElliptic: {
            if (!spec.profile.is_flat())
                throw FamilyMismatchError("two_center_elliptic requires the flat profile");
            if (has_uniform)
                throw FamilyMismatchError("two_center_elliptic takes no uniform fields");
            if (spec.cfg.dyons.size() != 2)
                throw FamilyMismatchError("two_center_elliptic requires exactly 2 dyons");
            if (!(spec.a > 0)) throw InvalidArgument("focal half-distance a must be positive");
            const Vec3 lo = spec.cfg.dyons[0].position, hi = spec.cfg.dyons[1].position;
            if (std::abs(lo.x) > kPosTol || std::abs(lo.y) > kPosTol ||
                std::abs(lo.z + spec.a) > kPosTol || std::abs(hi.x) > kPosTol ||
                std::abs(hi.y) > kPosTol || std::abs(hi.z - spec.a) > kPosTol)
                throw FamilyMismatchError("two-center dyons must sit at (0,0,-a) and (0,0,+a)");
            break;
        }
        case Family::StarkZeemanParabolic: {
            if (!spec.profile.is_flat())
                throw FamilyMismatchError("stark_zeeman_parabolic requires the flat profile");
            if (spec.cfg.dyons.size() != 1)
                throw FamilyMismatchError("stark_zeeman_parabolic requires exactly 1 dyon");
            if (spec.cfg.dyons[0].position.norm() > kPosTol)
                throw FamilyMismatchError("stark_zeeman dyon must sit at the origin");
            const Vec3 B = spec.cfg.B0, E = spec.cfg.E0;
            if (std::hypot(B.x, B.y) > kPosTol || std::hypot(E.x, E.y) > kPosTol)
                throw FamilyMismatchError("uniform fields must be aligned with +z (E parallel B)");
            break;
        }
        case Family::CurvedMultiCenter:
            if (has_uniform)
                throw FamilyMismatchError("curved_multi_center takes no uniform fields");
            break;
    }
}

SystemSpec make_two_center(double a, double g1, double q1, double g2, double q2, double e) {
    SystemSpec spec;
    spec.family = Family::TwoCenterElliptic;
    spec.a = a;
    spec.cfg.e = e;
    spec.cfg.dyons = {Dyon{{0, 0, -a}, g1, q1, default_string_direction(0)},
                      Dyon{{0, 0, +a}, g2, q2, default_string_direction(1)}};
    validate_spec(spec);
    return spec;
}

SystemSpec make_stark_zeeman(double g, double q, double B0z, double E0z, double e) {
    SystemSpec spec;
    spec.family = Family::StarkZeemanParabolic;
    spec.cfg.e = e;
    spec.cfg.B0 = {0, 0, B0z};
    spec.cfg.E0 = {0, 0, E0z};
    spec.cfg.dyons = {Dyon{{0, 0, 0}, g, q, default_string_direction(0)}};
    validate_spec(spec);
    return spec;
}

SystemSpec make_one_center(double g, double q, double e) {
    SystemSpec spec;
    spec.family = Family::FlatMultiCenter;
    spec.cfg.e = e;
    spec.cfg.dyons = {Dyon{{0, 0, 0}, g, q, default_string_direction(0)}};
    validate_spec(spec);
    return spec;
}

EnergyBreakdown flat_hamiltonian(const CartesianPoint& r, const Vec3& v, const SystemSpec& spec) {
    EnergyBreakdown out;
    out.kinetic = 0.5 * v.norm2();
    double root = 0.0;   // sum s_i/r_i (- e B0 z for Stark-Zeeman)
    double coulomb = 0.0;
    for (std::size_t i = 0; i < spec.cfg.dyons.size(); ++i) {
        const double ri = (r - spec.cfg.dyons[i].position).norm();
        if (ri < 1e-13) throw AtCenterError(static_cast<int>(i));
        root += spec.cfg.s(i) / ri;
        coulomb += spec.cfg.e * spec.cfg.dyons[i].q / ri;
    }
    root -= spec.cfg.e * spec.cfg.B0.z * r.z;
    out.micz_quadratic = 0.5 * root * root;
    out.coulomb = coulomb;
    out.external = -spec.cfg.e * spec.cfg.E0.z * r.z;
    out.total = out.kinetic + out.micz_quadratic + out.coulomb + out.external;
    return out;
}

double flat_hamiltonian_canonical(const CartesianPoint& r, const Vec3& p, const SystemSpec& spec) {
    Vec3 eA{};
    for (std::size_t i = 0; i < spec.cfg.dyons.size(); ++i)
        eA += dirac_vector_potential(r, spec.cfg.dyons[i].position, spec.cfg.dyons[i].string,
                                     static_cast<int>(i)) *
              spec.cfg.s(i);
    // symmetric gauge for the uniform field
    eA += spec.cfg.B0.cross(r) * (0.5 * spec.cfg.e);
    const Vec3 v = p - eA;
    EnergyBreakdown eb = flat_hamiltonian(r, v, spec);
    return eb.total;
}

double elliptic_potential_xi(double xi, double p_phi, const SystemSpec& spec) {
    const double u2 = xi * xi - 1.0;
    const double sm = spec.s_minus();
    const double num = p_phi * p_phi + sm * sm + 2.0 * p_phi * sm * xi;
    const double coul = 2.0 * spec.a * spec.cfg.e * spec.q_plus() * xi;
    if (u2 <= 0.0) return infinity_signed(num) + coul;
    return num / u2 + coul;
}

double elliptic_potential_eta(double eta, double p_phi, const SystemSpec& spec) {
    const double v2 = 1.0 - eta * eta;
    const double sp = spec.s_plus();
    const double num = p_phi * p_phi + sp * sp + 2.0 * p_phi * sp * eta;
    const double coul = -2.0 * spec.a * spec.cfg.e * spec.q_minus() * eta;
    if (v2 <= 0.0) return infinity_signed(num) + coul;
    return num / v2 + coul;
}

double elliptic_hamiltonian(const EllipticPoint& q, const EllipticMomenta& p,
                            const SystemSpec& spec) {
    if (spec.family != Family::TwoCenterElliptic)
        throw FamilyMismatchError("elliptic_hamiltonian needs the two-center family");
    const double u2 = q.xi * q.xi - 1.0;
    const double v2 = 1.0 - q.eta * q.eta;
    if (u2 < 1e-14 || v2 < 1e-14) {
        if (std::abs(p.p_xi) > 1e-10 || std::abs(p.p_eta) > 1e-10) throw BoundaryDegenerateError();
    }
    const double S = q.xi * q.xi - q.eta * q.eta;
    const double V = elliptic_potential_xi(q.xi, p.p_phi, spec);
    const double W = elliptic_potential_eta(q.eta, p.p_phi, spec);
    return (u2 * p.p_xi * p.p_xi + v2 * p.p_eta * p.p_eta + V + W) / (2.0 * spec.a * spec.a * S);
}

double parabolic_potential_xi(double xi, double p_phi, const SystemSpec& spec) {
    const double e = spec.cfg.e;
    const double s = spec.cfg.s(0);
    const double eB = e * spec.cfg.B0.z;
    const double eE = e * spec.cfg.E0.z;
    const double eq = e * spec.cfg.dyons[0].q;
    const double num = (p_phi - s) * (p_phi - s);
    const double rest = -3.0 * s * eB * xi - eE * xi * xi + 0.25 * eB * eB * xi * xi * xi + 2.0 * eq;
    if (xi <= 0.0) return infinity_signed(num) + rest;
    return num / xi + rest;
}

double parabolic_potential_eta(double eta, double p_phi, const SystemSpec& spec) {
    const double e = spec.cfg.e;
    const double s = spec.cfg.s(0);
    const double eB = e * spec.cfg.B0.z;
    const double eE = e * spec.cfg.E0.z;
    const double eq = e * spec.cfg.dyons[0].q;
    const double num = (p_phi + s) * (p_phi + s);
    const double rest =
        3.0 * s * eB * eta + eE * eta * eta + 0.25 * eB * eB * eta * eta * eta + 2.0 * eq;
    if (eta <= 0.0) return infinity_signed(num) + rest;
    return num / eta + rest;
}

double stark_zeeman_hamiltonian(const ParabolicPoint& q, const ParabolicMomenta& p,
                                const SystemSpec& spec) {
    if (spec.family != Family::StarkZeemanParabolic)
        throw FamilyMismatchError("stark_zeeman_hamiltonian needs the Stark-Zeeman family");
    const double sum = q.xi + q.eta;
    if (sum < 1e-13) throw AtOriginError();
    const double V = parabolic_potential_xi(q.xi, p.p_phi, spec);
    const double W = parabolic_potential_eta(q.eta, p.p_phi, spec);
    const double kin = 4.0 * q.xi * p.p_xi * p.p_xi + 4.0 * q.eta * p.p_eta * p.p_eta;
    return (kin + V + W) / (2.0 * sum) - 0.5 * spec.cfg.e * spec.cfg.B0.z * p.p_phi;
}

double stark_zeeman_spherical(const SphericalPoint& q, const SphericalMomenta& p,
                              const SystemSpec& spec) {
    if (spec.family != Family::StarkZeemanParabolic)
        throw FamilyMismatchError("stark_zeeman_spherical needs the Stark-Zeeman family");
    if (!(q.r > 0)) throw AtCenterError(0);
    const double e = spec.cfg.e;
    const double s = spec.cfg.s(0);
    const double B = spec.cfg.B0.z, E = spec.cfg.E0.z;
    const double sin_t = std::sin(q.theta), cos_t = std::cos(q.theta);
    const double rho2 = q.r * q.r * sin_t * sin_t;
    const double z = q.r * cos_t;
    // p_phi = rho^2 phidot - s cos(theta) + e B rho^2 / 2 in this gauge
    const double az_num = p.p_phi + s * cos_t - 0.5 * e * B * rho2;
    double azimuthal = 0.0;
    if (rho2 > 1e-26) {
        azimuthal = az_num * az_num / (2.0 * rho2);
    } else if (std::abs(az_num) > 1e-10) {
        throw BoundaryDegenerateError();
    }
    const double root = s / q.r - e * B * z;
    return 0.5 * p.p_r * p.p_r + 0.5 * p.p_theta * p.p_theta / (q.r * q.r) + azimuthal +
           0.5 * root * root + e * spec.cfg.dyons[0].q / q.r - e * E * z;
}

namespace {

double curved_potential(const CartesianPoint& r, const SystemSpec& spec,
                        const GreenFunction& green, double* phi_g_out = nullptr) {
    double phi_g = 0.0, phi_q = 0.0;
    for (std::size_t i = 0; i < spec.cfg.dyons.size(); ++i) {
        const double ri = (r - spec.cfg.dyons[i].position).norm();
        if (ri < 1e-13) throw AtCenterError(static_cast<int>(i));
        const double phi = green(ri);
        phi_g += spec.cfg.dyons[i].g * phi;
        phi_q += spec.cfg.dyons[i].q * phi;
    }
    if (phi_g_out) *phi_g_out = phi_g;
    const double e = spec.cfg.e;
    return 0.5 * e * e * phi_g * phi_g + e * phi_q;
}

}  // namespace

double curved_hamiltonian(const CartesianPoint& r, const Vec3& pi, const SystemSpec& spec,
                          const GreenFunction& green) {
    const double G = spec.profile.G(r.norm());
    if (!(G > 0)) throw DomainError("metric factor G must be positive");
    return 0.5 * pi.norm2() / G + curved_potential(r, spec, green);
}

double curved_hamiltonian_canonical(const CartesianPoint& r, const Vec3& p, const SystemSpec& spec,
                                    const GreenFunction& green) {
    Vec3 eA{};
    for (std::size_t i = 0; i < spec.cfg.dyons.size(); ++i)
        eA += dirac_vector_potential(r, spec.cfg.dyons[i].position, spec.cfg.dyons[i].string,
                                     static_cast<int>(i)) *
              spec.cfg.s(i);
    return curved_hamiltonian(r, p - eA, spec, green);
}

std::optional<double> curved_hamiltonian_dsz_form(const CartesianPoint& r, const Vec3& pi,
                                                  const SystemSpec& spec,
                                                  const GreenFunction& green) {
    const auto kappa = dsz_check(spec.cfg);
    if (!kappa) return std::nullopt;
    const double G = spec.profile.G(r.norm());
    double phi_g = 0.0;
    curved_potential(r, spec, green, &phi_g);
    const double e = spec.cfg.e;
    const double shifted = phi_g + *kappa / e;
    return 0.5 * pi.norm2() / G + 0.5 * e * e * shifted * shifted - 0.5 * (*kappa) * (*kappa);
}

double curved_replacement_form(const CartesianPoint& r, const Vec3& pi, const SystemSpec& spec,
                               const GreenFunction& green) {
    if (spec.cfg.dyons.size() != 1)
        throw FamilyMismatchError("replacement comparison form is one-center only");
    const double rr = (r - spec.cfg.dyons[0].position).norm();
    if (rr < 1e-13) throw AtCenterError(0);
    const double G = spec.profile.G(r.norm());
    const double s = spec.cfg.s(0);
    const double U = spec.cfg.e * spec.cfg.dyons[0].q * green(rr);
    return 0.5 * pi.norm2() / G + 0.5 * s * s / (G * rr * rr) + U;
}

std::function<double(const CartesianPoint&)> micz_replace(
    std::function<double(const CartesianPoint&)> U, MetricProfile profile,
    std::vector<Vec3> centers, std::vector<double> s) {
    if (centers.size() != s.size())
        throw InvalidArgument("micz_replace: centers and couplings must pair up");
    return [U = std::move(U), profile = std::move(profile), centers = std::move(centers),
            s = std::move(s)](const CartesianPoint& r) {
        double root = 0.0;
        for (std::size_t i = 0; i < centers.size(); ++i) {
            const double ri = (r - centers[i]).norm();
            if (ri < 1e-13) throw AtCenterError(static_cast<int>(i));
            root += s[i] / ri;
        }
        const double base = U ? U(r) : 0.0;
        return base + 0.5 * root * root / profile.G(r.norm());
    };
}

}  // namespace micz
