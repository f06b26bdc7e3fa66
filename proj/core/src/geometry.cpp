#include "micz/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "micz/errors.hpp"

namespace micz {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap_phi(double y, double x) {
    if (x == 0.0 && y == 0.0) return 0.0;  // axis convention: phi := 0
    double phi = std::atan2(y, x);
    if (phi < 0) phi += kTwoPi;
    return phi >= kTwoPi ? 0.0 : phi;
}

}  // namespace

EllipticPoint to_elliptic(const CartesianPoint& p, double a) {
    if (!(a > 0)) throw InvalidArgument("focal half-distance a must be positive");
    const double rho2 = p.x * p.x + p.y * p.y;
    const double r1 = std::sqrt(rho2 + (p.z + a) * (p.z + a));
    const double r2 = std::sqrt(rho2 + (p.z - a) * (p.z - a));
    double xi = (r1 + r2) / (2.0 * a);
    if (xi < 1.0) xi = 1.0;
    // (r1-r2)/2a = z/(a*xi); exact identity, avoids cancellation for r1 ~ r2.
    double eta = std::clamp(p.z / (a * xi), -1.0, 1.0);
    return {xi, eta, wrap_phi(p.y, p.x), a};
}

CartesianPoint from_elliptic(const EllipticPoint& q) {
    if (!(q.a > 0)) throw InvalidArgument("focal half-distance a must be positive");
    if (q.xi < 1.0 - 1e-12 || std::abs(q.eta) > 1.0 + 1e-12)
        throw InvalidArgument("elliptic point outside xi >= 1, |eta| <= 1");
    const double u2 = std::max(0.0, q.xi * q.xi - 1.0);
    const double v2 = std::max(0.0, 1.0 - q.eta * q.eta);
    const double rho = q.a * std::sqrt(u2 * v2);
    return {rho * std::cos(q.phi), rho * std::sin(q.phi), q.a * q.xi * q.eta};
}

ParabolicPoint to_parabolic(const CartesianPoint& p) {
    const double rho2 = p.x * p.x + p.y * p.y;
    const double r = std::sqrt(rho2 + p.z * p.z);
    double xi, eta;
    if (p.z >= 0) {
        xi = r + p.z;
        eta = xi > 0 ? rho2 / xi : 0.0;  // r - z without cancellation
    } else {
        eta = r - p.z;
        xi = eta > 0 ? rho2 / eta : 0.0;
    }
    return {xi, eta, wrap_phi(p.y, p.x)};
}

CartesianPoint from_parabolic(const ParabolicPoint& q) {
    if (q.xi < -1e-15 || q.eta < -1e-15)
        throw InvalidArgument("parabolic point needs xi >= 0 and eta >= 0");
    const double rho = std::sqrt(std::max(0.0, q.xi * q.eta));
    return {rho * std::cos(q.phi), rho * std::sin(q.phi), 0.5 * (q.xi - q.eta)};
}

SphericalPoint to_spherical(const CartesianPoint& p) {
    const double rho = std::hypot(p.x, p.y);
    return {p.norm(), std::atan2(rho, p.z), wrap_phi(p.y, p.x)};
}

CartesianPoint from_spherical(const SphericalPoint& q) {
    const double s = std::sin(q.theta);
    return {q.r * s * std::cos(q.phi), q.r * s * std::sin(q.phi), q.r * std::cos(q.theta)};
}

KinematicAngles kinematic_angles(const CartesianPoint& p, double a) {
    if (!(a > 0)) throw InvalidArgument("focal half-distance a must be positive");
    const double rho2 = p.x * p.x + p.y * p.y;
    const double r1 = std::sqrt(rho2 + (p.z + a) * (p.z + a));
    const double r2 = std::sqrt(rho2 + (p.z - a) * (p.z - a));
    const double tol = 1e-15 * std::max(a, p.norm());
    if (r1 <= tol) throw AtFocusError(1);
    if (r2 <= tol) throw AtFocusError(2);
    KinematicAngles out;
    out.cos_theta1 = std::clamp((p.z + a) / r1, -1.0, 1.0);
    out.cos_theta2 = std::clamp((p.z - a) / r2, -1.0, 1.0);
    out.theta = std::atan2(std::sqrt(rho2), p.z);
    return out;
}

double axial_gauge_term(const DyonConfig& cfg, const CartesianPoint& p) {
    double term = 0.0;
    for (std::size_t i = 0; i < cfg.dyons.size(); ++i) {
        const Vec3 d = p - cfg.dyons[i].position;
        const double ri = d.norm();
        if (ri < 1e-13) throw AtCenterError(static_cast<int>(i));
        term -= cfg.s(i) * (d.z / ri);
    }
    const double rho2 = p.x * p.x + p.y * p.y;
    term += 0.5 * cfg.e * cfg.B0.z * rho2;
    return term;
}

namespace {

// Shared by the elliptic/parabolic maps: rho * (radial-cylindrical velocity),
// i.e. x vx + y vy, and the axial angular momentum (r x v)_z.
struct CylParts {
    double rho2, rv, lz;
};

CylParts cyl_parts(const CartesianPoint& p, const Vec3& v) {
    return {p.x * p.x + p.y * p.y, p.x * v.x + p.y * v.y, p.x * v.y - p.y * v.x};
}

// The meridional momenta involve (x vx + y vy)/rho^2-type factors, which have
// no limit on the symmetry axis unless the transverse velocity vanishes there.
bool transverse_velocity_vanishes(const Vec3& v) {
    return std::hypot(v.x, v.y) <= 1e-12 * std::max(1.0, std::abs(v.z));
}

}  // namespace

EllipticMomenta elliptic_momenta(const CartesianPoint& p, const Vec3& v, double a,
                                 const DyonConfig& cfg) {
    const EllipticPoint q = to_elliptic(p, a);
    const CylParts c = cyl_parts(p, v);
    const double u2 = q.xi * q.xi - 1.0;
    const double v2 = 1.0 - q.eta * q.eta;
    EllipticMomenta out;
    if (c.rho2 > 1e-24 * std::max(1.0, p.norm2())) {
        out.p_xi = c.rv * a * a * q.xi * v2 / c.rho2 + a * q.eta * v.z;
        out.p_eta = -c.rv * a * a * q.eta * u2 / c.rho2 + a * q.xi * v.z;
    } else if (transverse_velocity_vanishes(v)) {
        out.p_xi = a * q.eta * v.z;
        out.p_eta = a * q.xi * v.z;
    } else {
        throw SingularJacobianError();
    }
    out.p_phi = c.lz + axial_gauge_term(cfg, p);
    return out;
}

ParabolicMomenta parabolic_momenta(const CartesianPoint& p, const Vec3& v, const DyonConfig& cfg) {
    const ParabolicPoint q = to_parabolic(p);
    const CylParts c = cyl_parts(p, v);
    const double scale = std::max(1.0, p.norm());
    ParabolicMomenta out;
    const auto meridional = [&](double coord, double sign_vz) {
        if (coord > 1e-14 * scale) return 0.5 * (c.rv / coord + sign_vz * v.z);
        if (transverse_velocity_vanishes(v)) return 0.5 * sign_vz * v.z;
        throw SingularJacobianError();
    };
    out.p_xi = meridional(q.xi, +1.0);
    out.p_eta = meridional(q.eta, -1.0);
    out.p_phi = c.lz + axial_gauge_term(cfg, p);
    return out;
}

SphericalMomenta spherical_momenta(const CartesianPoint& p, const Vec3& v, const DyonConfig& cfg) {
    const double r = p.norm();
    if (r < 1e-300) throw SingularJacobianError();
    const double rho = std::hypot(p.x, p.y);
    const CylParts c = cyl_parts(p, v);
    SphericalMomenta out;
    out.p_r = p.dot(v) / r;
    // theta-hat = (cos(t)cos(f), cos(t)sin(f), -sin(t)); r * (v . theta-hat)
    const double cos_t = p.z / r;
    if (rho > 1e-14 * std::max(1.0, r)) {
        out.p_theta = cos_t * c.rv * r / rho - v.z * rho;
    } else {
        // On the axis theta-hat is direction-ambiguous; only a zero transverse
        // velocity keeps the map well defined.
        if (std::hypot(v.x, v.y) > 1e-12) throw SingularJacobianError();
        out.p_theta = 0.0;
    }
    out.p_phi = c.lz + axial_gauge_term(cfg, p);
    return out;
}

}  // namespace micz
