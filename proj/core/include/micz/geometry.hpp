#pragma once

#include "micz/fields.hpp"
#include "micz/vec3.hpp"

namespace micz {

using CartesianPoint = Vec3;

/// Prolate elliptic coordinates with foci at (0,0,-a) and (0,0,+a):
///   xi = (r1+r2)/2a >= 1,  eta = (r1-r2)/2a in [-1,1],
/// r1 measured from the lower focus. phi in [0, 2pi); phi := 0 on the axis.
struct EllipticPoint {
    double xi = 1.0;
    double eta = 0.0;
    double phi = 0.0;
    double a = 1.0;  ///< focal half-distance
};

/// Rotational parabolic coordinates: xi = r+z >= 0, eta = r-z >= 0.
struct ParabolicPoint {
    double xi = 0.0;
    double eta = 0.0;
    double phi = 0.0;
};

struct SphericalPoint {
    double r = 0.0;
    double theta = 0.0;  ///< polar angle from +z
    double phi = 0.0;
};

/// Cosines of the polar angles seen from the two foci, plus the polar angle
/// about the origin. cos(theta1) = (r cos(theta) + a)/r1, and similarly for
/// the upper focus.
struct KinematicAngles {
    double cos_theta1 = 1.0;
    double cos_theta2 = 1.0;
    double theta = 0.0;
};

EllipticPoint to_elliptic(const CartesianPoint& p, double a);
CartesianPoint from_elliptic(const EllipticPoint& q);
ParabolicPoint to_parabolic(const CartesianPoint& p);
CartesianPoint from_parabolic(const ParabolicPoint& q);
SphericalPoint to_spherical(const CartesianPoint& p);
CartesianPoint from_spherical(const SphericalPoint& q);

KinematicAngles kinematic_angles(const CartesianPoint& p, double a);

/// Azimuthal gauge term of the canonical momentum: the covariant phi-component
/// of e*A in the gauge where the meridional components vanish,
///   e A_phi = -sum_i s_i cos(theta_i) + (e B0z/2) rho^2.
/// Canonical p_phi = (r x v)_z + axial_gauge_term.
double axial_gauge_term(const DyonConfig& cfg, const CartesianPoint& p);

struct EllipticMomenta {
    double p_xi = 0, p_eta = 0, p_phi = 0;
};
struct ParabolicMomenta {
    double p_xi = 0, p_eta = 0, p_phi = 0;
};
struct SphericalMomenta {
    double p_r = 0, p_theta = 0, p_phi = 0;
};

/// Canonical momenta conjugate to the target coordinates for a particle of
/// unit mass at p with velocity v. Meridional momenta carry no gauge
/// contribution; p_phi picks up axial_gauge_term(cfg, p).
EllipticMomenta elliptic_momenta(const CartesianPoint& p, const Vec3& v, double a,
                                 const DyonConfig& cfg);
ParabolicMomenta parabolic_momenta(const CartesianPoint& p, const Vec3& v, const DyonConfig& cfg);
SphericalMomenta spherical_momenta(const CartesianPoint& p, const Vec3& v, const DyonConfig& cfg);

}  // namespace micz
