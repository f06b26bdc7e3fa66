#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "micz/numerics.hpp"
#include "micz/vec3.hpp"

namespace micz {

/// A fixed Dirac dyon: point source with magnetic charge g and electric charge
/// q, plus the direction of its vector-potential string (a gauge choice).
struct Dyon {
    Vec3 position{};
    double g = 0.0;       ///< magnetic charge
    double q = 0.0;       ///< electric charge
    Vec3 string{0, 0, -1};  ///< unit vector along the potential's singular ray
};

/// Default string direction for dyon #i: close to -z, tilted a little more per
/// index so no two strings coincide even for stacked sources.
Vec3 default_string_direction(int index);

/// Static background: the dyons, the probe charge e, and optional uniform
/// external fields (used by the Stark-Zeeman family; both along z).
struct DyonConfig {
    std::vector<Dyon> dyons;
    double e = 1.0;  ///< probe electric charge
    Vec3 B0{};       ///< uniform magnetic field
    Vec3 E0{};       ///< uniform electric field

    /// Monopole coupling s_i = e * g_i of dyon #i.
    double s(std::size_t i) const { return e * dyons[i].g; }
};

/// Radial conformal factor G(r) of the metric ds^2 = G(r) dr^2.
class MetricProfile {
public:
    enum class Kind { Flat, Sphere, Pseudosphere, Custom };

    MetricProfile() = default;

    static MetricProfile flat();
    static MetricProfile sphere(double r0);
    static MetricProfile pseudosphere(double r0);
    /// Tabulated profile; interpolated with a monotone cubic. Domain is the
    /// sampled range.
    static MetricProfile custom(std::vector<double> r, std::vector<double> G);

    Kind kind() const { return kind_; }
    double r0() const { return r0_; }
    /// Curvature sign: +1 sphere, -1 pseudosphere, 0 otherwise.
    int epsilon() const;
    bool is_flat() const { return kind_ == Kind::Flat; }

    double G(double r) const;
    double dG_dr(double r) const;
    /// Square root of G used in the radial Green-function integrand. For the
    /// closed-form kinds this is the analytic branch 2 r0/(1 + eps r^2), which
    /// is signed on the pseudosphere beyond r = 1 so that the integrand stays
    /// smooth across it.
    double sqrtG(double r) const;

    double domain_min() const;
    double domain_max() const;

private:
    Kind kind_ = Kind::Flat;
    double r0_ = 1.0;
    MonotoneCubic table_;
};

/// so(3)-invariant Green function phi_C of the Laplacian for a given profile,
/// normalized so the flat case is exactly 1/r (constant fixed at infinity for
/// closed-form kinds; custom profiles are anchored at the table's right edge).
/// The additive constant matters physically: the curved Hamiltonian contains
/// phi_g squared. `normalization` shifts the anchor when a different constant
/// is wanted.
class GreenFunction {
public:
    GreenFunction() = default;
    explicit GreenFunction(MetricProfile profile, double normalization = 0.0);

    double operator()(double r) const;
    /// d phi_C / dr = -1 / (r^2 sqrt(G))
    double derivative(double r) const;
    const MetricProfile& profile() const { return profile_; }
    double normalization() const { return normalization_; }

private:
    MetricProfile profile_;
    CubicHermite phi_table_;       // custom kind only
    double normalization_ = 0.0;   // additive constant applied to the antiderivative
};

GreenFunction green_function(const MetricProfile& profile, double normalization = 0.0);

/// Unit-charge Dirac monopole vector potential with string along +n:
///   A(r) = (r x n) / (|r| (|r| - n.r)),  r relative to `center`.
/// Multiply by the magnetic charge for a physical source.
Vec3 dirac_vector_potential(const Vec3& r, const Vec3& center, const Vec3& n, int dyon_index = -1);

/// Jacobian dA_j/dx_k of the unit-charge potential (row j, column k).
struct Mat3 {
    double m[3][3] = {};
};
Mat3 dirac_vector_potential_jacobian(const Vec3& r, const Vec3& center, const Vec3& n,
                                     int dyon_index = -1);

/// Magnetic field of a monopole of charge g at `center`: g (r-center)/|r-center|^3.
Vec3 monopole_B(const Vec3& r, const Vec3& center, double g, int dyon_index = -1);

/// Superposed gauge potential, magnetic scalar potential and electric scalar
/// potential of a dyon configuration on the given background.
struct TotalPotentials {
    Vec3 A_total{};   ///< sum_i g_i A_D(r - a_i; n_i)
    double phi_g = 0; ///< sum_i g_i phi_C(r_i)
    double phi_q = 0; ///< sum_i q_i phi_C(r_i)
};
TotalPotentials total_potentials(const DyonConfig& cfg, const GreenFunction& green, const Vec3& r);

/// Dirac-Schwinger-Zwanziger check: all pairs must satisfy g_i q_j = g_j q_i.
/// Returns the common ratio q_i/g_i when the condition holds, nullopt otherwise.
std::optional<double> dsz_check(const DyonConfig& cfg, double tol = 1e-12);

/// Relative string-proximity tolerance: a point is "on string" when
/// (r - n.r) < tol * r.
inline constexpr double kStringTolerance = 1e-9;

}  // namespace micz
