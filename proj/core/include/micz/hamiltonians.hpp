#pragma once

#include <functional>
#include <optional>

#include "micz/fields.hpp"
#include "micz/geometry.hpp"

namespace micz {

enum class Family {
    FlatMultiCenter,
    TwoCenterElliptic,
    StarkZeemanParabolic,
    CurvedMultiCenter,
};

const char* family_name(Family f);

/// Single source of truth for a run: Hamiltonian family plus its parameters.
/// Immutable after construction; validate() enforces the per-family layout
/// (two dyons at (0,0,-a)/(0,0,+a) for the two-center family, one dyon at the
/// origin with z-aligned uniform fields for Stark-Zeeman, ...).
struct SystemSpec {
    Family family = Family::FlatMultiCenter;
    DyonConfig cfg;
    MetricProfile profile = MetricProfile::flat();
    double a = 1.0;  ///< focal half-distance (two-center family)

    double s_plus() const { return cfg.s(0) + cfg.s(1); }
    double s_minus() const { return cfg.s(0) - cfg.s(1); }
    double q_plus() const { return cfg.dyons[0].q + cfg.dyons[1].q; }
    double q_minus() const { return cfg.dyons[0].q - cfg.dyons[1].q; }
};

/// Throws InvalidArgument / FamilyMismatchError when the spec violates its
/// family's layout constraints.
void validate_spec(const SystemSpec& spec);

/// Convenience constructors for the common layouts.
SystemSpec make_two_center(double a, double g1, double q1, double g2, double q2, double e = 1.0);
SystemSpec make_stark_zeeman(double g, double q, double B0z = 0.0, double E0z = 0.0,
                             double e = 1.0);
SystemSpec make_one_center(double g, double q, double e = 1.0);

/// Term-by-term energy of the flat multi-center Hamiltonian evaluated in the
/// gauge-free velocity form.
struct EnergyBreakdown {
    double kinetic = 0;
    double micz_quadratic = 0;  ///< the (sum_i s_i/r_i)^2 / 2 replacement term
    double coulomb = 0;
    double external = 0;        ///< uniform-field potential (Stark-Zeeman)
    double total = 0;
};

/// H = v^2/2 + (sum s_i/r_i)^2/2 + sum e q_i/r_i for the flat families;
/// the Stark-Zeeman family folds the uniform fields into the replacement
/// quadratic ((s/r - e B0 z)^2/2) and the external term (-e E0 z).
EnergyBreakdown flat_hamiltonian(const CartesianPoint& r, const Vec3& v, const SystemSpec& spec);

/// Canonical-form evaluation |p - e A|^2/2 + potentials with the spec's string
/// assignments. Used for gauge-invariance diagnostics only.
double flat_hamiltonian_canonical(const CartesianPoint& r, const Vec3& p, const SystemSpec& spec);

/// Separated two-center Hamiltonian in elliptic coordinates:
///   H = [(xi^2-1)p_xi^2 + (1-eta^2)p_eta^2 + V(xi) + W(eta)] / (2a^2(xi^2-eta^2)).
double elliptic_hamiltonian(const EllipticPoint& q, const EllipticMomenta& p,
                            const SystemSpec& spec);

/// V(xi) = (p_phi^2 + s_-^2 + 2 p_phi s_- xi)/(xi^2-1) + 2 a e q_+ xi.
double elliptic_potential_xi(double xi, double p_phi, const SystemSpec& spec);
/// W(eta) = (p_phi^2 + s_+^2 + 2 p_phi s_+ eta)/(1-eta^2) - 2 a e q_- eta.
double elliptic_potential_eta(double eta, double p_phi, const SystemSpec& spec);

/// Separated Stark-Zeeman Hamiltonian in parabolic coordinates:
///   H = [4 xi p_xi^2 + 4 eta p_eta^2 + V(xi) + W(eta)] / (2(xi+eta)) - e B0 p_phi / 2.
double stark_zeeman_hamiltonian(const ParabolicPoint& q, const ParabolicMomenta& p,
                                const SystemSpec& spec);

/// Same system written in spherical coordinates (the cross-check form).
double stark_zeeman_spherical(const SphericalPoint& q, const SphericalMomenta& p,
                              const SystemSpec& spec);

/// V(xi) = (p_phi - s)^2/xi - 3 s e B0 xi - e E0 xi^2 + e^2 B0^2 xi^3/4 + 2 e q.
double parabolic_potential_xi(double xi, double p_phi, const SystemSpec& spec);
/// W(eta) = (p_phi + s)^2/eta + 3 s e B0 eta + e E0 eta^2 + e^2 B0^2 eta^3/4 + 2 e q.
double parabolic_potential_eta(double eta, double p_phi, const SystemSpec& spec);

/// Curved multi-center Hamiltonian H = |pi|^2/(2G) + e^2 phi_g^2/2 + e phi_q,
/// evaluated from the metric (kinetic) momentum pi = G v, which is gauge-free.
double curved_hamiltonian(const CartesianPoint& r, const Vec3& pi, const SystemSpec& spec,
                          const GreenFunction& green);

/// Canonical evaluation |p - e A(strings)|^2/(2G) + potentials.
double curved_hamiltonian_canonical(const CartesianPoint& r, const Vec3& p, const SystemSpec& spec,
                                    const GreenFunction& green);

/// Completed-square form available when the dyons satisfy the DSZ condition
/// with ratio kappa = q_i/g_i:
///   H = |pi|^2/(2G) + e^2 (phi_g + kappa/e)^2 / 2 - kappa^2/2.
/// Returns nullopt when the DSZ condition fails.
std::optional<double> curved_hamiltonian_dsz_form(const CartesianPoint& r, const Vec3& pi,
                                                  const SystemSpec& spec,
                                                  const GreenFunction& green);

/// One-center comparison form: monopole incorporated by the potential
/// replacement U -> U + s^2/(2 G r^2) instead of the squared scalar potential.
/// curved_hamiltonian - this = -eps s^2/(2 r0^2) on (pseudo)spheres.
double curved_replacement_form(const CartesianPoint& r, const Vec3& pi, const SystemSpec& spec,
                               const GreenFunction& green);

/// The generalized replacement: U(r) -> U(r) + (sum_i s_i/r_i)^2 / (2 G(r)).
std::function<double(const CartesianPoint&)> micz_replace(
    std::function<double(const CartesianPoint&)> U, MetricProfile profile,
    std::vector<Vec3> centers, std::vector<double> s);

}  // namespace micz
