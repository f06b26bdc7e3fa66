#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "micz/hamiltonians.hpp"

namespace micz {

/// Instantaneous state of the probe particle. For the flat families `v` is the
/// velocity; for the curved family it is the metric (kinetic) momentum
/// pi = G(r) v, which is gauge-independent.
struct PhaseState {
    double t = 0.0;
    Vec3 r{};
    Vec3 v{};
};

struct StateDerivative {
    Vec3 dr{};
    Vec3 dv{};
};

/// Time derivative of the state under the spec's dynamics. Flat families use
/// the gauge-free Newton-Lorentz form; the curved family evolves the metric
/// momentum (also string-free).
StateDerivative equations_of_motion(const PhaseState& s, const SystemSpec& spec,
                                    const GreenFunction* green = nullptr);

enum class IntegratorMethod { Dopri5, ImplicitMidpoint };

struct IntegratorControls {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.0;    ///< 0: unlimited
    double fixed_step = 1e-3; ///< implicit midpoint only
    double sample_dt = 0.0;   ///< 0: record every accepted step
    double r_collide = 1e-6;
    std::uint64_t max_steps = 50'000'000;
    IntegratorMethod method = IntegratorMethod::Dopri5;
    /// Curved family only: integrate canonical momenta with explicit Dirac
    /// strings, re-gauging (two-patch switching) whenever the particle drifts
    /// too close to a string ray.
    bool curved_canonical = false;
};

enum class Termination { Completed, Collision, StepUnderflow, MaxSteps };

const char* termination_name(Termination t);

struct Trajectory {
    std::vector<PhaseState> samples;
    Termination termination = Termination::Completed;
    int collision_dyon = -1;
    std::uint64_t steps = 0;
    std::uint64_t rejected_steps = 0;
    std::uint64_t gauge_patches = 0;
    double t_end_requested = 0.0;
};

/// Integrates from s0 to t_end. Terminates early (flagged, not an error) on
/// collision with a center or on step underflow.
Trajectory integrate(const PhaseState& s0, const SystemSpec& spec, double t_end,
                     const IntegratorControls& controls = {});

/// Values of the conserved quantities appropriate to the family, computed from
/// one instantaneous state via the canonical momentum maps.
struct ConservedSet {
    double E = 0.0;
    std::optional<double> p_phi;       ///< axially symmetric configurations
    std::optional<double> separation;  ///< I_e (two-center) or I_p (Stark-Zeeman)
    std::optional<Vec3> J;             ///< one-center flat only
    std::optional<double> cone_cos;    ///< rhat . Jhat for one-center flat
};

ConservedSet conserved_quantities(const PhaseState& s, const SystemSpec& spec,
                                  const GreenFunction* green = nullptr);

/// True when every dyon sits on the z-axis (so p_phi is meaningful).
bool axially_symmetric(const SystemSpec& spec);

/// Canonical azimuthal momentum p_phi = (r x v)_z + gauge term (curved family:
/// (r x pi)_z + monopole gauge term). A constant of motion for axially
/// symmetric configurations.
double axial_momentum(const PhaseState& s, const SystemSpec& spec);

struct DriftStats {
    double first = 0.0;
    double max_abs_drift = 0.0;
    double max_rel_drift = 0.0;
    bool flagged = false;
};

struct ConservationReport {
    std::map<std::string, DriftStats> quantities;
    std::map<std::string, std::vector<double>> series;
    double flag_threshold = 1e-6;
};

/// Per-quantity drift statistics over a trajectory. Quantities whose relative
/// drift exceeds `flag_threshold` are flagged.
ConservationReport monitor(const Trajectory& traj, const SystemSpec& spec,
                           double flag_threshold = 1e-6);

/// Returns a config whose string directions keep `point` at more than 10
/// degrees from every string ray (flipping strings as needed).
DyonConfig gauge_patch(const Vec3& point, const DyonConfig& cfg);

}  // namespace micz
