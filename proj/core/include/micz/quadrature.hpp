#pragma once

#include <vector>

#include "micz/dynamics.hpp"

namespace micz {

enum class RadicandVar { XiElliptic, EtaElliptic, XiParabolic, EtaParabolic };

/// Constants of motion entering the separated radial equations. For the
/// Stark-Zeeman family `E` is the shifted energy H + e B0 p_phi / 2 (the
/// quantity conjugate to time in the separated equations).
struct SeparationConstants {
    double E = 0.0;
    double sep_n = 0.0;
    double p_phi = 0.0;
};

/// Extracts (E, sep_n, p_phi) from an instantaneous state via the canonical
/// momentum maps and the separation invariant of the family.
SeparationConstants extract_constants(const PhaseState& s, const SystemSpec& spec);

/// One separated radial function:
///   elliptic:  R(xi)  = 2a^2 E + (n - V(xi))/(xi^2-1)   [= p_xi^2]
///              R(eta) = 2a^2 E - (n + W(eta))/(1-eta^2) [= p_eta^2]
///   parabolic: R(xi)  = 2E + (n - V(xi))/xi             [= (2 p_xi)^2]
///              R(eta) = 2E - (n + W(eta))/eta           [= (2 p_eta)^2]
class Radicand {
public:
    Radicand(SystemSpec spec, SeparationConstants constants, RadicandVar var);

    double operator()(double x) const;
    /// Central finite difference of R; used for double-root classification.
    double derivative(double x) const;
    double second_derivative(double x) const;

    RadicandVar var() const { return var_; }
    const SeparationConstants& constants() const { return constants_; }
    const SystemSpec& spec() const { return spec_; }

    /// Open lower/upper bounds of the coordinate's domain.
    double domain_min() const;
    double domain_max() const;

    /// Weight of dx/sqrt(R) in the time quadrature (a^2 or 1/2).
    double time_weight(double x) const;
    /// Weight of dx/sqrt(R) in the azimuth quadrature.
    double azimuth_weight(double x) const;
    /// Weight of dx/sqrt(R) in the trajectory relation.
    double trajectory_weight(double x) const;

private:
    SystemSpec spec_;
    SeparationConstants constants_;
    RadicandVar var_;
};

Radicand radicand(const SystemSpec& spec, const SeparationConstants& constants, RadicandVar var);

enum class LibrationKind { Bound, Scattering, Degenerate };

/// Interval between turning points on which the radicand is positive.
/// `lo_is_root`/`hi_is_root` record whether the endpoint is a simple zero of R
/// (false at a domain edge or a scattering cutoff).
struct LibrationInterval {
    double lo = 0.0;
    double hi = 0.0;
    LibrationKind kind = LibrationKind::Bound;
    bool lo_is_root = true;
    bool hi_is_root = true;
};

/// Finds all libration intervals of R inside [search_lo, search_hi]: brackets
/// sign changes on a fine grid and polishes roots to ~1e-12; a vanishing local
/// maximum is classified Degenerate. Throws NoLibrationError when R < 0
/// throughout.
std::vector<LibrationInterval> turning_points(const Radicand& R, double search_lo,
                                              double search_hi, int grid = 4000);

struct QuadratureResult {
    double value = 0.0;
    bool degenerate = false;  ///< harmonic stationary estimate, not a quadrature
};

/// Integral of time_weight(x) dx / sqrt(R) over [lo, hi] (half a libration).
/// Endpoint 1/sqrt singularities are removed by the x = lo + (hi-lo) sin^2 u
/// substitution; `nodes` controls the Gauss-Legendre order. For a degenerate
/// interval returns the harmonic-approximation period estimate, flagged.
QuadratureResult time_integral(const Radicand& R, const LibrationInterval& li, int nodes = 96);

/// Same for the azimuth weight.
QuadratureResult azimuth_integral(const Radicand& R, const LibrationInterval& li, int nodes = 96);

/// Weighted partial integral over [x0, x1] inside the libration interval,
/// with the endpoint substitution chosen by which interval ends are roots.
double segment_time_integral(const Radicand& R, const LibrationInterval& li, double x0, double x1,
                             int nodes = 96);
double segment_azimuth_integral(const Radicand& R, const LibrationInterval& li, double x0,
                                double x1, int nodes = 96);
double segment_trajectory_integral(const Radicand& R, const LibrationInterval& li, double x0,
                                   double x1, int nodes = 96);

/// Tabulated monotone maps x -> int trajectory_weight dx / sqrt(R) for the two
/// separated variables; equal increments of the two maps trace the orbit.
struct TrajectoryRelation {
    std::vector<double> xi, F_xi;
    std::vector<double> eta, F_eta;
};
TrajectoryRelation trajectory_relation(const Radicand& R_xi, const LibrationInterval& li_xi,
                                       const Radicand& R_eta, const LibrationInterval& li_eta,
                                       int samples = 129);

struct ValidationReport {
    double max_dt_residual = 0.0;
    double max_dphi_residual = 0.0;
    LibrationInterval xi_interval;
    LibrationInterval eta_interval;
    std::size_t samples_compared = 0;
};

/// Cross-validates an integrated trajectory against the separated quadrature
/// solution: rebuilds t and phi increment-by-increment from the radicands
/// (tracking libration branches through turning points) and reports the
/// largest residuals.
ValidationReport validate_quadrature(const Trajectory& traj, const SystemSpec& spec);

}  // namespace micz
