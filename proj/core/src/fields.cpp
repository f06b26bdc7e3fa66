#include "micz/fields.hpp"

#include <algorithm>
#include <cmath>

#include "micz/errors.hpp"

namespace micz {

Vec3 default_string_direction(int index) {
    // -z tilted a little more per index; keeps stacked sources from sharing a ray.
    const double tx = 0.05 * (index + 1);
    const double ty = 0.013 * (index + 1);
    return Vec3{tx, ty, -1.0}.normalized();
}

MetricProfile MetricProfile::flat() {
    MetricProfile p;
    p.kind_ = Kind::Flat;
    return p;
}

MetricProfile MetricProfile::sphere(double r0) {
    if (!(r0 > 0)) throw InvalidArgument("sphere radius r0 must be positive");
    MetricProfile p;
    p.kind_ = Kind::Sphere;
    p.r0_ = r0;
    return p;
}

MetricProfile MetricProfile::pseudosphere(double r0) {
    if (!(r0 > 0)) throw InvalidArgument("pseudosphere radius r0 must be positive");
    MetricProfile p;
    p.kind_ = Kind::Pseudosphere;
    p.r0_ = r0;
    return p;
}

MetricProfile MetricProfile::custom(std::vector<double> r, std::vector<double> G) {
    for (double g : G)
        if (!(g > 0)) throw InvalidArgument("custom profile samples must be positive");
    MetricProfile p;
    p.kind_ = Kind::Custom;
    p.table_ = MonotoneCubic(std::move(r), std::move(G));
    return p;
}

int MetricProfile::epsilon() const {
    switch (kind_) {
        case Kind::Sphere: return 1;
        case Kind::Pseudosphere: return -1;
        default: return 0;
    }
}

double MetricProfile::G(double r) const {
    switch (kind_) {
        case Kind::Flat: return 1.0;
        case Kind::Sphere:
        case Kind::Pseudosphere: {
            const double denom = 1.0 + epsilon() * r * r;
            if (denom == 0.0) throw DomainError("metric profile singular at r = 1");
            const double t = 2.0 * r0_ / denom;
            return t * t;
        }
        case Kind::Custom: return table_(r);
    }
    return 1.0;
}

double MetricProfile::dG_dr(double r) const {
    switch (kind_) {
        case Kind::Flat: return 0.0;
        case Kind::Sphere:
        case Kind::Pseudosphere: {
            const double denom = 1.0 + epsilon() * r * r;
            if (denom == 0.0) throw DomainError("metric profile singular at r = 1");
            return -16.0 * r0_ * r0_ * epsilon() * r / (denom * denom * denom);
        }
        case Kind::Custom: {
            // Central finite difference on the interpolant.
            const double h = 1e-6;
            const double lo = std::max(domain_min(), r - h);
            const double hi = std::min(domain_max(), r + h);
            return (table_(hi) - table_(lo)) / (hi - lo);
        }
    }
    return 0.0;
}

double MetricProfile::sqrtG(double r) const {
    switch (kind_) {
        case Kind::Flat: return 1.0;
        case Kind::Sphere:
        case Kind::Pseudosphere: {
            const double denom = 1.0 + epsilon() * r * r;
            if (denom == 0.0) throw DomainError("metric profile singular at r = 1");
            return 2.0 * r0_ / denom;  // signed branch beyond r=1 on the pseudosphere
        }
        case Kind::Custom: return std::sqrt(table_(r));
    }
    return 1.0;
}

double MetricProfile::domain_min() const {
    return kind_ == Kind::Custom ? table_.x_min() : 0.0;
}

double MetricProfile::domain_max() const {
    return kind_ == Kind::Custom ? table_.x_max() : std::numeric_limits<double>::infinity();
}

GreenFunction::GreenFunction(MetricProfile profile, double normalization)
    : profile_(std::move(profile)), normalization_(normalization) {
    if (profile_.kind() != MetricProfile::Kind::Custom) return;

    // Cumulative antiderivative of 1/(r^2 sqrt(G)) over the sampled domain,
    // anchored to zero at the right edge (phi decreases outward like 1/r).
    const double lo = profile_.domain_min(), hi = profile_.domain_max();
    if (!(lo > 0)) throw InvalidArgument("custom profile domain must start at r > 0");
    // Log-spaced nodes with the exact slope -1/(r^2 sqrt(G)) keep the
    // interpolation error below the 1e-8 quadrature budget near small r.
    const int n = 2049;
    std::vector<double> rs(n), phis(n), slopes(n);
    const double ratio = std::log(hi / lo);
    for (int i = 0; i < n; ++i) rs[i] = lo * std::exp(ratio * i / (n - 1.0));
    rs[n - 1] = hi;
    const auto integrand = [this](double r) { return 1.0 / (r * r * profile_.sqrtG(r)); };
    phis[n - 1] = 0.0;
    for (int i = n - 2; i >= 0; --i)
        phis[i] = phis[i + 1] + adaptive_integrate(integrand, rs[i], rs[i + 1], 1e-14);
    for (int i = 0; i < n; ++i) slopes[i] = -integrand(rs[i]);
    phi_table_ = CubicHermite(std::move(rs), std::move(phis), std::move(slopes));
}

double GreenFunction::operator()(double r) const {
    if (!(r > 0)) throw DomainError("green function evaluated at r <= 0");
    switch (profile_.kind()) {
        case MetricProfile::Kind::Flat:
            return 1.0 / r + normalization_;
        case MetricProfile::Kind::Sphere:
        case MetricProfile::Kind::Pseudosphere: {
            const double eps = profile_.epsilon(), r0 = profile_.r0();
            return (1.0 - eps * r * r) / (2.0 * r0 * r) + normalization_;
        }
        case MetricProfile::Kind::Custom:
            return phi_table_(r) + normalization_;
    }
    return 1.0 / r;
}

double GreenFunction::derivative(double r) const {
    if (!(r > 0)) throw DomainError("green function derivative at r <= 0");
    return -1.0 / (r * r * profile_.sqrtG(r));
}

GreenFunction green_function(const MetricProfile& profile, double normalization) {
    return GreenFunction(profile, normalization);
}

Vec3 dirac_vector_potential(const Vec3& r, const Vec3& center, const Vec3& n, int dyon_index) {
    const Vec3 d = r - center;
    const double dist = d.norm();
    if (dist < 1e-13) throw AtCenterError(dyon_index);
    const double denom = dist - n.dot(d);
    if (denom < kStringTolerance * dist) throw OnStringError(dyon_index);
    return d.cross(n) / (dist * denom);
}

Mat3 dirac_vector_potential_jacobian(const Vec3& r, const Vec3& center, const Vec3& n,
                                     int dyon_index) {
    const Vec3 d = r - center;
    const double dist = d.norm();
    if (dist < 1e-13) throw AtCenterError(dyon_index);
    const double D = dist * dist - dist * n.dot(d);
    if (D < kStringTolerance * dist * dist) throw OnStringError(dyon_index);
    const Vec3 a = d.cross(n);
    // dD/dx_k = 2 x_k - (x_k/|x|)(n.x) - |x| n_k
    const double nd = n.dot(d);
    const Vec3 gradD{2 * d.x - (d.x / dist) * nd - dist * n.x,
                     2 * d.y - (d.y / dist) * nd - dist * n.y,
                     2 * d.z - (d.z / dist) * nd - dist * n.z};
    // d(d x n)_j/dx_k = eps_{jkm} n_m
    const double eps_n[3][3] = {{0, n.z, -n.y}, {-n.z, 0, n.x}, {n.y, -n.x, 0}};
    const double av[3] = {a.x, a.y, a.z};
    const double gD[3] = {gradD.x, gradD.y, gradD.z};
    Mat3 J;
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) J.m[j][k] = eps_n[j][k] / D - av[j] * gD[k] / (D * D);
    return J;
}

Vec3 monopole_B(const Vec3& r, const Vec3& center, double g, int dyon_index) {
    const Vec3 d = r - center;
    const double dist = d.norm();
    if (dist < 1e-13) throw AtCenterError(dyon_index);
    return d * (g / (dist * dist * dist));
}

TotalPotentials total_potentials(const DyonConfig& cfg, const GreenFunction& green, const Vec3& r) {
    TotalPotentials out;
    for (std::size_t i = 0; i < cfg.dyons.size(); ++i) {
        const Dyon& dy = cfg.dyons[i];
        if (dy.g != 0.0)
            out.A_total +=
                dirac_vector_potential(r, dy.position, dy.string, static_cast<int>(i)) * dy.g;
        const double ri = (r - dy.position).norm();
        if (ri < 1e-13) throw AtCenterError(static_cast<int>(i));
        const double phi = green(ri);
        out.phi_g += dy.g * phi;
        out.phi_q += dy.q * phi;
    }
    return out;
}

std::optional<double> dsz_check(const DyonConfig& cfg, double tol) {
    const auto& ds = cfg.dyons;
    if (ds.empty()) return std::nullopt;
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t j = i + 1; j < ds.size(); ++j) {
            const double lhs = ds[i].g * ds[j].q - ds[j].g * ds[i].q;
            const double scale = std::max({1.0, std::abs(ds[i].g * ds[j].q), std::abs(ds[j].g * ds[i].q)});
            if (std::abs(lhs) > tol * scale) return std::nullopt;
        }
    for (const Dyon& dy : ds)
        if (dy.g != 0.0) return dy.q / dy.g;
    return std::nullopt;  // no magnetic charge anywhere; ratio undefined
}

}  // namespace micz
