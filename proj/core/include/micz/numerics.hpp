#pragma once

#include <functional>
#include <vector>

namespace micz {

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Returns the n-point Gauss-Legendre rule (computed once per order, cached).
const GaussLegendreRule& gauss_legendre(int n);

/// Integrates f over [a, b] with an n-point Gauss-Legendre rule.
double gauss_legendre_integrate(const std::function<double(double)>& f, double a, double b, int n);

/// Adaptive quadrature with an embedded GL7/GL15 pair and interval bisection.
/// Absolute tolerance; intended for smooth integrands.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-12, int max_depth = 48);

/// Brent root bracketing refinement: f(a) and f(b) must have opposite signs.
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double tol = 1e-14, int max_iter = 200);

/// Cubic Hermite interpolant through samples with prescribed slopes.
/// Fourth-order accurate when the slopes are exact.
class CubicHermite {
public:
    CubicHermite() = default;
    CubicHermite(std::vector<double> x, std::vector<double> y, std::vector<double> slope);

    double operator()(double x) const;
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    bool empty() const { return x_.empty(); }

private:
    std::vector<double> x_, y_, d_;
};

/// Monotone (Fritsch-Carlson) cubic interpolant through sampled data.
/// Preserves monotonicity of the data; used for tabulated metric profiles.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double derivative(double x) const;
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    bool empty() const { return x_.empty(); }

private:
    std::size_t segment(double x) const;
    std::vector<double> x_, y_, d_;  // d_ holds endpoint slopes per node
};

}  // namespace micz
