#include <doctest.h>

#include <cmath>

#include "micz/errors.hpp"
#include "micz/fields.hpp"
#include "support/rng.hpp"

using namespace micz;
using testsupport::Rng;

namespace {

// Finite-difference curl, step 1e-5.
Vec3 fd_curl(const std::function<Vec3(const Vec3&)>& A, const Vec3& r, double h = 1e-5) {
    const auto d = [&](int comp, const Vec3& dir) {
        const Vec3 plus = A(r + dir * h), minus = A(r - dir * h);
        return ((&plus.x)[comp] - (&minus.x)[comp]) / (2 * h);
    };
    const Vec3 ex{1, 0, 0}, ey{0, 1, 0}, ez{0, 0, 1};
    return {d(2, ey) - d(1, ez), d(0, ez) - d(2, ex), d(1, ex) - d(0, ey)};
}

}  // namespace

TEST_CASE("dirac potential reference values") {
    const Vec3 n{0, 0, 1};
    const Vec3 a = dirac_vector_potential({1, 0, 0}, {0, 0, 0}, n);
    CHECK(a.x == doctest::Approx(0.0));
    CHECK(a.y == doctest::Approx(-1.0));
    CHECK(a.z == doctest::Approx(0.0));

    const Vec3 b = dirac_vector_potential({0, 0, -1}, {0, 0, 0}, n);
    CHECK(b.norm() == doctest::Approx(0.0));

    CHECK_THROWS_AS(dirac_vector_potential({0, 0, 1}, {0, 0, 0}, n), OnStringError);
    CHECK_THROWS_AS(dirac_vector_potential({0, 0, 0}, {0, 0, 0}, n), AtCenterError);
}

TEST_CASE("monopole field reference values") {
    const Vec3 b1 = monopole_B({0, 0, 2}, {0, 0, 0}, 1.0);
    CHECK(b1.z == doctest::Approx(0.25));
    const Vec3 b2 = monopole_B({1, 0, 0}, {0, 0, 0}, -2.0);
    CHECK(b2.x == doctest::Approx(-2.0));
    CHECK_THROWS_AS(monopole_B({0, 0, 0}, {0, 0, 0}, 1.0), AtCenterError);
}

TEST_CASE("curl of the string potential reproduces the monopole field") {
    Rng rng(31u);
    int tested = 0;
    while (tested < 300) {
        const Vec3 center = rng.box(0.5);
        const Vec3 n = rng.unit_vector();
        const double g = rng.uniform(-2.0, 2.0);
        Vec3 r = rng.box(2.0);
        const Vec3 d = r - center;
        if (d.norm() < 0.3) continue;
        if (d.norm() - n.dot(d) < 0.2 * d.norm()) continue;  // keep clear of the string
        const auto A = [&](const Vec3& x) {
            return dirac_vector_potential(x, center, n) * g;
        };
        const Vec3 curl = fd_curl(A, r);
        const Vec3 B = monopole_B(r, center, g);
        CHECK((curl - B).norm() <= 1e-6 * std::max(1.0, B.norm()));
        ++tested;
    }
}

TEST_CASE("string direction is a gauge choice: curls agree") {
    Rng rng(32u);
    for (int iter = 0; iter < 50; ++iter) {
        const Vec3 n1 = rng.unit_vector();
        const Vec3 n2 = rng.unit_vector();
        Vec3 r = rng.box(2.0);
        if (r.norm() < 0.4) r.x += 1.0;
        const Vec3 d = r;
        if (d.norm() - n1.dot(d) < 0.2 * d.norm() || d.norm() - n2.dot(d) < 0.2 * d.norm())
            continue;
        const auto A1 = [&](const Vec3& x) { return dirac_vector_potential(x, {}, n1); };
        const auto A2 = [&](const Vec3& x) { return dirac_vector_potential(x, {}, n2); };
        CHECK((fd_curl(A1, r) - fd_curl(A2, r)).norm() < 1e-6);
    }
}

TEST_CASE("analytic potential Jacobian matches finite differences") {
    Rng rng(33u);
    for (int iter = 0; iter < 100; ++iter) {
        const Vec3 n = rng.unit_vector();
        Vec3 r = rng.box(2.0);
        if (r.norm() < 0.4) r.y += 1.2;
        if (r.norm() - n.dot(r) < 0.2 * r.norm()) continue;
        const Mat3 J = dirac_vector_potential_jacobian(r, {}, n);
        const double h = 1e-6;
        for (int k = 0; k < 3; ++k) {
            Vec3 dr{};
            (&dr.x)[k] = h;
            const Vec3 plus = dirac_vector_potential(r + dr, {}, n);
            const Vec3 minus = dirac_vector_potential(r - dr, {}, n);
            for (int j = 0; j < 3; ++j) {
                const double fd = ((&plus.x)[j] - (&minus.x)[j]) / (2 * h);
                CHECK(J.m[j][k] == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
            }
        }
    }
}

TEST_CASE("green function closed forms") {
    const GreenFunction flat(MetricProfile::flat());
    CHECK(flat(2.0) == doctest::Approx(0.5));

    const GreenFunction sphere(MetricProfile::sphere(1.0));
    CHECK(sphere(1.0) == doctest::Approx(0.0));

    const GreenFunction pseudo(MetricProfile::pseudosphere(0.5));
    CHECK(pseudo(1.0) == doctest::Approx(2.0));
}

TEST_CASE("green function satisfies d(phi)/dr = -1/(r^2 sqrt(G))") {
    const double h = 1e-6;
    for (const MetricProfile& profile :
         {MetricProfile::flat(), MetricProfile::sphere(1.3), MetricProfile::pseudosphere(0.7)}) {
        const GreenFunction green(profile);
        for (double r : {0.2, 0.5, 0.9, 1.1, 2.0, 5.0}) {
            const double fd = (green(r + h) - green(r - h)) / (2 * h);
            CHECK(fd == doctest::Approx(green.derivative(r)).epsilon(1e-8));
            CHECK(green.derivative(r) ==
                  doctest::Approx(-1.0 / (r * r * profile.sqrtG(r))).epsilon(1e-12));
        }
    }
}

TEST_CASE("tabulated profile integrates to the closed-form green function") {
    // Sample the sphere metric into a table and compare the quadrature result
    // against the analytic potential across the anchor.
    const double r0 = 1.2;
    const MetricProfile analytic = MetricProfile::sphere(r0);
    std::vector<double> rs, Gs;
    const double lo = 0.05, hi = 12.0;
    for (int i = 0; i < 1600; ++i) {
        const double r = lo * std::exp(std::log(hi / lo) * i / 1599.0);
        rs.push_back(r);
        Gs.push_back(analytic.G(r));
    }
    const GreenFunction numeric(MetricProfile::custom(rs, Gs));
    const GreenFunction closed(analytic);
    // The table is anchored at its right edge; compare in-range differences so
    // the test measures the quadrature, not the arbitrary additive constant.
    const double r_ref = 10.0;
    for (double r = 0.1; r <= 10.0; r += 0.37) {
        const double want = closed(r) - closed(r_ref);
        CHECK(numeric(r) - numeric(r_ref) == doctest::Approx(want).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("superposed potentials") {
    GreenFunction flat(MetricProfile::flat());

    DyonConfig single;
    single.dyons = {Dyon{{0, 0, 0}, 1.0, 0.0, {0, 0, -1}}};
    const TotalPotentials tp1 = total_potentials(single, flat, {0, 0, 2});
    CHECK(tp1.phi_g == doctest::Approx(0.5));
    CHECK(tp1.phi_q == doctest::Approx(0.0));

    DyonConfig pair;
    pair.dyons = {Dyon{{0, 0, 1}, 0.0, 1.0, {0, 0, 1}},
                  Dyon{{0, 0, -1}, 0.0, 1.0, {0, 0, -1}}};
    const TotalPotentials tp2 = total_potentials(pair, flat, {0, 0, 0});
    CHECK(tp2.phi_q == doctest::Approx(2.0));

    DyonConfig cancel;
    cancel.dyons = {Dyon{{0, 0, 0.7}, 1.0, 0.0, {0, 0, 1}},
                    Dyon{{0, 0, -0.7}, -1.0, 0.0, {0, 0, -1}}};
    const TotalPotentials tp3 = total_potentials(cancel, flat, {2.0, 0.5, 0});
    CHECK(tp3.phi_g == doctest::Approx(0.0).scale(1.0));

    CHECK_THROWS_AS(total_potentials(single, flat, {0, 0, -1e-20}), AtCenterError);
}

TEST_CASE("charge-ratio quantization check") {
    const auto make = [](std::initializer_list<std::pair<double, double>> gs) {
        DyonConfig cfg;
        int i = 0;
        for (const auto& [g, q] : gs)
            cfg.dyons.push_back({{0, 0, static_cast<double>(i++)}, g, q});
        return cfg;
    };
    CHECK(dsz_check(make({{1, 2}, {2, 4}})).value() == doctest::Approx(2.0));
    CHECK(!dsz_check(make({{1, 2}, {2, 3}})).has_value());
    CHECK(dsz_check(make({{1, 0}, {5, 0}})).value() == doctest::Approx(0.0));
}
