#include <doctest.h>

#include <cmath>

#include "micz/errors.hpp"
#include "micz/hamiltonians.hpp"
#include "support/rng.hpp"

using namespace micz;
using testsupport::Rng;

TEST_CASE("flat Hamiltonian reference values") {
    SUBCASE("pure Coulomb") {
        const SystemSpec spec = make_one_center(0.0, -1.0);
        const EnergyBreakdown eb = flat_hamiltonian({2, 0, 0}, {0, 0, 0}, spec);
        CHECK(eb.total == doctest::Approx(-0.5));
        CHECK(eb.kinetic == 0.0);
        CHECK(eb.micz_quadratic == 0.0);
    }
    SUBCASE("pure monopole quadratic") {
        const SystemSpec spec = make_one_center(1.0, 0.0);
        const EnergyBreakdown eb = flat_hamiltonian({0, 1, 0}, {0, 0, 0}, spec);
        CHECK(eb.total == doctest::Approx(0.5));
    }
    SUBCASE("two stacked monopoles") {
        const SystemSpec spec = make_two_center(1.0, 1.0, 0.0, 1.0, 0.0);
        const EnergyBreakdown eb = flat_hamiltonian({0, 0, 0}, {0, 0, 0}, spec);
        CHECK(eb.total == doctest::Approx(2.0));
    }
    SUBCASE("breakdown sums exactly") {
        Rng rng(41u);
        const SystemSpec spec = make_two_center(1.0, 0.7, -0.9, -0.3, 0.4);
        for (int i = 0; i < 100; ++i) {
            Vec3 r = rng.box(3.0);
            if (std::hypot(r.x, r.y) < 0.2) r.x += 1.0;
            const Vec3 v = rng.box(1.5);
            const EnergyBreakdown eb = flat_hamiltonian(r, v, spec);
            CHECK(std::abs(eb.total - (eb.kinetic + eb.micz_quadratic + eb.coulomb + eb.external)) <=
                  1e-14 * std::max(1.0, std::abs(eb.total)));
        }
    }
}

TEST_CASE("elliptic separated potentials") {
    SUBCASE("pure attractive pair, no monopoles") {
        SystemSpec spec = make_two_center(1.0, 0.0, 0.5, 0.0, 0.5);
        CHECK(elliptic_potential_xi(2.0, 0.0, spec) == doctest::Approx(4.0));  // 2 a e q_+ xi
        // q_- = 0 makes the eta potential vanish at zero momentum
        CHECK(elliptic_potential_eta(0.3, 0.0, spec) == doctest::Approx(0.0));
        CHECK(elliptic_potential_eta(-0.8, 0.0, spec) == doctest::Approx(0.0));
    }
    SUBCASE("single monopole on the lower focus") {
        SystemSpec spec = make_two_center(1.0, 1.0, 0.0, 0.0, 0.0);
        // (p^2 + s_-^2 + 2 p s_- xi)/(xi^2-1) with s_- = s_+ = 1
        CHECK(elliptic_potential_xi(2.0, 1.0, spec) == doctest::Approx(2.0));
        CHECK(elliptic_potential_eta(0.5, 1.0, spec) == doctest::Approx((1.0 + 1.0 + 1.0) / 0.75));
    }
}

TEST_CASE("elliptic Hamiltonian equals the velocity form") {
    SUBCASE("no monopoles, equal electric charges: pure two-center Coulomb") {
        const SystemSpec spec = make_two_center(1.0, 0.0, -0.7, 0.0, -0.7);
        const Vec3 r{1.4, -0.3, 0.6};
        const EllipticPoint q = to_elliptic(r, spec.a);
        const EllipticMomenta p = elliptic_momenta(r, {0, 0, 0}, spec.a, spec.cfg);
        const double r1 = (r - spec.cfg.dyons[0].position).norm();
        const double r2 = (r - spec.cfg.dyons[1].position).norm();
        CHECK(elliptic_hamiltonian(q, p, spec) ==
              doctest::Approx(-0.7 / r1 - 0.7 / r2).epsilon(1e-13));
    }
    SUBCASE("rest state, mixed charges") {
        const SystemSpec spec = make_two_center(1.0, 1.0, 0.3, 0.5, -0.2);
        const EllipticPoint q{2.0, 0.5, 0.0, 1.0};
        const Vec3 r = from_elliptic(q);
        const EllipticMomenta p = elliptic_momenta(r, {0, 0, 0}, 1.0, spec.cfg);
        const double h_sep = elliptic_hamiltonian(q, p, spec);
        const double h_flat = flat_hamiltonian(r, {0, 0, 0}, spec).total;
        CHECK(h_sep == doctest::Approx(h_flat).epsilon(1e-13));
        CHECK(h_flat == doctest::Approx(23.0 / 90.0));
    }
    SUBCASE("random phase points, generic charges") {
        Rng rng(42u);
        const SystemSpec spec = make_two_center(1.0, 1.1, -0.8, -0.6, 0.4);
        int done = 0;
        while (done < 1000) {
            Vec3 r = rng.box(3.0);
            if (std::hypot(r.x, r.y) < 0.05) continue;
            if ((r - Vec3{0, 0, 1}).norm() < 0.1 || (r - Vec3{0, 0, -1}).norm() < 0.1) continue;
            const Vec3 v = rng.box(2.0);
            const EllipticPoint q = to_elliptic(r, spec.a);
            const EllipticMomenta p = elliptic_momenta(r, v, spec.a, spec.cfg);
            const double h_sep = elliptic_hamiltonian(q, p, spec);
            const double h_flat = flat_hamiltonian(r, v, spec).total;
            CHECK(std::abs(h_sep - h_flat) <= 1e-9 * (1.0 + std::abs(h_flat)));
            ++done;
        }
    }
    SUBCASE("free particle separated form is nonnegative") {
        const SystemSpec spec = make_two_center(1.0, 0.0, 0.0, 0.0, 0.0);
        Rng rng(43u);
        for (int i = 0; i < 200; ++i) {
            const EllipticPoint q{rng.uniform(1.01, 4.0), rng.uniform(-0.99, 0.99), 0.0, 1.0};
            const EllipticMomenta p{rng.uniform(-2, 2), rng.uniform(-2, 2), 0.0};
            CHECK(elliptic_hamiltonian(q, p, spec) >= 0.0);
        }
    }
    SUBCASE("boundary with nonzero momenta is rejected") {
        const SystemSpec spec = make_two_center(1.0, 1.0, 0.0, 0.0, 0.0);
        CHECK_THROWS_AS(elliptic_hamiltonian({1.0, 0.5, 0.0, 1.0}, {1.0, 0.0, 0.0}, spec),
                        BoundaryDegenerateError);
    }
}

TEST_CASE("parabolic separated potentials") {
    SUBCASE("free azimuthal barrier") {
        const SystemSpec spec = make_stark_zeeman(0.0, 0.0, 0.0, 0.0);
        CHECK(parabolic_potential_xi(2.0, 1.0, spec) == doctest::Approx(0.5));
    }
    SUBCASE("barrier vanishes when p_phi equals the coupling") {
        const SystemSpec spec = make_stark_zeeman(1.0, 0.0, 0.0, 0.0);
        for (double xi : {0.5, 1.0, 2.0, 7.0})
            CHECK(parabolic_potential_xi(xi, 1.0, spec) == doctest::Approx(0.0));
    }
    SUBCASE("magnetic terms") {
        const SystemSpec spec = make_stark_zeeman(1.0, 0.0, 1.0, 0.0);
        // (p-s)^2/xi - 3 s eB xi + e^2 B^2 xi^3/4 at p=0, xi=2
        CHECK(parabolic_potential_xi(2.0, 0.0, spec) == doctest::Approx(-3.5));
        // (p+s)^2/eta + 3 s eB eta + e^2 B^2 eta^3/4 at p=0, eta=1
        CHECK(parabolic_potential_eta(1.0, 0.0, spec) == doctest::Approx(4.25));
    }
}

TEST_CASE("Stark-Zeeman Hamiltonian forms agree") {
    SUBCASE("Kepler circular orbit") {
        const SystemSpec spec = make_stark_zeeman(0.0, -1.0, 0.0, 0.0);
        const Vec3 r{1, 0, 0}, v{0, 1, 0};
        const ParabolicPoint q = to_parabolic(r);
        const ParabolicMomenta p = parabolic_momenta(r, v, spec.cfg);
        CHECK(stark_zeeman_hamiltonian(q, p, spec) == doctest::Approx(-0.5));
    }
    SUBCASE("all couplings zero at rest") {
        const SystemSpec spec = make_stark_zeeman(0.0, 0.0, 0.0, 0.0);
        const Vec3 r{0.4, 0.3, -0.7};
        const ParabolicPoint q = to_parabolic(r);
        const ParabolicMomenta p = parabolic_momenta(r, {0, 0, 0}, spec.cfg);
        CHECK(stark_zeeman_hamiltonian(q, p, spec) == doctest::Approx(0.0));
    }
    SUBCASE("random phase points vs velocity and spherical forms") {
        Rng rng(44u);
        const SystemSpec spec = make_stark_zeeman(0.8, -1.2, 0.07, 0.04, 1.3);
        int done = 0;
        while (done < 1000) {
            Vec3 r = rng.box(3.0);
            if (std::hypot(r.x, r.y) < 0.05 || r.norm() < 0.2) continue;
            const Vec3 v = rng.box(2.0);
            const ParabolicPoint qp = to_parabolic(r);
            const ParabolicMomenta pp = parabolic_momenta(r, v, spec.cfg);
            const SphericalPoint qs = to_spherical(r);
            const SphericalMomenta ps = spherical_momenta(r, v, spec.cfg);
            const double h_par = stark_zeeman_hamiltonian(qp, pp, spec);
            const double h_sph = stark_zeeman_spherical(qs, ps, spec);
            const double h_vel = flat_hamiltonian(r, v, spec).total;
            CHECK(std::abs(h_par - h_sph) <= 1e-9 * (1.0 + std::abs(h_sph)));
            CHECK(std::abs(h_par - h_vel) <= 1e-9 * (1.0 + std::abs(h_vel)));
            ++done;
        }
    }
}

TEST_CASE("potential replacement closure") {
    SUBCASE("single center") {
        const auto U = micz_replace(nullptr, MetricProfile::flat(), {{0, 0, 0}}, {1.0});
        CHECK(U({2, 0, 0}) == doctest::Approx(0.125));
    }
    SUBCASE("zero coupling is the identity") {
        const auto base = [](const CartesianPoint& r) { return -1.0 / r.norm(); };
        const auto U = micz_replace(base, MetricProfile::flat(), {{0, 0, 0}}, {0.0});
        Rng rng(45u);
        for (int i = 0; i < 50; ++i) {
            Vec3 r = rng.box(2.0);
            if (r.norm() < 0.1) r.z += 1.0;
            CHECK(U(r) == doctest::Approx(base(r)));
        }
    }
    SUBCASE("two equal couplings at equal distance") {
        const auto U =
            micz_replace(nullptr, MetricProfile::flat(), {{0, 0, 1}, {0, 0, -1}}, {1.0, 1.0});
        const double d = std::sqrt(2.0);
        CHECK(U({1, 0, 0}) == doctest::Approx(2.0 / (d * d)));
    }
    SUBCASE("reproduces the flat multi-center potential") {
        const SystemSpec spec = make_two_center(1.0, 0.9, -1.0, -0.4, 0.3);
        const auto coulomb = [&spec](const CartesianPoint& r) {
            double u = 0.0;
            for (const Dyon& dy : spec.cfg.dyons)
                u += spec.cfg.e * dy.q / (r - dy.position).norm();
            return u;
        };
        const auto U = micz_replace(coulomb, spec.profile,
                                    {spec.cfg.dyons[0].position, spec.cfg.dyons[1].position},
                                    {spec.cfg.s(0), spec.cfg.s(1)});
        Rng rng(46u);
        for (int i = 0; i < 50; ++i) {
            Vec3 r = rng.box(3.0);
            if ((r - Vec3{0, 0, 1}).norm() < 0.2 || (r - Vec3{0, 0, -1}).norm() < 0.2) continue;
            const EnergyBreakdown eb = flat_hamiltonian(r, {0, 0, 0}, spec);
            CHECK(U(r) == doctest::Approx(eb.total).epsilon(1e-13));
        }
    }
}

TEST_CASE("curved Hamiltonian") {
    SUBCASE("flat profile reduces to the flat form") {
        SystemSpec spec;
        spec.family = Family::CurvedMultiCenter;
        spec.profile = MetricProfile::flat();
        spec.cfg.e = 1.0;
        spec.cfg.dyons = {Dyon{{0, 0, -0.8}, 0.9, -0.5, default_string_direction(0)},
                          Dyon{{0, 0, 0.8}, -0.4, 0.7, default_string_direction(1)}};
        const GreenFunction green(spec.profile);
        Rng rng(47u);
        SystemSpec flat_spec = spec;
        flat_spec.family = Family::FlatMultiCenter;
        for (int i = 0; i < 200; ++i) {
            Vec3 r = rng.box(3.0);
            if ((r - spec.cfg.dyons[0].position).norm() < 0.2) continue;
            if ((r - spec.cfg.dyons[1].position).norm() < 0.2) continue;
            const Vec3 v = rng.box(1.5);
            const double hc = curved_hamiltonian(r, v, spec, green);  // G = 1: pi = v
            const double hf = flat_hamiltonian(r, v, flat_spec).total;
            CHECK(hc == doctest::Approx(hf).epsilon(1e-12));
        }
    }
    SUBCASE("one center on the unit sphere, rest on the equator sphere") {
        SystemSpec spec;
        spec.family = Family::CurvedMultiCenter;
        spec.profile = MetricProfile::sphere(1.0);
        spec.cfg.dyons = {Dyon{{0, 0, 0}, 1.0, 0.0, default_string_direction(0)}};
        const GreenFunction green(spec.profile);
        CHECK(curved_hamiltonian({1, 0, 0}, {0, 0, 0}, spec, green) == doctest::Approx(0.0));
    }
    SUBCASE("difference to the replacement-rule form is the exact constant") {
        Rng rng(48u);
        for (const int eps : {+1, -1}) {
            SystemSpec spec;
            spec.family = Family::CurvedMultiCenter;
            const double r0 = 1.4;
            spec.profile =
                eps > 0 ? MetricProfile::sphere(r0) : MetricProfile::pseudosphere(r0);
            const double g = 0.8, s = g;  // e = 1
            spec.cfg.dyons = {Dyon{{0, 0, 0}, g, -0.6, default_string_direction(0)}};
            const GreenFunction green(spec.profile);
            const double expected = -eps * s * s / (2.0 * r0 * r0);
            for (int i = 0; i < 100; ++i) {
                Vec3 r = rng.box(0.8);
                if (r.norm() < 0.15) r.x += 0.5;
                const Vec3 pi = rng.box(1.0);
                const double diff = curved_hamiltonian(r, pi, spec, green) -
                                    curved_replacement_form(r, pi, spec, green);
                CHECK(diff == doctest::Approx(expected).epsilon(1e-12));
            }
        }
    }
    SUBCASE("completed-square form matches when charges share one ratio") {
        SystemSpec spec;
        spec.family = Family::CurvedMultiCenter;
        spec.profile = MetricProfile::sphere(1.1);
        spec.cfg.e = 1.2;
        // q_i / g_i = 0.5 for every dyon
        spec.cfg.dyons = {Dyon{{0, 0, -0.4}, 1.0, 0.5, default_string_direction(0)},
                          Dyon{{0, 0, 0.4}, -0.6, -0.3, default_string_direction(1)}};
        const GreenFunction green(spec.profile);
        Rng rng(49u);
        for (int i = 0; i < 100; ++i) {
            Vec3 r = rng.box(0.8);
            if ((r - spec.cfg.dyons[0].position).norm() < 0.15) continue;
            if ((r - spec.cfg.dyons[1].position).norm() < 0.15) continue;
            const Vec3 pi = rng.box(1.0);
            const auto dsz = curved_hamiltonian_dsz_form(r, pi, spec, green);
            REQUIRE(dsz.has_value());
            const double h = curved_hamiltonian(r, pi, spec, green);
            CHECK(*dsz == doctest::Approx(h).epsilon(1e-13));
        }
    }
}

TEST_CASE("orbital magnetic coupling reproduces the replacement quadratic") {
    // -(e/2) J.B evaluated on one-center states equals s^2/(2 r^2).
    Rng rng(50u);
    const double g = 1.3, e = 0.7, s = e * g;
    for (int i = 0; i < 200; ++i) {
        Vec3 r = rng.box(2.0);
        if (r.norm() < 0.2) r.y += 1.0;
        const Vec3 v = rng.box(1.5);
        const Vec3 J = r.cross(v) - r * (s / r.norm());
        const Vec3 B = monopole_B(r, {0, 0, 0}, g);
        const double coupling = -0.5 * e * J.dot(B);
        CHECK(coupling == doctest::Approx(s * s / (2.0 * r.norm2())).epsilon(1e-12));
    }
}

TEST_CASE("far-center limit approaches the uniform-field system at rate 1/R") {
    // Second dyon at (0,0,-R) with q2 = E0 R^2 mimics a uniform electric field
    // near the origin; the energy offset e q2 / R is subtracted exactly.
    const double E0 = 0.03, g1 = 0.7, q1 = -1.0, e = 1.0;
    const SystemSpec target = make_stark_zeeman(g1, q1, 0.0, E0, e);
    const Vec3 states[3][2] = {{{0.9, 0.2, 0.4}, {0.1, 0.5, -0.2}},
                               {{-0.6, 1.1, -0.3}, {0.4, -0.1, 0.3}},
                               {{0.2, -0.8, 0.9}, {-0.3, 0.2, 0.5}}};
    double prev_err = 0.0;
    for (const double R : {10.0, 20.0, 40.0, 80.0}) {
        SystemSpec wide;
        wide.family = Family::FlatMultiCenter;
        wide.cfg.e = e;
        wide.cfg.dyons = {Dyon{{0, 0, 0}, g1, q1, default_string_direction(0)},
                          Dyon{{0, 0, -R}, 0.0, E0 * R * R, default_string_direction(1)}};
        double err = 0.0;
        for (const auto& st : states) {
            const double h2 = flat_hamiltonian(st[0], st[1], wide).total - e * E0 * R * R / R;
            const double hs = flat_hamiltonian(st[0], st[1], target).total;
            err = std::max(err, std::abs(h2 - hs));
        }
        if (prev_err > 0) {
            const double ratio = prev_err / err;
            CHECK(ratio > 1.9);
            CHECK(ratio < 2.1);
        }
        prev_err = err;
    }
}

TEST_CASE("named error paths") {
    const SystemSpec sz = make_stark_zeeman(1.0, -1.0);
    CHECK_THROWS_AS(stark_zeeman_hamiltonian({0.0, 0.0, 0.0}, {0, 0, 0}, sz), AtOriginError);

    const SystemSpec two = make_two_center(1.0, 1.0, 0.0, 0.5, 0.0);
    CHECK_THROWS_AS(stark_zeeman_hamiltonian({1.0, 1.0, 0.0}, {0, 0, 0}, two),
                    FamilyMismatchError);
    CHECK_THROWS_AS(elliptic_hamiltonian({2.0, 0.5, 0.0, 1.0}, {0, 0, 0}, sz),
                    FamilyMismatchError);

    const GreenFunction green(MetricProfile::flat());
    CHECK_THROWS_AS(green(0.0), DomainError);
    const SystemSpec one = make_one_center(1.0, -1.0);
    CHECK_THROWS_AS(flat_hamiltonian({0, 0, 0}, {0, 0, 0}, one), AtCenterError);
}

TEST_CASE("spec validation rejects malformed layouts") {
    CHECK_THROWS_AS(make_two_center(-1.0, 1, 0, 1, 0), InvalidArgument);
    SystemSpec bad = make_two_center(1.0, 1, 0, 1, 0);
    bad.cfg.dyons.push_back({{0, 0, 0}, 1, 0});
    CHECK_THROWS_AS(validate_spec(bad), FamilyMismatchError);
    SystemSpec tilted = make_stark_zeeman(1, -1, 0.1, 0.1);
    tilted.cfg.B0 = {0.1, 0, 0.1};
    CHECK_THROWS_AS(validate_spec(tilted), FamilyMismatchError);
}
