#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "invrod/errors.hpp"
#include "invrod/scenarios.hpp"

#include <cmath>

using namespace invrod;

namespace {
constexpr Real kPi = 3.14159265358979323846;
}

TEST_CASE("curve families hit their closed-form anchor points") {
    CHECK((curve_point(CurveKind::Spherical, 0.0) - Vec3(0, 0, 1)).norm() < 1e-15);
    CHECK((curve_point(CurveKind::Spherical, 0.5) - Vec3(-1, 0, 0)).norm() < 1e-12);
    CHECK((curve_point(CurveKind::Spherical, 1.0) - Vec3(0, 0, -1)).norm() < 1e-12);

    CHECK((curve_point(CurveKind::Conical, 0.0) - Vec3(1, 0, 0)).norm() < 1e-15);
    // s = 3/4: radius 3/4, angle 2 pi -> back on the +x half-plane
    CHECK((curve_point(CurveKind::Conical, 0.75) - Vec3(0.75, 0, 0.5)).norm() < 1e-12);

    // s = 1: radius (0)^2 + 0.5 at angle 6 pi
    CHECK((curve_point(CurveKind::Hyperbolic, 1.0) - Vec3(0.5, 0, 0.5)).norm() < 1e-12);

    CHECK((curve_point(CurveKind::Helix, 0.0) - Vec3(0, 0, 1)).norm() < 1e-15);
    CHECK((curve_point(CurveKind::Helix, 0.25) - Vec3(1, 0, 1)).norm() < 1e-12);

    CHECK((curve_point(CurveKind::HyperbolicSurface, 0.0) - Vec3(0.6, 0, 0)).norm() <
          1e-15);
    CHECK((curve_point(CurveKind::HyperbolicSurface, 0.5) - Vec3(1.6, 0, -2)).norm() <
          1e-12);
}

TEST_CASE("curve kind names round trip and reject unknowns") {
    for (CurveKind k : {CurveKind::Spherical, CurveKind::Conical, CurveKind::Hyperbolic,
                        CurveKind::Helix, CurveKind::HyperbolicSurface})
        CHECK(curve_kind_from_name(curve_kind_name(k)) == k);
    CHECK_THROWS_AS(curve_kind_from_name("moebius"), UnknownKind);
}

TEST_CASE("default parameter ranges") {
    CHECK(default_range(CurveKind::Hyperbolic) == std::pair<Real, Real>(0.1, 1.9));
    CHECK(default_range(CurveKind::Spherical) == std::pair<Real, Real>(0.0, 1.0));
}

TEST_CASE("generate_curve samples endpoints and applies the scale") {
    ParametricCurveSpec spec;
    spec.kind = CurveKind::Helix;
    spec.sample_count = 11;
    spec.scale = 2.5;
    const std::vector<Vec3> pts = generate_curve(spec);
    REQUIRE(pts.size() == 11);
    CHECK((pts.front() - 2.5 * curve_point(CurveKind::Helix, 0.0)).norm() < 1e-14);
    CHECK((pts.back() - 2.5 * curve_point(CurveKind::Helix, 1.0)).norm() < 1e-12);

    spec.sample_count = 1;
    CHECK_THROWS_AS(generate_curve(spec), OutOfRange);
    spec.sample_count = 5;
    spec.s0 = 1.0;
    spec.s1 = 1.0;
    CHECK_THROWS_AS(generate_curve(spec), OutOfRange);
}

TEST_CASE("cantilever oracle closed form") {
    // theta(s) = gamma s (s^2 - 3 s + 3) / 6
    CHECK(oracle_theta({1.0, 1.0}, 1.0) == doctest::Approx(1.0 / 6.0));
    CHECK(oracle_theta({3 * kPi, 1.0}, 1.0) == doctest::Approx(kPi / 2));
    CHECK(oracle_theta({6.0, 1.0}, 0.5) == doctest::Approx(0.5 * (0.25 - 1.5 + 3)));
    CHECK(oracle_theta({5.0, 1.0}, 0.0) == 0.0);
    CHECK_THROWS_AS(oracle_theta({1.0, 1.0}, -0.1), OutOfRange);
    CHECK_THROWS_AS(oracle_theta({1.0, 1.0}, 1.1), OutOfRange);

    // the moment vanishes at the free end: theta'(1) = 0 by finite differences
    const Real h = 1e-6;
    const Real d = (oracle_theta({4.0, 1.0}, 1.0) - oracle_theta({4.0, 1.0}, 1.0 - h)) / h;
    CHECK(std::abs(d) < 1e-5);

    CHECK(max_gamma() == doctest::Approx(3 * kPi));
    CHECK(9.04 < max_gamma());
    CHECK(max_gamma() < 10.0);
}

TEST_CASE("oracle shape is an arclength-parameterized planar curve") {
    const CantileverOracle oracle{5.0, 1.0};
    const int n = 200;
    const std::vector<Vec3> pts = oracle_shape(oracle, n);
    REQUIRE(static_cast<int>(pts.size()) == n);
    CHECK(pts[0].norm() == 0.0);
    const Real ds = 1.0 / (n - 1);
    for (int i = 1; i < n; ++i) {
        CHECK(pts[i][1] == 0.0);
        // chord of an arclength parameterization: |x_i - x_{i-1}| = ds + O(ds^3)
        CHECK(std::abs((pts[i] - pts[i - 1]).norm() - ds) < 10 * ds * ds * ds);
    }
    // tangent angle at the last segment matches the closed form
    const Vec3 t = (pts[n - 1] - pts[n - 2]).normalized();
    const Real th = std::atan2(t[2], t[0]);
    CHECK(th == doctest::Approx(oracle_theta(oracle, 1.0 - 0.5 * ds)).epsilon(1e-4));
}

TEST_CASE("scenario catalog rows") {
    const std::vector<ScenarioSpec> rows = scenario_catalog();
    REQUIRE(rows.size() == 8);

    const ScenarioSpec sph = find_scenario("spherical");
    CHECK(sph.char_length == doctest::Approx(36.3));
    CHECK(sph.radius == doctest::Approx(1e-2));
    CHECK(sph.youngs == doctest::Approx(1e7));
    CHECK(sph.density == doctest::Approx(1e3));

    CHECK(find_scenario("conical").char_length == doctest::Approx(7.0));
    CHECK(find_scenario("hyperbolic").char_length == doctest::Approx(15.8));

    const ScenarioSpec helix = find_scenario("helix");
    CHECK(helix.char_length == doctest::Approx(25.4));
    CHECK(helix.radius == doctest::Approx(1e-1));
    CHECK(helix.youngs == doctest::Approx(1e8));
    CHECK((helix.gravity - Vec3(0, 0, -10)).norm() == 0.0);
    CHECK(helix.clamps == ClampStyle::ClampedFree);

    const ScenarioSpec mag = find_scenario("hyperbole-magnetic");
    CHECK(mag.char_length == doctest::Approx(97.4));
    CHECK((mag.magnetization - Vec3(0, 0, -1e5)).norm() == 0.0);
    CHECK((mag.field - Vec3(-5e-3, 0, 0)).norm() == 0.0);

    const ScenarioSpec ring = find_scenario("ring");
    CHECK(ring.char_length == doctest::Approx(2.1));
    CHECK(ring.radius == doctest::Approx(1.5e-3));
    CHECK(ring.youngs == doctest::Approx(5e6));
    CHECK(ring.density == doctest::Approx(2e2));
    CHECK(ring.is_net);

    const ScenarioSpec knot = find_scenario("knot");
    CHECK(knot.char_length == doctest::Approx(6.4));
    CHECK(knot.youngs == doctest::Approx(5e7));
    CHECK(knot.density == doctest::Approx(4e2));

    const ScenarioSpec ful = find_scenario("fulleren");
    CHECK(ful.char_length == doctest::Approx(7.1));
    CHECK(ful.youngs == doctest::Approx(6e6));
    CHECK(ful.density == doctest::Approx(5e2));
    CHECK((ful.magnetization - Vec3(0, 5e5, 0)).norm() == 0.0);
    CHECK((ful.field - Vec3(0, 0, -1e-3)).norm() == 0.0);
    CHECK(ful.gravity[2] == doctest::Approx(-10.0));

    CHECK_THROWS_AS(find_scenario("torus"), UnknownKind);
}

TEST_CASE("scenario specs survive a json round trip") {
    for (const ScenarioSpec &s : scenario_catalog()) {
        const ScenarioSpec back = scenario_from_json(scenario_to_json(s));
        CHECK(back.name == s.name);
        CHECK(back.char_length == s.char_length);
        CHECK(back.radius == s.radius);
        CHECK(back.youngs == s.youngs);
        CHECK(back.density == s.density);
        CHECK((back.gravity - s.gravity).norm() == 0.0);
        CHECK((back.magnetization - s.magnetization).norm() == 0.0);
        CHECK((back.field - s.field).norm() == 0.0);
        CHECK(back.is_net == s.is_net);
        CHECK(back.clamps == s.clamps);
        CHECK(back.compression == s.compression);
        if (s.is_net)
            CHECK(back.fixture == s.fixture);
        else
            CHECK(back.kind == s.kind);
    }
}

TEST_CASE("built scenarios are well formed") {
    const ScenarioProblem p = build_scenario(find_scenario("spherical"), 60);
    CHECK(p.topo.node_count == 60);
    CHECK(p.topo.clamped_nodes.size() == 4); // two nodes per clamped end
    CHECK(p.topo.clamped_edges.size() == 2);
    CHECK(p.dc_q.size() == p.topo.layout().size());
    CHECK(p.inverse_constraints.any_motion()); // compression schedule
    CHECK(p.forward_constraints.any_motion());
    CHECK(!p.loads.has_gravity());

    const ScenarioProblem h = build_scenario(find_scenario("helix"), 40);
    CHECK(h.topo.clamped_nodes.size() == 2); // clamped-free
    CHECK(h.loads.has_gravity());
    CHECK(!h.inverse_constraints.any_motion());

    const ScenarioProblem m = build_scenario(find_scenario("hyperbole-magnetic"), 40);
    CHECK(m.loads.magnetic.active());
    CHECK(static_cast<int>(m.loads.magnetic.magnetization_frame.size()) ==
          m.topo.edge_count());

    const ScenarioProblem r = build_scenario(find_scenario("ring"));
    CHECK(r.topo.node_count > 0);
    CHECK(r.loads.has_gravity());
}

TEST_CASE("cantilever problem encodes the elasto-gravitational parameter") {
    const CantileverProblem p = build_cantilever(6.0, 50);
    CHECK(p.topo.node_count == 50);
    CHECK(p.gamma == doctest::Approx(6.0));
    // gamma = rho A g L^3 / (E I2); verify from the assembled material
    const Real A = p.mat.area();
    const Real I2 = p.mat.EI2 / p.mat.youngs;
    const Real g = -p.loads.gravity[2];
    CHECK(p.mat.rho * A * g / (p.mat.youngs * I2) == doctest::Approx(6.0));
    CHECK_THROWS_AS(build_cantilever(3.0, 2), OutOfRange);
}
