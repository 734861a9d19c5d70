#include "invrod/scenarios.hpp"
#include "invrod/errors.hpp"

#include <json.hpp>

#include <cmath>

namespace invrod {

namespace {
constexpr Real kPi = 3.14159265358979323846;
}

CurveKind curve_kind_from_name(const std::string &name) {
    if (name == "spherical")
        return CurveKind::Spherical;
    if (name == "conical")
        return CurveKind::Conical;
    if (name == "hyperbolic")
        return CurveKind::Hyperbolic;
    if (name == "helix")
        return CurveKind::Helix;
    if (name == "hyperbolic_surface")
        return CurveKind::HyperbolicSurface;
    throw UnknownKind(name);
}

std::string curve_kind_name(CurveKind kind) {
    switch (kind) {
    case CurveKind::Spherical:
        return "spherical";
    case CurveKind::Conical:
        return "conical";
    case CurveKind::Hyperbolic:
        return "hyperbolic";
    case CurveKind::Helix:
        return "helix";
    case CurveKind::HyperbolicSurface:
        return "hyperbolic_surface";
    }
    throw UnknownKind("curve kind");
}

std::pair<Real, Real> default_range(CurveKind kind) {
    if (kind == CurveKind::Hyperbolic)
        return {0.1, 1.9};
    return {0.0, 1.0};
}

Vec3 curve_point(CurveKind kind, Real s) {
    switch (kind) {
    case CurveKind::Spherical:
        return {std::cos(18 * kPi * s) * std::sin(kPi * s),
                std::sin(18 * kPi * s) * std::sin(kPi * s), std::cos(kPi * s)};
    case CurveKind::Conical:
        return {(1 - s / 3) * std::cos(8 * kPi * s / 3),
                (1 - s / 3) * std::sin(8 * kPi * s / 3), 2 * s / 3};
    case CurveKind::Hyperbolic: {
        const Real r = (s - 1) * (s - 1) + 0.5;
        return {r * std::cos(6 * kPi * s), r * std::sin(6 * kPi * s), s / 2};
    }
    case CurveKind::Helix:
        return {4 * s, std::sin(8 * kPi * s), std::cos(8 * kPi * s)};
    case CurveKind::HyperbolicSurface: {
        const Real r = 4 * s * s + 0.6;
        return {r * std::cos(16 * kPi * s), r * std::sin(16 * kPi * s), -4 * s};
    }
    }
    throw UnknownKind("curve kind");
}

std::vector<Vec3> generate_curve(const ParametricCurveSpec &spec) {
    if (spec.sample_count < 2)
        throw OutOfRange("curve needs at least 2 samples");
    if (!(spec.s1 > spec.s0))
        throw OutOfRange("curve parameter range is empty");
    std::vector<Vec3> pts;
    pts.reserve(spec.sample_count);
    for (int i = 0; i < spec.sample_count; ++i) {
        const Real s =
            spec.s0 + (spec.s1 - spec.s0) * static_cast<Real>(i) / (spec.sample_count - 1);
        pts.push_back(spec.scale * curve_point(spec.kind, s));
    }
    return pts;
}

// ---------------------------------------------------------------------------
// Cantilever oracle
// ---------------------------------------------------------------------------

Real oracle_theta(const CantileverOracle &oracle, Real s_tilde) {
    if (s_tilde < 0.0 || s_tilde > 1.0)
        throw OutOfRange("arclength fraction outside [0,1]");
    return oracle.gamma * s_tilde * (s_tilde * s_tilde - 3 * s_tilde + 3) / 6.0;
}

std::vector<Vec3> oracle_shape(const CantileverOracle &oracle, int n_samples) {
    if (n_samples < 2)
        throw OutOfRange("shape needs at least 2 samples");
    // 5-point Gauss-Legendre nodes/weights on [-1, 1].
    static const Real gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
    static const Real gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                               0.4786286704993665, 0.2369268850561891};
    std::vector<Vec3> pts(n_samples, Vec3::Zero());
    const Real ds = 1.0 / (n_samples - 1);
    Real x = 0, z = 0;
    pts[0] = Vec3(0, 0, 0);
    for (int i = 1; i < n_samples; ++i) {
        const Real a = (i - 1) * ds, b = i * ds;
        Real dx = 0, dz = 0;
        for (int k = 0; k < 5; ++k) {
            const Real s = 0.5 * (a + b) + 0.5 * (b - a) * gx[k];
            const Real th = oracle_theta(oracle, s);
            dx += gw[k] * std::cos(th);
            dz += gw[k] * std::sin(th);
        }
        x += 0.5 * (b - a) * dx * oracle.L;
        z += 0.5 * (b - a) * dz * oracle.L;
        pts[i] = Vec3(x, 0, z);
    }
    return pts;
}

Real max_gamma() { return 3.0 * kPi; }

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

std::vector<ScenarioSpec> scenario_catalog() {
    std::vector<ScenarioSpec> rows;

    ScenarioSpec spherical;
    spherical.name = "spherical";
    spherical.display = "Spherical curve";
    spherical.char_length = 36.3;
    spherical.radius = 1e-2;
    spherical.youngs = 1e7;
    spherical.density = 1e3;
    spherical.kind = CurveKind::Spherical;
    spherical.clamps = ClampStyle::ClampedClamped;
    spherical.compression = 0.02;
    rows.push_back(spherical);

    ScenarioSpec conical = spherical;
    conical.name = "conical";
    conical.display = "Conical curve";
    conical.char_length = 7.0;
    conical.kind = CurveKind::Conical;
    rows.push_back(conical);

    ScenarioSpec hyperbolic = spherical;
    hyperbolic.name = "hyperbolic";
    hyperbolic.display = "Hyperbolic curve";
    hyperbolic.char_length = 15.8;
    hyperbolic.kind = CurveKind::Hyperbolic;
    rows.push_back(hyperbolic);

    ScenarioSpec helix;
    helix.name = "helix";
    helix.display = "Helix (gravity)";
    helix.char_length = 25.4;
    helix.radius = 1e-1;
    helix.youngs = 1e8;
    helix.density = 1e3;
    helix.gravity = Vec3(0, 0, -10);
    helix.kind = CurveKind::Helix;
    helix.clamps = ClampStyle::ClampedFree;
    rows.push_back(helix);

    ScenarioSpec hyperbole;
    hyperbole.name = "hyperbole-magnetic";
    hyperbole.display = "Hyperbole (magnetic)";
    hyperbole.char_length = 97.4;
    hyperbole.radius = 1e-1;
    hyperbole.youngs = 1e8;
    hyperbole.density = 1e3;
    hyperbole.magnetization = Vec3(0, 0, -1e5);
    hyperbole.field = Vec3(-5e-3, 0, 0); // -5 mT
    hyperbole.kind = CurveKind::HyperbolicSurface;
    hyperbole.clamps = ClampStyle::ClampedFree;
    rows.push_back(hyperbole);

    ScenarioSpec ring;
    ring.name = "ring";
    ring.display = "Ring";
    ring.char_length = 2.1;
    ring.radius = 1.5e-3;
    ring.youngs = 5e6;
    ring.density = 2e2;
    ring.gravity = Vec3(0, 0, -10);
    ring.is_net = true;
    ring.fixture = "fixtures/ring.net";
    ring.clamps = ClampStyle::NetFile;
    ring.default_nodes = 0;
    rows.push_back(ring);

    ScenarioSpec knot;
    knot.name = "knot";
    knot.display = "Knot";
    knot.char_length = 6.4;
    knot.radius = 1.5e-3;
    knot.youngs = 5e7;
    knot.density = 4e2;
    knot.gravity = Vec3(0, 0, -10);
    knot.is_net = true;
    knot.fixture = "fixtures/knot.net";
    knot.clamps = ClampStyle::NetFile;
    knot.default_nodes = 0;
    rows.push_back(knot);

    ScenarioSpec fulleren;
    fulleren.name = "fulleren";
    fulleren.display = "Fulleren";
    fulleren.char_length = 7.1;
    fulleren.radius = 1e-2;
    fulleren.youngs = 6e6;
    fulleren.density = 5e2;
    fulleren.gravity = Vec3(0, 0, -10);
    fulleren.magnetization = Vec3(0, 5e5, 0);
    fulleren.field = Vec3(0, 0, -1e-3); // -1 mT
    fulleren.is_net = true;
    fulleren.fixture = "fixtures/fullerene.net";
    fulleren.clamps = ClampStyle::NetFile;
    fulleren.default_nodes = 0;
    rows.push_back(fulleren);

    return rows;
}

ScenarioSpec find_scenario(const std::string &name) {
    for (const ScenarioSpec &s : scenario_catalog())
        if (s.name == name)
            return s;
    throw UnknownKind("scenario " + name);
}

namespace {

nlohmann::json vec3_json(const Vec3 &v) { return nlohmann::json::array({v[0], v[1], v[2]}); }

Vec3 vec3_from(const nlohmann::json &j) { return Vec3(j.at(0), j.at(1), j.at(2)); }

} // namespace

std::string scenario_to_json(const ScenarioSpec &s) {
    nlohmann::json j;
    j["schema"] = 1;
    j["name"] = s.name;
    j["display"] = s.display;
    j["char_length"] = s.char_length;
    j["radius"] = s.radius;
    j["youngs"] = s.youngs;
    j["density"] = s.density;
    j["gravity"] = vec3_json(s.gravity);
    j["magnetization"] = vec3_json(s.magnetization);
    j["field"] = vec3_json(s.field);
    j["is_net"] = s.is_net;
    if (s.is_net)
        j["fixture"] = s.fixture;
    else
        j["curve"] = curve_kind_name(s.kind);
    j["clamps"] = s.clamps == ClampStyle::ClampedClamped  ? "clamped-clamped"
                  : s.clamps == ClampStyle::ClampedFree   ? "clamped-free"
                                                          : "net-file";
    j["compression"] = s.compression;
    j["default_nodes"] = s.default_nodes;
    return j.dump(2);
}

ScenarioSpec scenario_from_json(const std::string &text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    ScenarioSpec s;
    s.name = j.at("name");
    s.display = j.value("display", s.name);
    s.char_length = j.at("char_length");
    s.radius = j.at("radius");
    s.youngs = j.at("youngs");
    s.density = j.at("density");
    s.gravity = vec3_from(j.at("gravity"));
    s.magnetization = vec3_from(j.at("magnetization"));
    s.field = vec3_from(j.at("field"));
    s.is_net = j.at("is_net");
    if (s.is_net)
        s.fixture = j.at("fixture");
    else
        s.kind = curve_kind_from_name(j.at("curve"));
    const std::string clamps = j.at("clamps");
    s.clamps = clamps == "clamped-clamped" ? ClampStyle::ClampedClamped
               : clamps == "clamped-free"  ? ClampStyle::ClampedFree
                                           : ClampStyle::NetFile;
    s.compression = j.value("compression", 0.0);
    s.default_nodes = j.value("default_nodes", 500);
    return s;
}

// ---------------------------------------------------------------------------
// Problem builders
// ---------------------------------------------------------------------------

namespace {

VecX dofs_from_positions(const NetTopology &topo, const std::vector<Vec3> &pts) {
    const DofLayout lay = topo.layout();
    VecX q = VecX::Zero(lay.size());
    for (int n = 0; n < topo.node_count; ++n)
        set_node_pos(q, n, pts[n]);
    return q;
}

} // namespace

ScenarioProblem build_scenario(const ScenarioSpec &spec, int nodes) {
    ScenarioProblem p;
    p.mat = MaterialParams::circular(spec.youngs, spec.radius, spec.density);
    p.char_length = spec.char_length;

    if (spec.is_net) {
        NetFile nf = load_net_file(spec.fixture);
        p.topo = std::move(nf.topology);
        p.dc_q = dofs_from_positions(p.topo, nf.positions);
    } else {
        ParametricCurveSpec cs;
        cs.kind = spec.kind;
        cs.sample_count = nodes > 0 ? nodes : spec.default_nodes;
        std::tie(cs.s0, cs.s1) = default_range(spec.kind);
        const std::vector<Vec3> pts = generate_curve(cs);
        p.topo = build_chain(static_cast<int>(pts.size()));
        const int nv = p.topo.node_count;
        const int ne = p.topo.edge_count();
        p.topo.clamped_nodes = {0, 1};
        p.topo.clamped_edges = {0};
        if (spec.clamps == ClampStyle::ClampedClamped) {
            p.topo.clamped_nodes.push_back(nv - 2);
            p.topo.clamped_nodes.push_back(nv - 1);
            p.topo.clamped_edges.push_back(ne - 1);
        }
        p.dc_q = dofs_from_positions(p.topo, pts);
    }

    const FrameSeed seed = make_seed(p.topo, p.dc_q);
    p.loads.gravity = spec.gravity;
    if (spec.magnetization.squaredNorm() > 0 && spec.field.squaredNorm() > 0) {
        const ConfigState dc = eval_config(p.topo, p.dc_q, seed);
        p.loads.magnetic = imprint_magnetization(p.topo, dc, spec.magnetization, spec.field);
    }

    p.inverse_constraints = ConstraintSet::from_clamps(p.topo, p.dc_q);
    p.forward_constraints = p.inverse_constraints;

    if (!spec.is_net && spec.clamps == ClampStyle::ClampedClamped && spec.compression > 0) {
        // The UC clamps sit further apart along the end-to-end chord; the
        // inverse schedule opens the clamps, the forward schedule closes them.
        const DofLayout lay = p.topo.layout();
        const int nv = p.topo.node_count;
        const Vec3 chord =
            (node_pos(p.dc_q, nv - 1) - node_pos(p.dc_q, 0)).normalized();
        const Vec3 h = 0.5 * spec.compression * spec.char_length * chord;
        auto shift_of = [&](int node) {
            if (node == 0 || node == 1)
                return Vec3(-h);
            if (node == nv - 1 || node == nv - 2)
                return Vec3(h);
            return Vec3(Vec3::Zero());
        };
        p.inverse_constraints.items.clear();
        p.forward_constraints.items.clear();
        for (int n : p.topo.clamped_nodes) {
            const Vec3 dc = node_pos(p.dc_q, n);
            const Vec3 uc = dc + shift_of(n);
            for (int axis = 0; axis < 3; ++axis) {
                p.inverse_constraints.move(lay.pos(n, axis), dc[axis], uc[axis]);
                p.forward_constraints.move(lay.pos(n, axis), uc[axis], dc[axis]);
            }
        }
        for (int k : p.topo.clamped_edges) {
            p.inverse_constraints.pin(lay.theta(k), p.dc_q[lay.theta(k)]);
            p.forward_constraints.pin(lay.theta(k), p.dc_q[lay.theta(k)]);
        }
    }
    return p;
}

CantileverProblem build_cantilever(Real gamma, int nodes) {
    if (nodes < 3)
        throw OutOfRange("cantilever needs at least 3 nodes");
    CantileverProblem p;
    p.gamma = gamma;
    p.mat = MaterialParams::circular(1e7, 1e-2, 1e3);
    std::vector<Vec3> pts(nodes);
    for (int i = 0; i < nodes; ++i)
        pts[i] = Vec3(static_cast<Real>(i) / (nodes - 1), 0, 0);
    p.topo = build_chain(nodes);
    p.topo.clamped_nodes = {0, 1};
    p.topo.clamped_edges = {0};
    p.dc_q = dofs_from_positions(p.topo, pts);
    // gamma = rho A g L^3 / (E I2) = 4 rho g / (E r^2) with L = 1 -> g = gamma/4
    p.loads.gravity = Vec3(0, 0, -gamma / 4.0);
    p.constraints = ConstraintSet::from_clamps(p.topo, p.dc_q);
    return p;
}

} // namespace invrod
