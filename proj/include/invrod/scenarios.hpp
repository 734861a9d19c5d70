#pragma once

#include "invrod/solver.hpp"
#include "invrod/topology.hpp"
#include "invrod/types.hpp"

#include <string>
#include <vector>

namespace invrod {

enum class CurveKind { Spherical, Conical, Hyperbolic, Helix, HyperbolicSurface };

CurveKind curve_kind_from_name(const std::string &name); // throws UnknownKind
std::string curve_kind_name(CurveKind kind);

struct ParametricCurveSpec {
    CurveKind kind = CurveKind::Spherical;
    int sample_count = 500;
    Real s0 = 0, s1 = 1;
    Real scale = 1; // m
};

// Default parameter range of each curve family.
std::pair<Real, Real> default_range(CurveKind kind);

Vec3 curve_point(CurveKind kind, Real s); // unscaled closed form

std::vector<Vec3> generate_curve(const ParametricCurveSpec &spec);

// ---------------------------------------------------------------------------
// Analytic 2D cantilever: closed-form rest-shape rotation angle of a rod
// whose deformed shape is a straight horizontal beam under gravity.
// ---------------------------------------------------------------------------

struct CantileverOracle {
    Real gamma = 0; // rho A g L^3 / EI2
    Real L = 1;     // m
};

Real oracle_theta(const CantileverOracle &oracle, Real s_tilde); // throws OutOfRange

// Rest-shape centerline integrated from the closed-form angle; samples lie at
// exact arclength fractions i/(n-1).
std::vector<Vec3> oracle_shape(const CantileverOracle &oracle, int n_samples);

Real max_gamma(); // 3 pi

// ---------------------------------------------------------------------------
// Scenario catalog
// ---------------------------------------------------------------------------

enum class ClampStyle { ClampedClamped, ClampedFree, NetFile };

struct ScenarioSpec {
    std::string name;    // catalog key, e.g. "spherical"
    std::string display; // table row label
    Real char_length = 0;
    Real radius = 0, youngs = 0, density = 0;
    Vec3 gravity = Vec3::Zero();       // m/s^2
    Vec3 magnetization = Vec3::Zero(); // A/m, world vector imprinted at the DC
    Vec3 field = Vec3::Zero();         // Tesla
    bool is_net = false;
    CurveKind kind = CurveKind::Spherical; // curves only
    std::string fixture;                   // net file path, nets only
    ClampStyle clamps = ClampStyle::ClampedClamped;
    Real compression = 0; // dimensionless end displacement (clamped-clamped)
    int default_nodes = 500;
};

std::vector<ScenarioSpec> scenario_catalog();
ScenarioSpec find_scenario(const std::string &name); // throws UnknownKind

std::string scenario_to_json(const ScenarioSpec &spec);
ScenarioSpec scenario_from_json(const std::string &text);

// Everything needed to run one scenario: DC geometry, loads (magnetic already
// imprinted at the DC), and the clamp schedules of both solve directions.
struct ScenarioProblem {
    NetTopology topo;
    MaterialParams mat;
    VecX dc_q;
    LoadSet loads;
    ConstraintSet inverse_constraints; // DC clamp values -> UC clamp values
    ConstraintSet forward_constraints; // UC clamp values -> DC clamp values
    Real char_length = 0;
};

ScenarioProblem build_scenario(const ScenarioSpec &spec, int nodes = 0);

// 2D cantilever inverse-design problem: DC is a straight horizontal beam of
// unit length clamped at the root, gravity chosen so that the
// elasto-gravitational parameter equals gamma.
struct CantileverProblem {
    NetTopology topo;
    MaterialParams mat;
    VecX dc_q;
    LoadSet loads;
    ConstraintSet constraints;
    Real gamma = 0;
};

CantileverProblem build_cantilever(Real gamma, int nodes);

} // namespace invrod
