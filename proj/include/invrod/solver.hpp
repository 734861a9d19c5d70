#pragma once

#include "invrod/elastic.hpp"
#include "invrod/geometry.hpp"
#include "invrod/loads.hpp"
#include "invrod/topology.hpp"
#include "invrod/types.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace invrod {

enum class SolveMode { Forward, Inverse };
enum class Termination { Converged, MaxSteps, Diverged };

struct SolverConfig {
    Real dt = 1e-2;           // s
    Real newton_tol = 0;      // 0 -> auto: min(1e-6 EA, relaxation_tol / 2)
    Real relaxation_tol = 0;  // 0 -> auto: 1e-4 |F_ext| (loaded) or 1e-8 EA
    int max_newton_iters = 50;
    int max_steps = 2000;
    Real ramp_fraction = 0.5; // loads and schedules ramp linearly, then hold
    Real damping = 0;         // 1/s, mass-proportional; 0 -> auto near-critical
    int divergence_window = 20;
    Real divergence_factor = 1e3;
    int threads = 1;
};

// One prescribed DOF: linear from `start` to `end` over the ramp window,
// then held at `end`.
struct Constraint {
    int dof = 0;
    Real start = 0, end = 0;
};

struct ConstraintSet {
    std::vector<Constraint> items;

    void pin(int dof, Real value) { items.push_back({dof, value, value}); }
    void move(int dof, Real from, Real to) { items.push_back({dof, from, to}); }
    bool any_motion() const;

    // Pin the topology's clamp sets (3 position DOFs per clamped node, the
    // twist DOF per clamped edge) at their values in q.
    static ConstraintSet from_clamps(const NetTopology &topo, const VecX &q);
};

Real constraint_value(const Constraint &c, int step, int ramp_steps);

struct StepStats {
    int step = 0;
    Real residual = 0; // static residual norm over free DOFs
    int newton_iters = 0;
    double ms = 0; // wall clock around the Newton loop
    Real Es = 0, Eb = 0, Et = 0;
    Real ext_potential = 0;
    std::vector<Real> newton_history; // dynamic residual per Newton iteration
};

struct SolveReport {
    VecX q;
    // Frame gauge of q: the twist DOFs in q are angles from the reference
    // directors transported from this seed. The relaxation re-seeds as it
    // marches (see EquilibriumModel::observe_accepted), so the final gauge
    // generally differs from the one the solve started with.
    FrameSeed seed;
    std::vector<StepStats> steps; // index 0 is the initial state
    Termination termination = Termination::MaxSteps;
    std::string diverged_reason;
};

// External loads of one scenario. The magnetic load must already be imprinted
// (material-frame magnetization components fixed at the reference state).
struct LoadSet {
    Vec3 gravity = Vec3::Zero(); // m/s^2
    MagneticLoad magnetic;
    bool has_gravity() const { return gravity.squaredNorm() > 0; }
};

// Static model of one solve mode: internal gradient, its Jacobian, and the
// external force at full load scale. The dynamic-relaxation loop is shared.
class EquilibriumModel {
public:
    virtual ~EquilibriumModel() = default;

    const NetTopology &topology() const { return topo_; }
    const MaterialParams &material() const { return mat_; }
    const FrameSeed &seed() const { return seed_; }
    const InertiaModel &inertia() const { return inertia_; }
    SolveMode mode() const { return mode_; }

    ConfigState eval(const VecX &q) const { return eval_config(topo_, q, seed_); }

    // Mode-specific validity of an accepted state at load scale `scale`;
    // throws SimError when no meaningful solution lies ahead (the existence
    // signal). Implementations may skip the test on most step indices; a
    // negative index forces it.
    virtual void check_validity(const ConfigState &, Real /*scale*/,
                                int /*step_index*/) const {}

    // Notify the model of an accepted relaxation state. Two gauge updates
    // keep the march well-conditioned on long rotations:
    //  - the per-joint twist extracted from reference frames lives on
    //    (-pi, pi]; models record the unwrapped twists of accepted states and
    //    evaluate every later residual on the 2*pi branch nearest to them, so
    //    the residual stays continuous when joints wind past a half turn;
    //  - the frame seed is moved onto the accepted state's frames (the
    //    material frame there is unchanged), so tangents never drift toward
    //    the antiparallel singularity of the seed transport even when the
    //    configuration rotates arbitrarily far from where the solve started.
    virtual void observe_accepted(const ConfigState &) {}

    virtual VecX internal_gradient(const ConfigState &state) const = 0;
    // d(internal_gradient - scale * external_force)/dq
    virtual void system_jacobian_triplets(const ConfigState &state, Real scale,
                                          std::vector<Triplet> &out, int threads) const = 0;
    virtual VecX external_force(const ConfigState &state) const = 0;
    virtual EnergyBreakdown energies(const ConfigState &state) const = 0;
    virtual Real external_potential(const ConfigState &state, Real scale) const = 0;
    // |F_ext| at full scale on the reference configuration (tolerance basis).
    virtual Real external_force_norm() const = 0;

protected:
    EquilibriumModel(NetTopology topo, MaterialParams mat, FrameSeed seed,
                     InertiaModel inertia, SolveMode mode)
        : topo_(std::move(topo)), mat_(mat), seed_(std::move(seed)),
          inertia_(std::move(inertia)), mode_(mode) {}

    NetTopology topo_;
    MaterialParams mat_;
    FrameSeed seed_;
    InertiaModel inertia_;
    SolveMode mode_;
};

// Forward model: natural strains and inertia from the rest configuration uc_q.
// A shared seed (e.g. the one built on the DC of a round trip) may be supplied
// so both modes transport frames from the same time-0 directors.
std::unique_ptr<EquilibriumModel>
make_forward_model(const NetTopology &topo, const MaterialParams &mat, const VecX &uc_q,
                   const LoadSet &loads, const FrameSeed *shared_seed = nullptr);

// Inverse model: strain-gradient stencils frozen at dc_q; external forces
// evaluated once at the DC and held constant.
std::unique_ptr<EquilibriumModel>
make_inverse_model(const NetTopology &topo, const MaterialParams &mat, const VecX &dc_q,
                   const LoadSet &loads);

// One implicit-Euler step at the given step index (1-based within the ramp
// schedule). Updates x and v in place; prescribed DOFs take their scheduled
// value bit-exactly.
StepStats step(const EquilibriumModel &model, VecX &x, VecX &v,
               const ConstraintSet &constraints, int step_index, int ramp_steps,
               const SolverConfig &cfg);

// Dynamic relaxation: ramp loads/schedules, then step until the static
// residual over free DOFs stays below relaxation_tol. Solver-level failures
// (Newton stall, singular system, geometric folding, non-finite state) are
// reported as Termination::Diverged, the existence signal. The optional hook
// observes the state at step 0 and after every accepted step.
using StateHook = std::function<void(int step, const VecX &q)>;

SolveReport relax_to_statics(EquilibriumModel &model, const VecX &initial_q,
                             const ConstraintSet &constraints, const SolverConfig &cfg,
                             const StateHook &on_state = {});

SolveReport forward_solve(const NetTopology &topo, const MaterialParams &mat,
                          const VecX &uc_q, const LoadSet &loads,
                          const ConstraintSet &constraints, const SolverConfig &cfg,
                          const FrameSeed *shared_seed = nullptr,
                          const VecX *initial_q = nullptr);

SolveReport inverse_solve(const NetTopology &topo, const MaterialParams &mat,
                          const VecX &dc_q, const LoadSet &loads,
                          const ConstraintSet &constraints, const SolverConfig &cfg);

// Per-step energies normalized by the final total elastic energy.
struct EnergyProfile {
    std::vector<Real> Es, Eb, Et, total;
};

EnergyProfile energy_profile(const SolveReport &report);

} // namespace invrod
