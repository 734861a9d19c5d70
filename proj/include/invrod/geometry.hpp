#pragma once

#include "invrod/topology.hpp"
#include "invrod/types.hpp"

#include <utility>
#include <vector>

namespace invrod {

inline constexpr Real kDeltaParallel = 1e-10; // antiparallel-tangent threshold
inline constexpr Real kDeltaKb = 1e-12;       // folded-edge threshold (relative)

// Minimal rotation taking t1 onto t2 (axis t1 x t2), applied to a.
Vec3 parallel_transport(const Vec3 &a, const Vec3 &t1, const Vec3 &t2);

// Signed angle from a to b about axis, in (-pi, pi]; the boundary maps to +pi.
Real signed_angle(const Vec3 &a, const Vec3 &b, const Vec3 &axis);

// First reference director for a fresh tangent: the global axis least aligned
// with t, projected onto the plane normal to t and normalized.
Vec3 seed_director(const Vec3 &t);

// Per-edge reference frame {u, v, t} plus material directors {m1, m2}.
struct FrameSet {
    std::vector<Vec3> u, v, t;
    std::vector<Vec3> m1, m2;

    int edge_count() const { return static_cast<int>(t.size()); }
};

// Time-0 frame seed; reference frames of every later configuration are
// transported directly from here, never from an intermediate state.
struct FrameSeed {
    std::vector<Vec3> t0, u0;
};

std::vector<Vec3> edge_vectors(const NetTopology &topo, const VecX &q);
std::vector<Vec3> unit_tangents(const NetTopology &topo, const VecX &q);

FrameSeed make_seed(const NetTopology &topo, const VecX &q);

// u = P_{t0->t}(u0), v = t x u per edge; material directors from thetas.
FrameSet update_reference_frames(const FrameSeed &seed,
                                 const std::vector<Vec3> &tangents,
                                 const VecX &thetas);

// Full evaluation of one configuration: tangents, frames, material frames.
struct ConfigState {
    VecX q;
    std::vector<Vec3> edges;
    std::vector<Real> lengths;
    FrameSet frames;
};

ConfigState eval_config(const NetTopology &topo, const VecX &q, const FrameSeed &seed);

Vec3 curvature_binormal(const Vec3 &e1, const Vec3 &e2);

std::pair<Real, Real> material_curvatures(const Vec3 &kb, const Vec3 &m1a, const Vec3 &m1b,
                                          const Vec3 &m2a, const Vec3 &m2b);

Real stretch_strain(const Vec3 &e, Real rest_len);

Real reference_twist(const Vec3 &u1, const Vec3 &u2, const Vec3 &t1, const Vec3 &t2);

Real twist_strain(Real theta1, Real theta2, Real phi_ref);

struct StrainState {
    VecX eps;       // per edge
    VecX edge_len;  // per edge, current lengths
    VecX kappa1;    // per bend
    VecX kappa2;    // per bend
    VecX tau;       // per bend
    VecX voronoi;   // per bend, average of the two incident edge lengths
};

// Optional `tau_ref`: per-bend reference twists. The raw twist lives on a
// branch of width 2*pi (the reference-frame angle wraps at +-pi); when a
// reference is given, each tau is shifted by the multiple of 2*pi that
// brings it closest to the reference, so twists stay continuous along a
// path of configurations. Gradients are unaffected by the constant shift.
StrainState compute_strain_state(const NetTopology &topo, const VecX &q,
                                 const FrameSet &frames, const VecX &rest_lengths,
                                 const VecX *tau_ref = nullptr);

// ---------------------------------------------------------------------------
// Element kernels: strain values and exact DOF gradients. Gradients include
// the variation of the reference frames under the transport-from-seed rule
// (an extra twist dpsi = -(t0 x t) . dt / (1 + t0 . t) about the tangent on
// top of the minimal rotation).
// ---------------------------------------------------------------------------

using Vec11 = Eigen::Matrix<Real, 11, 1>;

// DOF order of the 11-vectors: x_a (3), x_center (3), x_b (3), theta_i, theta_j
// where a -> center -> b is the traversal of the bend and thetas are the
// stored twist DOFs of the two edges.
struct BendStencil {
    Real kappa1 = 0, kappa2 = 0, tau = 0;
    Vec11 g_kappa1 = Vec11::Zero();
    Vec11 g_kappa2 = Vec11::Zero();
    Vec11 g_tau = Vec11::Zero();
};

// Evaluate one bend from local data. xa/xc/xb are the traversal node
// positions; per incident edge: stored seed (t0,u0), stored theta and the
// orientation sign relative to the traversal.
struct BendLocal {
    Vec3 xa, xc, xb;
    Vec3 t0_i, u0_i, t0_j, u0_j;
    Real theta_i = 0, theta_j = 0;
    int sign_i = 1, sign_j = 1;
};

// `tau_ref`, when given, selects the 2*pi twist branch nearest to it (see
// compute_strain_state).
BendStencil bend_stencil(const BendLocal &in, int bend_index = -1,
                         const Real *tau_ref = nullptr);

BendLocal bend_local(const NetTopology &topo, int bend_index, const VecX &q,
                     const FrameSeed &seed);

// d(frame twist about tangent)/d(edge vector) for a transported frame.
Vec3 frame_twist_gradient(const Vec3 &t0, const Vec3 &t, Real length);

// Re-express a configuration in another frame gauge: positions are unchanged
// and the twist DOFs are adjusted so that the material directors and the
// per-joint twists -- full windings included -- are preserved. `tau_target`
// gives the per-bend twists the configuration carries in the `from` gauge;
// when omitted they are measured there directly (correct whenever the `from`
// thetas hold the windings, e.g. a freshly built gauge). Throws
// AntiparallelTangents when an edge tangent sits on the antiparallel cut of
// the target gauge.
VecX regauge_twists(const NetTopology &topo, const VecX &q, const FrameSeed &from,
                    const FrameSeed &to, const VecX *tau_target = nullptr);

} // namespace invrod
