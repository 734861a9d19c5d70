#pragma once

#include "invrod/geometry.hpp"
#include "invrod/topology.hpp"
#include "invrod/types.hpp"

#include <vector>

namespace invrod {

struct MaterialParams {
    Real EA = 0;   // N
    Real EI1 = 0;  // N m^2
    Real EI2 = 0;  // N m^2
    Real GJ = 0;   // N m^2
    Real rho = 0;  // kg / m^3
    Real radius = 0; // m
    Real youngs = 0; // Pa

    Real area() const;
    Real polar_moment() const; // J = pi r^4 / 2

    // Circular cross-section: A = pi r^2, I = pi r^4 / 4, J = pi r^4 / 2,
    // G from nu = 0.5 (incompressible elastomer).
    static MaterialParams circular(Real youngs, Real radius, Real rho);
};

struct NaturalStrains {
    VecX rest_len;          // per edge
    VecX kappa1, kappa2, tau; // per bend
    VecX voronoi;           // per bend, rest Voronoi lengths
};

// Natural strains extracted from a configuration (its own lengths, curvatures
// and twists become the stress-free values).
NaturalStrains natural_from_state(const NetTopology &topo, const StrainState &st);

struct EnergyBreakdown {
    Real stretch = 0, bend = 0, twist = 0;
    Real total() const { return stretch + bend + twist; }
};

EnergyBreakdown elastic_energy(const NetTopology &topo, const StrainState &current,
                               const NaturalStrains &natural, const MaterialParams &mat);

// ---------------------------------------------------------------------------
// Forward model: gradients and Hessian of the energy with respect to the
// current configuration; the natural strains are constants.
// ---------------------------------------------------------------------------

// dE/dq at the current configuration (internal force is the negative of this).
// The optional per-bend `tau_ref` selects the 2*pi twist branch nearest to it
// (see compute_strain_state); solvers pass the last accepted twists so the
// energy landscape stays continuous when joints wind past a half turn.
VecX elastic_gradient(const NetTopology &topo, const ConfigState &state,
                      const FrameSeed &seed, const NaturalStrains &natural,
                      const MaterialParams &mat, const VecX *tau_ref = nullptr);

// d2E/dq dq, symmetric. Stretch blocks are closed-form; bend/twist element
// blocks are centered differences of the exact element gradients.
void elastic_hessian_triplets(const NetTopology &topo, const ConfigState &state,
                              const FrameSeed &seed, const NaturalStrains &natural,
                              const MaterialParams &mat, std::vector<Triplet> &out,
                              int threads = 1, const VecX *tau_ref = nullptr);

// Outer-product (Gauss-Newton) part only: stiffness-weighted dyads of the
// strain gradients, without the strain-prefactor curvature terms.
void elastic_gauss_newton_triplets(const NetTopology &topo, const ConfigState &state,
                                   const FrameSeed &seed, const NaturalStrains &natural,
                                   const MaterialParams &mat, std::vector<Triplet> &out);

// ---------------------------------------------------------------------------
// Inverse model: the deformed configuration (DC) is the fixed reference; the
// unknown is the candidate undeformed configuration. Strain gradients are
// frozen at the DC, stress prefactors take their natural strains from the
// candidate.
// ---------------------------------------------------------------------------

struct InverseModel {
    NetTopology topo;
    MaterialParams mat;
    FrameSeed seed; // shared seed, built on the DC
    // frozen DC data
    VecX dc_edge_len;
    std::vector<Vec3> dc_tangent;       // per stored edge
    std::vector<BendStencil> dc_bends;  // values + gradient stencils at the DC
};

InverseModel freeze_dc(const NetTopology &topo, const VecX &dc_q, const MaterialParams &mat);

// dE/dq with frozen DC stencils, as a function of the candidate state
// (which must be evaluated with the model's shared seed).
VecX inverse_gradient(const InverseModel &model, const ConfigState &candidate,
                      const VecX *tau_ref = nullptr);

// Exact derivative of inverse_gradient w.r.t. the candidate DOFs;
// generally non-symmetric.
void inverse_jacobian_triplets(const InverseModel &model, const ConfigState &candidate,
                               std::vector<Triplet> &out, int threads = 1,
                               const VecX *tau_ref = nullptr);

// Strain state of a configuration measured against the natural strains'
// rest lengths (convenience wrapper used by both solvers).
StrainState measure_strains(const NetTopology &topo, const ConfigState &state,
                            const NaturalStrains &natural,
                            const VecX *tau_ref = nullptr);

} // namespace invrod
