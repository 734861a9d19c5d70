#pragma once

#include "invrod/elastic.hpp"
#include "invrod/geometry.hpp"
#include "invrod/topology.hpp"

#include <vector>

namespace invrod {

struct GravityLoad {
    Vec3 g = Vec3::Zero(); // m / s^2
};

// Hard-magnetic rod in a uniform ambient field. The magnetization is carried
// in each edge's material frame (components along m1, m2, m3), imprinted at
// some reference configuration, and rotates with the frame afterwards.
struct MagneticLoad {
    std::vector<Vec3> magnetization_frame; // per edge, A/m, material-frame components
    Vec3 ambient_field = Vec3::Zero();     // Tesla

    bool active() const {
        return !magnetization_frame.empty() && ambient_field.squaredNorm() > 0.0;
    }
};

// Imprint a world-space magnetization vector into every edge's material frame
// of the given state.
MagneticLoad imprint_magnetization(const NetTopology &topo, const ConfigState &state,
                                   const Vec3 &magnetization_world, const Vec3 &field_tesla);

struct InertiaModel {
    VecX node_mass;    // kg, per node
    VecX twist_inertia; // kg m^2, per edge
    Real damping = 0;  // mass-proportional coefficient c (1/s): C = c M

    // Diagonal of M over the full DOF layout.
    VecX mass_diagonal(const DofLayout &lay) const;
    Real total_mass() const { return node_mass.sum(); }
};

enum class LengthBasis { DC, UC };

InertiaModel assemble_inertia(const NetTopology &topo, const MaterialParams &mat,
                              const std::vector<Real> &edge_lengths, Real damping);

VecX gravity_force(const NetTopology &topo, const InertiaModel &inertia, const Vec3 &g);

// Zeeman energy -sum_k V_k (R_k Mfr_k) . B of a configuration.
Real zeeman_energy(const NetTopology &topo, const ConfigState &state, const MagneticLoad &load,
                   const VecX &rest_len, const MaterialParams &mat);

// -d(Zeeman energy)/dq at the given state (frame rotation gradients included).
VecX magnetic_force(const NetTopology &topo, const ConfigState &state, const FrameSeed &seed,
                    const MagneticLoad &load, const VecX &rest_len, const MaterialParams &mat);

// d(force)/dq contribution for the forward Newton matrix (centered differences
// of the exact per-edge force).
void magnetic_force_jacobian_triplets(const NetTopology &topo, const ConfigState &state,
                                      const FrameSeed &seed, const MagneticLoad &load,
                                      const VecX &rest_len, const MaterialParams &mat,
                                      std::vector<Triplet> &out);

} // namespace invrod
