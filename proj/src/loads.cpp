#include "invrod/loads.hpp"
#include "invrod/errors.hpp"

#include <cmath>

namespace invrod {

MagneticLoad imprint_magnetization(const NetTopology &topo, const ConfigState &state,
                                   const Vec3 &magnetization_world, const Vec3 &field_tesla) {
    MagneticLoad load;
    load.ambient_field = field_tesla;
    load.magnetization_frame.resize(topo.edge_count());
    for (int k = 0; k < topo.edge_count(); ++k) {
        const FrameSet &f = state.frames;
        load.magnetization_frame[k] = Vec3(f.m1[k].dot(magnetization_world),
                                           f.m2[k].dot(magnetization_world),
                                           f.t[k].dot(magnetization_world));
    }
    return load;
}

VecX InertiaModel::mass_diagonal(const DofLayout &lay) const {
    VecX d(lay.size());
    for (int n = 0; n < lay.node_count; ++n)
        d.segment<3>(3 * n).setConstant(node_mass[n]);
    d.tail(lay.edge_count) = twist_inertia;
    return d;
}

InertiaModel assemble_inertia(const NetTopology &topo, const MaterialParams &mat,
                              const std::vector<Real> &edge_lengths, Real damping) {
    InertiaModel im;
    im.damping = damping;
    im.node_mass = VecX::Zero(topo.node_count);
    im.twist_inertia.resize(topo.edge_count());
    const Real rhoA = mat.rho * mat.area();
    const Real rhoJ = mat.rho * mat.polar_moment();
    for (int k = 0; k < topo.edge_count(); ++k) {
        const Real len = edge_lengths[k];
        if (len <= 0.0)
            throw DegenerateEdge(k);
        im.node_mass[topo.edges[k].a] += 0.5 * rhoA * len;
        im.node_mass[topo.edges[k].b] += 0.5 * rhoA * len;
        im.twist_inertia[k] = rhoJ * len;
    }
    return im;
}

VecX gravity_force(const NetTopology &topo, const InertiaModel &inertia, const Vec3 &g) {
    const DofLayout lay = topo.layout();
    VecX f = VecX::Zero(lay.size());
    for (int n = 0; n < topo.node_count; ++n)
        f.segment<3>(3 * n) = inertia.node_mass[n] * g;
    return f;
}

Real zeeman_energy(const NetTopology &topo, const ConfigState &state, const MagneticLoad &load,
                   const VecX &rest_len, const MaterialParams &mat) {
    if (!load.active())
        return 0.0;
    Real energy = 0.0;
    const Vec3 &B = load.ambient_field;
    for (int k = 0; k < topo.edge_count(); ++k) {
        const Vec3 &mf = load.magnetization_frame[k];
        const Vec3 M_world = state.frames.m1[k] * mf[0] + state.frames.m2[k] * mf[1] +
                             state.frames.t[k] * mf[2];
        energy -= mat.area() * rest_len[k] * M_world.dot(B);
    }
    return energy;
}

namespace {

// dE_m/d(e, theta) of one edge; local DOF order: e (3), theta.
void magnetic_edge_gradient(const Vec3 &m1, const Vec3 &m2, const Vec3 &t, const Vec3 &t0,
                            Real len, Real volume, const Vec3 &mf, const Vec3 &B,
                            Vec3 &dE_de, Real &dE_dth) {
    const Real m1B = m1.dot(B);
    const Real m2B = m2.dot(B);
    const Real tB = t.dot(B);
    const Vec3 gpsi = frame_twist_gradient(t0, t, len);
    const Vec3 Bperp = (B - tB * t) / len;

    const Vec3 d_m1B = -tB * m1 / len + m2B * gpsi;
    const Vec3 d_m2B = -tB * m2 / len - m1B * gpsi;
    dE_de = -volume * (mf[0] * d_m1B + mf[1] * d_m2B + mf[2] * Bperp);
    dE_dth = -volume * (mf[0] * m2B - mf[1] * m1B);
}

} // namespace

VecX magnetic_force(const NetTopology &topo, const ConfigState &state, const FrameSeed &seed,
                    const MagneticLoad &load, const VecX &rest_len, const MaterialParams &mat) {
    const DofLayout lay = topo.layout();
    VecX f = VecX::Zero(lay.size());
    if (!load.active())
        return f;
    (void)seed;
    for (int k = 0; k < topo.edge_count(); ++k) {
        Vec3 dE_de;
        Real dE_dth;
        magnetic_edge_gradient(state.frames.m1[k], state.frames.m2[k], state.frames.t[k],
                               seed.t0[k], state.lengths[k], mat.area() * rest_len[k],
                               load.magnetization_frame[k], load.ambient_field, dE_de, dE_dth);
        f.segment<3>(3 * topo.edges[k].a) += dE_de;  // force = -dE/dx, tail has -de/dx
        f.segment<3>(3 * topo.edges[k].b) -= dE_de;
        f[lay.theta(k)] -= dE_dth;
    }
    return f;
}

void magnetic_force_jacobian_triplets(const NetTopology &topo, const ConfigState &state,
                                      const FrameSeed &seed, const MagneticLoad &load,
                                      const VecX &rest_len, const MaterialParams &mat,
                                      std::vector<Triplet> &out) {
    if (!load.active())
        return;
    const DofLayout lay = topo.layout();
    for (int k = 0; k < topo.edge_count(); ++k) {
        const Vec3 e0 = state.edges[k];
        const Real th0 = state.q[lay.theta(k)];
        const Real volume = mat.area() * rest_len[k];

        auto grad = [&](const Vec3 &e, Real th) {
            const Real len = e.norm();
            const Vec3 t = e / len;
            const Vec3 u = parallel_transport(seed.u0[k], seed.t0[k], t);
            const Vec3 v = t.cross(u);
            const Vec3 m1 = u * std::cos(th) + v * std::sin(th);
            const Vec3 m2 = v * std::cos(th) - u * std::sin(th);
            Eigen::Matrix<Real, 4, 1> g;
            Vec3 dE_de;
            Real dE_dth;
            magnetic_edge_gradient(m1, m2, t, seed.t0[k], len, volume,
                                   load.magnetization_frame[k], load.ambient_field, dE_de,
                                   dE_dth);
            g << dE_de, dE_dth;
            return g;
        };

        Eigen::Matrix<Real, 4, 4> H; // d2E/d(e,th)2
        const Real hpos = 1e-5 * state.lengths[k];
        for (int d = 0; d < 4; ++d) {
            Vec3 ep = e0, em = e0;
            Real tp = th0, tm = th0;
            const Real h = (d < 3) ? hpos : 1e-5;
            if (d < 3) {
                ep[d] += h;
                em[d] -= h;
            } else {
                tp += h;
                tm -= h;
            }
            H.col(d) = (grad(ep, tp) - grad(em, tm)) / (2.0 * h);
        }
        H = 0.5 * (H + H.transpose()).eval();

        // dF/dq = -d2E/dq2; map e -> (tail, head) with signs (-, +).
        std::array<int, 7> dofs{};
        for (int c = 0; c < 3; ++c) {
            dofs[c] = 3 * topo.edges[k].a + c;
            dofs[3 + c] = 3 * topo.edges[k].b + c;
        }
        dofs[6] = lay.theta(k);
        auto sign = [](int local) { return local < 3 ? -1.0 : 1.0; };
        auto comp = [](int local) { return local < 3 ? local : (local < 6 ? local - 3 : 3); };
        for (int r = 0; r < 7; ++r)
            for (int c = 0; c < 7; ++c)
                out.emplace_back(dofs[r], dofs[c],
                                 -sign(r) * sign(c) * H(comp(r), comp(c)));
    }
}

} // namespace invrod
