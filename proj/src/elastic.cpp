#include "invrod/elastic.hpp"
#include "invrod/errors.hpp"
#include "invrod/parallel.hpp"

#include <cmath>

namespace invrod {

namespace {
constexpr Real kPi = 3.14159265358979323846;
}

Real MaterialParams::area() const { return kPi * radius * radius; }
Real MaterialParams::polar_moment() const { return kPi * std::pow(radius, 4) / 2.0; }

MaterialParams MaterialParams::circular(Real youngs, Real radius, Real rho) {
    MaterialParams m;
    m.youngs = youngs;
    m.radius = radius;
    m.rho = rho;
    const Real A = kPi * radius * radius;
    const Real I = kPi * std::pow(radius, 4) / 4.0;
    m.EA = youngs * A;
    m.EI1 = youngs * I;
    m.EI2 = youngs * I;
    const Real G = youngs / 3.0; // nu = 1/2
    m.GJ = G * kPi * std::pow(radius, 4) / 2.0;
    return m;
}

NaturalStrains natural_from_state(const NetTopology &topo, const StrainState &st) {
    NaturalStrains nat;
    nat.rest_len = st.edge_len;
    nat.kappa1 = st.kappa1;
    nat.kappa2 = st.kappa2;
    nat.tau = st.tau;
    nat.voronoi = st.voronoi;
    (void)topo;
    return nat;
}

StrainState measure_strains(const NetTopology &topo, const ConfigState &state,
                            const NaturalStrains &natural, const VecX *tau_ref) {
    return compute_strain_state(topo, state.q, state.frames, natural.rest_len, tau_ref);
}

EnergyBreakdown elastic_energy(const NetTopology &topo, const StrainState &current,
                               const NaturalStrains &natural, const MaterialParams &mat) {
    EnergyBreakdown e;
    for (int k = 0; k < topo.edge_count(); ++k) {
        const Real eps = current.eps[k];
        e.stretch += 0.5 * mat.EA * eps * eps * natural.rest_len[k];
    }
    for (int b = 0; b < topo.bend_count(); ++b) {
        const Real dk1 = current.kappa1[b] - natural.kappa1[b];
        const Real dk2 = current.kappa2[b] - natural.kappa2[b];
        const Real dtau = current.tau[b] - natural.tau[b];
        const Real dl = natural.voronoi[b];
        e.bend += 0.5 * (mat.EI1 * dk1 * dk1 + mat.EI2 * dk2 * dk2) / dl;
        e.twist += 0.5 * mat.GJ * dtau * dtau / dl;
    }
    return e;
}

// ---------------------------------------------------------------------------
// Forward model
// ---------------------------------------------------------------------------

namespace {

// Element force (dE/dlocal) of one bend, as a function of its local DOFs.
Vec11 bend_element_gradient(const BendLocal &in, const MaterialParams &mat,
                            Real kbar1, Real kbar2, Real taubar, Real dl, int bend_index,
                            const Real *tau_ref) {
    const BendStencil st = bend_stencil(in, bend_index, tau_ref);
    return (mat.EI1 * (st.kappa1 - kbar1) / dl) * st.g_kappa1 +
           (mat.EI2 * (st.kappa2 - kbar2) / dl) * st.g_kappa2 +
           (mat.GJ * (st.tau - taubar) / dl) * st.g_tau;
}

void perturb(BendLocal &in, int dof, Real h) {
    if (dof < 3)
        in.xa[dof] += h;
    else if (dof < 6)
        in.xc[dof - 3] += h;
    else if (dof < 9)
        in.xb[dof - 6] += h;
    else if (dof == 9)
        in.theta_i += h;
    else
        in.theta_j += h;
}

} // namespace

VecX elastic_gradient(const NetTopology &topo, const ConfigState &state,
                      const FrameSeed &seed, const NaturalStrains &natural,
                      const MaterialParams &mat, const VecX *tau_ref) {
    const DofLayout lay = topo.layout();
    VecX grad = VecX::Zero(lay.size());

    for (int k = 0; k < topo.edge_count(); ++k) {
        const Real lbar = natural.rest_len[k];
        if (lbar <= 0.0)
            throw ZeroRestLength();
        const Real eps = state.lengths[k] / lbar - 1.0;
        const Vec3 f = mat.EA * eps * state.frames.t[k]; // EA eps lbar * t/lbar
        grad.segment<3>(3 * topo.edges[k].a) -= f;
        grad.segment<3>(3 * topo.edges[k].b) += f;
    }

    for (int b = 0; b < topo.bend_count(); ++b) {
        const Bend &bd = topo.bends[b];
        const BendLocal in = bend_local(topo, b, state.q, seed);
        const Vec11 g = bend_element_gradient(in, mat, natural.kappa1[b], natural.kappa2[b],
                                              natural.tau[b], natural.voronoi[b], b,
                                              tau_ref ? &(*tau_ref)[b] : nullptr);
        const int na = topo.bend_node_a(bd);
        const int nb_ = topo.bend_node_b(bd);
        grad.segment<3>(3 * na) += g.segment<3>(0);
        grad.segment<3>(3 * bd.center) += g.segment<3>(3);
        grad.segment<3>(3 * nb_) += g.segment<3>(6);
        grad[lay.theta(bd.edge_i)] += g[9];
        grad[lay.theta(bd.edge_j)] += g[10];
    }
    return grad;
}

namespace {

std::array<int, 11> bend_dof_indices(const NetTopology &topo, const Bend &bd) {
    const DofLayout lay = topo.layout();
    std::array<int, 11> dofs{};
    const int na = topo.bend_node_a(bd);
    const int nb = topo.bend_node_b(bd);
    for (int c = 0; c < 3; ++c) {
        dofs[c] = 3 * na + c;
        dofs[3 + c] = 3 * bd.center + c;
        dofs[6 + c] = 3 * nb + c;
    }
    dofs[9] = lay.theta(bd.edge_i);
    dofs[10] = lay.theta(bd.edge_j);
    return dofs;
}

} // namespace

void elastic_hessian_triplets(const NetTopology &topo, const ConfigState &state,
                              const FrameSeed &seed, const NaturalStrains &natural,
                              const MaterialParams &mat, std::vector<Triplet> &out,
                              int threads, const VecX *tau_ref) {

    // Stretch: closed form, nodal 3x3 blocks.
    for (int k = 0; k < topo.edge_count(); ++k) {
        const Real lbar = natural.rest_len[k];
        const Real len = state.lengths[k];
        const Vec3 t = state.frames.t[k];
        const Real eps = len / lbar - 1.0;
        const Mat3 block = mat.EA * (t * t.transpose() / lbar +
                                     eps * (Mat3::Identity() - t * t.transpose()) / len);
        const int ia = 3 * topo.edges[k].a;
        const int ib = 3 * topo.edges[k].b;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                const Real v = block(r, c);
                out.emplace_back(ia + r, ia + c, v);
                out.emplace_back(ib + r, ib + c, v);
                out.emplace_back(ia + r, ib + c, -v);
                out.emplace_back(ib + r, ia + c, -v);
            }
    }

    // Bend + twist: centered differences of the exact element gradient.
    const int nb = topo.bend_count();
    std::vector<Eigen::Matrix<Real, 11, 11>> blocks(nb);
    parallel_for(nb, threads, [&](int b) {
        const BendLocal base = bend_local(topo, b, state.q, seed);
        const Real scale = 0.5 * ((base.xc - base.xa).norm() + (base.xb - base.xc).norm());
        Eigen::Matrix<Real, 11, 11> H;
        for (int d = 0; d < 11; ++d) {
            const Real h = (d < 9) ? 1e-5 * scale : 1e-5;
            BendLocal plus = base, minus = base;
            perturb(plus, d, h);
            perturb(minus, d, -h);
            const Real *tr = tau_ref ? &(*tau_ref)[b] : nullptr;
            const Vec11 gp = bend_element_gradient(plus, mat, natural.kappa1[b],
                                                   natural.kappa2[b], natural.tau[b],
                                                   natural.voronoi[b], b, tr);
            const Vec11 gm = bend_element_gradient(minus, mat, natural.kappa1[b],
                                                   natural.kappa2[b], natural.tau[b],
                                                   natural.voronoi[b], b, tr);
            H.col(d) = (gp - gm) / (2.0 * h);
        }
        // Symmetrize: the exact operator is symmetric, differencing noise is not.
        blocks[b] = 0.5 * (H + H.transpose());
    });
    for (int b = 0; b < nb; ++b) {
        const auto dofs = bend_dof_indices(topo, topo.bends[b]);
        for (int r = 0; r < 11; ++r)
            for (int c = 0; c < 11; ++c)
                out.emplace_back(dofs[r], dofs[c], blocks[b](r, c));
    }
}

void elastic_gauss_newton_triplets(const NetTopology &topo, const ConfigState &state,
                                   const FrameSeed &seed, const NaturalStrains &natural,
                                   const MaterialParams &mat, std::vector<Triplet> &out) {
    for (int k = 0; k < topo.edge_count(); ++k) {
        const Real lbar = natural.rest_len[k];
        const Vec3 t = state.frames.t[k];
        const Mat3 block = (mat.EA / lbar) * (t * t.transpose());
        const int ia = 3 * topo.edges[k].a;
        const int ib = 3 * topo.edges[k].b;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                const Real v = block(r, c);
                out.emplace_back(ia + r, ia + c, v);
                out.emplace_back(ib + r, ib + c, v);
                out.emplace_back(ia + r, ib + c, -v);
                out.emplace_back(ib + r, ia + c, -v);
            }
    }
    for (int b = 0; b < topo.bend_count(); ++b) {
        const Bend &bd = topo.bends[b];
        const BendStencil st = bend_stencil(bend_local(topo, b, state.q, seed), b);
        const Real dl = natural.voronoi[b];
        const Eigen::Matrix<Real, 11, 11> H =
            (mat.EI1 / dl) * (st.g_kappa1 * st.g_kappa1.transpose()) +
            (mat.EI2 / dl) * (st.g_kappa2 * st.g_kappa2.transpose()) +
            (mat.GJ / dl) * (st.g_tau * st.g_tau.transpose());
        const auto dofs = bend_dof_indices(topo, bd);
        for (int r = 0; r < 11; ++r)
            for (int c = 0; c < 11; ++c)
                out.emplace_back(dofs[r], dofs[c], H(r, c));
    }
}

// ---------------------------------------------------------------------------
// Inverse model
// ---------------------------------------------------------------------------

InverseModel freeze_dc(const NetTopology &topo, const VecX &dc_q, const MaterialParams &mat) {
    InverseModel model;
    model.topo = topo;
    model.mat = mat;
    model.seed = make_seed(topo, dc_q);
    const ConfigState dc = eval_config(topo, dc_q, model.seed);
    model.dc_edge_len.resize(topo.edge_count());
    model.dc_tangent.resize(topo.edge_count());
    for (int k = 0; k < topo.edge_count(); ++k) {
        model.dc_edge_len[k] = dc.lengths[k];
        model.dc_tangent[k] = dc.frames.t[k];
    }
    model.dc_bends.reserve(topo.bend_count());
    for (int b = 0; b < topo.bend_count(); ++b)
        model.dc_bends.push_back(bend_stencil(bend_local(topo, b, dc_q, model.seed), b));
    return model;
}

VecX inverse_gradient(const InverseModel &model, const ConfigState &candidate,
                      const VecX *tau_ref) {
    const NetTopology &topo = model.topo;
    const DofLayout lay = topo.layout();
    VecX grad = VecX::Zero(lay.size());

    for (int k = 0; k < topo.edge_count(); ++k) {
        const Real lbar = candidate.lengths[k];
        const Real eps = model.dc_edge_len[k] / lbar - 1.0;
        const Vec3 f = model.mat.EA * eps * model.dc_tangent[k];
        grad.segment<3>(3 * topo.edges[k].a) -= f;
        grad.segment<3>(3 * topo.edges[k].b) += f;
    }

    for (int b = 0; b < topo.bend_count(); ++b) {
        const Bend &bd = topo.bends[b];
        const BendStencil uc = bend_stencil(bend_local(topo, b, candidate.q, model.seed), b,
                                            tau_ref ? &(*tau_ref)[b] : nullptr);
        const Real dl = 0.5 * ((node_pos(candidate.q, bd.center) -
                                node_pos(candidate.q, topo.bend_node_a(bd)))
                                   .norm() +
                               (node_pos(candidate.q, topo.bend_node_b(bd)) -
                                node_pos(candidate.q, bd.center))
                                   .norm());
        const BendStencil &dc = model.dc_bends[b];
        const Vec11 g = (model.mat.EI1 * (dc.kappa1 - uc.kappa1) / dl) * dc.g_kappa1 +
                        (model.mat.EI2 * (dc.kappa2 - uc.kappa2) / dl) * dc.g_kappa2 +
                        (model.mat.GJ * (dc.tau - uc.tau) / dl) * dc.g_tau;
        const int na = topo.bend_node_a(bd);
        const int nb_ = topo.bend_node_b(bd);
        grad.segment<3>(3 * na) += g.segment<3>(0);
        grad.segment<3>(3 * bd.center) += g.segment<3>(3);
        grad.segment<3>(3 * nb_) += g.segment<3>(6);
        grad[lay.theta(bd.edge_i)] += g[9];
        grad[lay.theta(bd.edge_j)] += g[10];
    }
    return grad;
}

void inverse_jacobian_triplets(const InverseModel &model, const ConfigState &candidate,
                               std::vector<Triplet> &out, int threads,
                               const VecX *tau_ref) {
    const NetTopology &topo = model.topo;

    for (int k = 0; k < topo.edge_count(); ++k) {
        const Real lbar = candidate.lengths[k];
        const Vec3 tbar = candidate.frames.t[k];
        // d(EA eps)/dq = -EA * len_dc / lbar^2 * dlbar/dq
        const Vec3 dpref = -model.mat.EA * model.dc_edge_len[k] / (lbar * lbar) * tbar;
        const Vec3 gdc = model.dc_tangent[k];
        const int ia = 3 * topo.edges[k].a;
        const int ib = 3 * topo.edges[k].b;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                const Real v = gdc[r] * dpref[c];
                out.emplace_back(ib + r, ib + c, v);
                out.emplace_back(ib + r, ia + c, -v);
                out.emplace_back(ia + r, ib + c, -v);
                out.emplace_back(ia + r, ia + c, v);
            }
    }

    const int nb = topo.bend_count();
    std::vector<Eigen::Matrix<Real, 11, 11>> blocks(nb);
    parallel_for(nb, threads, [&](int b) {
        const Bend &bd = topo.bends[b];
        const BendStencil uc = bend_stencil(bend_local(topo, b, candidate.q, model.seed), b,
                                            tau_ref ? &(*tau_ref)[b] : nullptr);
        const BendStencil &dc = model.dc_bends[b];

        const Vec3 xa = node_pos(candidate.q, topo.bend_node_a(bd));
        const Vec3 xc = node_pos(candidate.q, bd.center);
        const Vec3 xb = node_pos(candidate.q, topo.bend_node_b(bd));
        const Real li = (xc - xa).norm();
        const Real lj = (xb - xc).norm();
        const Real dl = 0.5 * (li + lj);
        const Vec3 ti = (xc - xa) / li;
        const Vec3 tj = (xb - xc) / lj;
        Vec11 g_dl = Vec11::Zero();
        g_dl.segment<3>(0) = -0.5 * ti;
        g_dl.segment<3>(3) = 0.5 * (ti - tj);
        g_dl.segment<3>(6) = 0.5 * tj;

        // dP/dqbar for each prefactor P = K (strain_dc - strain_uc) / dl
        const Vec11 dp1 = model.mat.EI1 * (-uc.g_kappa1 / dl -
                                           (dc.kappa1 - uc.kappa1) / (dl * dl) * g_dl);
        const Vec11 dp2 = model.mat.EI2 * (-uc.g_kappa2 / dl -
                                           (dc.kappa2 - uc.kappa2) / (dl * dl) * g_dl);
        const Vec11 dpt = model.mat.GJ * (-uc.g_tau / dl -
                                          (dc.tau - uc.tau) / (dl * dl) * g_dl);

        blocks[b] = dc.g_kappa1 * dp1.transpose() + dc.g_kappa2 * dp2.transpose() +
                    dc.g_tau * dpt.transpose();
    });
    for (int b = 0; b < nb; ++b) {
        const auto dofs = bend_dof_indices(topo, topo.bends[b]);
        for (int r = 0; r < 11; ++r)
            for (int c = 0; c < 11; ++c)
                out.emplace_back(dofs[r], dofs[c], blocks[b](r, c));
    }
}

} // namespace invrod
