#include "invrod/geometry.hpp"
#include "invrod/errors.hpp"

#include <cmath>

namespace invrod {

Vec3 parallel_transport(const Vec3 &a, const Vec3 &t1, const Vec3 &t2) {
    const Real c = t1.dot(t2);
    if (c <= -1.0 + kDeltaParallel)
        throw AntiparallelTangents();
    const Vec3 b = t1.cross(t2);
    const Real s = b.norm();
    if (s < 1e-14)
        return a;
    const Vec3 axis = b / s;
    return a * c + axis.cross(a) * s + axis * (axis.dot(a)) * (1.0 - c);
}

Real signed_angle(const Vec3 &a, const Vec3 &b, const Vec3 &axis) {
    Real ang = std::atan2(a.cross(b).dot(axis), a.dot(b));
    if (ang <= -M_PI + 0.0) // boundary convention: half turn is +pi
        ang = M_PI;
    return ang;
}

Vec3 seed_director(const Vec3 &t) {
    int axis = 0;
    Real best = std::abs(t.x());
    if (std::abs(t.y()) < best) {
        axis = 1;
        best = std::abs(t.y());
    }
    if (std::abs(t.z()) < best)
        axis = 2;
    Vec3 g = Vec3::Zero();
    g[axis] = 1.0;
    const Vec3 u = g - t * t.dot(g);
    return u.normalized();
}

std::vector<Vec3> edge_vectors(const NetTopology &topo, const VecX &q) {
    std::vector<Vec3> e(topo.edge_count());
    for (int k = 0; k < topo.edge_count(); ++k)
        e[k] = node_pos(q, topo.edges[k].b) - node_pos(q, topo.edges[k].a);
    return e;
}

std::vector<Vec3> unit_tangents(const NetTopology &topo, const VecX &q) {
    std::vector<Vec3> t = edge_vectors(topo, q);
    for (int k = 0; k < topo.edge_count(); ++k) {
        const Real len = t[k].norm();
        if (len <= 0.0)
            throw DegenerateEdge(k);
        t[k] /= len;
    }
    return t;
}

FrameSeed make_seed(const NetTopology &topo, const VecX &q) {
    FrameSeed seed;
    seed.t0 = unit_tangents(topo, q);
    seed.u0.reserve(seed.t0.size());
    for (const Vec3 &t : seed.t0)
        seed.u0.push_back(seed_director(t));
    return seed;
}

FrameSet update_reference_frames(const FrameSeed &seed, const std::vector<Vec3> &tangents,
                                 const VecX &thetas) {
    const int ne = static_cast<int>(tangents.size());
    FrameSet fs;
    fs.u.resize(ne);
    fs.v.resize(ne);
    fs.t = tangents;
    fs.m1.resize(ne);
    fs.m2.resize(ne);
    for (int k = 0; k < ne; ++k) {
        try {
            fs.u[k] = parallel_transport(seed.u0[k], seed.t0[k], tangents[k]);
        } catch (const AntiparallelTangents &) {
            throw AntiparallelTangents(k);
        }
        fs.v[k] = tangents[k].cross(fs.u[k]);
        const Real c = std::cos(thetas[k]);
        const Real s = std::sin(thetas[k]);
        fs.m1[k] = fs.u[k] * c + fs.v[k] * s;
        fs.m2[k] = fs.v[k] * c - fs.u[k] * s;
    }
    return fs;
}

ConfigState eval_config(const NetTopology &topo, const VecX &q, const FrameSeed &seed) {
    ConfigState st;
    st.q = q;
    st.edges = edge_vectors(topo, q);
    st.lengths.resize(st.edges.size());
    std::vector<Vec3> tangents(st.edges.size());
    for (int k = 0; k < topo.edge_count(); ++k) {
        st.lengths[k] = st.edges[k].norm();
        if (st.lengths[k] <= 0.0)
            throw DegenerateEdge(k);
        tangents[k] = st.edges[k] / st.lengths[k];
    }
    const DofLayout lay = topo.layout();
    st.frames = update_reference_frames(seed, tangents, q.tail(lay.edge_count));
    return st;
}

Vec3 curvature_binormal(const Vec3 &e1, const Vec3 &e2) {
    const Real denom = e1.norm() * e2.norm() + e1.dot(e2);
    if (denom <= kDeltaKb * e1.norm() * e2.norm())
        throw TurningSingularity();
    return 2.0 * e1.cross(e2) / denom;
}

std::pair<Real, Real> material_curvatures(const Vec3 &kb, const Vec3 &m1a, const Vec3 &m1b,
                                          const Vec3 &m2a, const Vec3 &m2b) {
    return {0.5 * (m1a + m1b).dot(kb), -0.5 * (m2a + m2b).dot(kb)};
}

Real stretch_strain(const Vec3 &e, Real rest_len) {
    if (rest_len <= 0.0)
        throw ZeroRestLength();
    return e.norm() / rest_len - 1.0;
}

Real reference_twist(const Vec3 &u1, const Vec3 &u2, const Vec3 &t1, const Vec3 &t2) {
    const Vec3 transported = parallel_transport(u1, t1, t2);
    return signed_angle(transported, u2, t2);
}

Real twist_strain(Real theta1, Real theta2, Real phi_ref) {
    return theta2 - theta1 + phi_ref;
}

namespace {

// Shift tau by the multiple of 2*pi that brings it closest to ref.
Real unwrap_twist(Real tau, Real ref) {
    return tau + 2.0 * M_PI * std::round((ref - tau) / (2.0 * M_PI));
}

} // namespace

Vec3 frame_twist_gradient(const Vec3 &t0, const Vec3 &t, Real length) {
    return -t0.cross(t) / ((1.0 + t0.dot(t)) * length);
}

BendLocal bend_local(const NetTopology &topo, int bend_index, const VecX &q,
                     const FrameSeed &seed) {
    const Bend &bd = topo.bends[bend_index];
    const DofLayout lay = topo.layout();
    BendLocal in;
    in.xa = node_pos(q, topo.bend_node_a(bd));
    in.xc = node_pos(q, bd.center);
    in.xb = node_pos(q, topo.bend_node_b(bd));
    in.t0_i = seed.t0[bd.edge_i];
    in.u0_i = seed.u0[bd.edge_i];
    in.t0_j = seed.t0[bd.edge_j];
    in.u0_j = seed.u0[bd.edge_j];
    in.theta_i = q[lay.theta(bd.edge_i)];
    in.theta_j = q[lay.theta(bd.edge_j)];
    in.sign_i = bd.sign_i;
    in.sign_j = bd.sign_j;
    return in;
}

BendStencil bend_stencil(const BendLocal &in, int bend_index, const Real *tau_ref) {
    BendStencil out;

    const Vec3 ei = in.xc - in.xa; // traversal edge vectors
    const Vec3 ej = in.xb - in.xc;
    const Real li = ei.norm();
    const Real lj = ej.norm();
    if (li <= 0.0 || lj <= 0.0)
        throw DegenerateEdge(bend_index);
    const Vec3 ti = ei / li;
    const Vec3 tj = ej / lj;

    // Stored frames, then the traversal-oriented view. A reversed edge keeps
    // u, flips v and the tangent, and negates its theta and m2.
    const Vec3 ti_s = in.sign_i > 0 ? ti : Vec3(-ti);
    const Vec3 tj_s = in.sign_j > 0 ? tj : Vec3(-tj);
    Vec3 ui, uj;
    try {
        ui = parallel_transport(in.u0_i, in.t0_i, ti_s);
        uj = parallel_transport(in.u0_j, in.t0_j, tj_s);
    } catch (const AntiparallelTangents &) {
        throw AntiparallelTangents(bend_index);
    }
    const Vec3 vi = ti_s.cross(ui);
    const Vec3 vj = tj_s.cross(uj);
    const Real th_i = in.sign_i * in.theta_i; // effective twist angles
    const Real th_j = in.sign_j * in.theta_j;
    const Real ci = std::cos(th_i), si = std::sin(th_i);
    const Real cj = std::cos(th_j), sj = std::sin(th_j);
    const Vec3 m1i = ui * ci + (in.sign_i * vi) * si;
    const Vec3 m2i = (in.sign_i * vi) * ci - ui * si;
    const Vec3 m1j = uj * cj + (in.sign_j * vj) * sj;
    const Vec3 m2j = (in.sign_j * vj) * cj - uj * sj;

    const Real chi = 1.0 + ti.dot(tj);
    if (chi <= kDeltaKb)
        throw TurningSingularity(bend_index);
    const Vec3 kb = 2.0 * ti.cross(tj) / chi;
    const Vec3 tt = (ti + tj) / chi;

    out.kappa1 = 0.5 * (m1i + m1j).dot(kb);
    out.kappa2 = -0.5 * (m2i + m2j).dot(kb);

    const Real phi = signed_angle(parallel_transport(ui, ti, tj), uj, tj);
    out.tau = th_j - th_i + phi;
    if (tau_ref)
        out.tau = unwrap_twist(out.tau, *tau_ref);

    // Frame twist gradients w.r.t. the traversal edge vectors (stored t0, t).
    const Vec3 gpsi_i = frame_twist_gradient(in.t0_i, ti_s, li);
    const Vec3 gpsi_j = frame_twist_gradient(in.t0_j, tj_s, lj);

    // d kappa / d theta_eff; the psi twist of a frame acts exactly like theta.
    const Real dk1_di = 0.5 * m2i.dot(kb);
    const Real dk1_dj = 0.5 * m2j.dot(kb);
    const Real dk2_di = 0.5 * m1i.dot(kb);
    const Real dk2_dj = 0.5 * m1j.dot(kb);

    auto fill = [&](const Vec3 &gei, const Vec3 &gej, Real dth_i, Real dth_j, Vec11 &g) {
        g.segment<3>(0) = -gei;
        g.segment<3>(3) = gei - gej;
        g.segment<3>(6) = gej;
        g[9] = in.sign_i * dth_i;
        g[10] = in.sign_j * dth_j;
    };

    {
        const Vec3 p = 0.5 * (m1i + m1j);
        const Vec3 gei = (-out.kappa1 * tt + (2.0 / chi) * tj.cross(p)) / li + dk1_di * gpsi_i;
        const Vec3 gej = (-out.kappa1 * tt - (2.0 / chi) * ti.cross(p)) / lj + dk1_dj * gpsi_j;
        fill(gei, gej, dk1_di, dk1_dj, out.g_kappa1);
    }
    {
        const Vec3 p = -0.5 * (m2i + m2j);
        const Vec3 gei = (-out.kappa2 * tt + (2.0 / chi) * tj.cross(p)) / li + dk2_di * gpsi_i;
        const Vec3 gej = (-out.kappa2 * tt - (2.0 / chi) * ti.cross(p)) / lj + dk2_dj * gpsi_j;
        fill(gei, gej, dk2_di, dk2_dj, out.g_kappa2);
    }
    {
        const Vec3 gei = kb / (2.0 * li) - gpsi_i;
        const Vec3 gej = kb / (2.0 * lj) + gpsi_j;
        fill(gei, gej, -1.0, 1.0, out.g_tau);
    }
    return out;
}

StrainState compute_strain_state(const NetTopology &topo, const VecX &q,
                                 const FrameSet &frames, const VecX &rest_lengths,
                                 const VecX *tau_ref) {
    const int ne = topo.edge_count();
    const int nb = topo.bend_count();
    StrainState st;
    st.eps.resize(ne);
    st.edge_len.resize(ne);
    st.kappa1.resize(nb);
    st.kappa2.resize(nb);
    st.tau.resize(nb);
    st.voronoi.resize(nb);

    const std::vector<Vec3> evec = edge_vectors(topo, q);
    for (int k = 0; k < ne; ++k) {
        st.edge_len[k] = evec[k].norm();
        st.eps[k] = stretch_strain(evec[k], rest_lengths[k]);
    }
    const DofLayout lay = topo.layout();
    for (int b = 0; b < nb; ++b) {
        const Bend &bd = topo.bends[b];
        const Vec3 ei = node_pos(q, bd.center) - node_pos(q, topo.bend_node_a(bd));
        const Vec3 ej = node_pos(q, topo.bend_node_b(bd)) - node_pos(q, bd.center);
        Vec3 kb;
        try {
            kb = curvature_binormal(ei, ej);
        } catch (const TurningSingularity &) {
            throw TurningSingularity(b);
        }
        const Vec3 m1i = frames.m1[bd.edge_i];
        const Vec3 m1j = frames.m1[bd.edge_j];
        const Vec3 m2i = bd.sign_i * frames.m2[bd.edge_i];
        const Vec3 m2j = bd.sign_j * frames.m2[bd.edge_j];
        auto [k1, k2] = material_curvatures(kb, m1i, m1j, m2i, m2j);
        st.kappa1[b] = k1;
        st.kappa2[b] = k2;

        const Vec3 ti_s = bd.sign_i * frames.t[bd.edge_i];
        const Vec3 tj_s = bd.sign_j * frames.t[bd.edge_j];
        Real phi;
        try {
            phi = reference_twist(frames.u[bd.edge_i], frames.u[bd.edge_j], ti_s, tj_s);
        } catch (const AntiparallelTangents &) {
            throw TurningSingularity(b);
        }
        st.tau[b] = twist_strain(bd.sign_i * q[lay.theta(bd.edge_i)],
                                 bd.sign_j * q[lay.theta(bd.edge_j)], phi);
        if (tau_ref)
            st.tau[b] = unwrap_twist(st.tau[b], (*tau_ref)[b]);
        st.voronoi[b] = 0.5 * (ei.norm() + ej.norm());
    }
    return st;
}

VecX regauge_twists(const NetTopology &topo, const VecX &q, const FrameSeed &from,
                    const FrameSeed &to, const VecX *tau_target) {
    const DofLayout lay = topo.layout();
    const std::vector<Vec3> tans = unit_tangents(topo, q);

    VecX tau_from;
    if (tau_target) {
        tau_from = *tau_target;
    } else {
        const ConfigState a = eval_config(topo, q, from);
        VecX lens(topo.edge_count());
        for (int k = 0; k < topo.edge_count(); ++k)
            lens[k] = a.lengths[k];
        tau_from = compute_strain_state(topo, q, a.frames, lens).tau;
    }

    // Per-edge angle between the two gauges' reference directors; adding it to
    // theta keeps the material directors fixed, up to a full-turn ambiguity.
    VecX out = q;
    for (int k = 0; k < topo.edge_count(); ++k) {
        const Vec3 uf = parallel_transport(from.u0[k], from.t0[k], tans[k]);
        const Vec3 ut = parallel_transport(to.u0[k], to.t0[k], tans[k]);
        out[lay.theta(k)] += signed_angle(ut, uf, tans[k]);
    }

    // Resolve the windings: sweep the bends, shifting thetas by multiples of
    // 2*pi until every joint twist matches its target value. Each pass fixes
    // at least the joints whose upstream edge is already settled, so the
    // sweep terminates in at most edge_count passes on connected networks.
    const ConfigState b = eval_config(topo, out, to);
    VecX lens(topo.edge_count());
    for (int k = 0; k < topo.edge_count(); ++k)
        lens[k] = b.lengths[k];
    const VecX tau_to = compute_strain_state(topo, out, b.frames, lens).tau;
    VecX off = VecX::Zero(topo.edge_count());
    for (int pass = 0; pass < topo.edge_count(); ++pass) {
        bool changed = false;
        for (int bi = 0; bi < topo.bend_count(); ++bi) {
            const Bend &bd = topo.bends[bi];
            const Real cur =
                tau_to[bi] + bd.sign_j * off[bd.edge_j] - bd.sign_i * off[bd.edge_i];
            const Real w = std::round((cur - tau_from[bi]) / (2.0 * M_PI));
            if (w != 0) {
                off[bd.edge_j] -= 2.0 * M_PI * w * bd.sign_j;
                changed = true;
            }
        }
        if (!changed)
            break;
    }
    for (int k = 0; k < topo.edge_count(); ++k)
        out[lay.theta(k)] += off[k];
    return out;
}

} // namespace invrod
