#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "invrod/elastic.hpp"
#include "invrod/errors.hpp"
#include "invrod/geometry.hpp"
#include "invrod/topology.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

using namespace invrod;

namespace {

Vec3 random_vec(std::mt19937 &rng, Real scale = 1.0) {
    std::normal_distribution<Real> n(0, scale);
    return Vec3(n(rng), n(rng), n(rng));
}

// Mildly wiggly open rod, the workhorse fixture.
VecX wiggly_rod(const NetTopology &topo, std::mt19937 &rng, Real wiggle) {
    VecX q = VecX::Zero(topo.layout().size());
    for (int n = 0; n < topo.node_count; ++n)
        set_node_pos(q, n, Vec3(0.1 * n, 0, 0) + wiggle * random_vec(rng));
    for (int k = 0; k < topo.edge_count(); ++k)
        q[topo.layout().theta(k)] = 0.5 * wiggle * 10 *
                                    std::uniform_real_distribution<Real>(-1, 1)(rng);
    return q;
}

// Four-armed joint with mixed edge orientations so both traversal signs of
// the bend elements are exercised.
NetTopology x_joint() {
    NetTopology topo;
    topo.node_count = 5;
    topo.edges = {{0, 1}, {1, 2}, {3, 1}, {1, 4}};
    // sign_i: edge_i enters the center, so +1 iff it points toward it;
    // sign_j: edge_j leaves the center, so +1 iff it points away from it
    topo.bends.push_back({0, 1, 1, -orientation_sign(topo.edges[0], 1),
                          orientation_sign(topo.edges[1], 1)});
    topo.bends.push_back({2, 3, 1, -orientation_sign(topo.edges[2], 1),
                          orientation_sign(topo.edges[3], 1)});
    topo.bends.push_back({1, 2, 1, -orientation_sign(topo.edges[1], 1),
                          orientation_sign(topo.edges[2], 1)});
    validate_topology(topo);
    return topo;
}

VecX x_joint_positions(std::mt19937 &rng, Real wiggle) {
    NetTopology topo = x_joint();
    VecX q = VecX::Zero(topo.layout().size());
    set_node_pos(q, 0, Vec3(-1, 0, 0) + wiggle * random_vec(rng));
    set_node_pos(q, 1, Vec3(0, 0, 0) + wiggle * random_vec(rng));
    set_node_pos(q, 2, Vec3(1, 0.2, 0) + wiggle * random_vec(rng));
    set_node_pos(q, 3, Vec3(0.1, 1, 0.1) + wiggle * random_vec(rng));
    set_node_pos(q, 4, Vec3(-0.1, -1, 0.2) + wiggle * random_vec(rng));
    for (int k = 0; k < 4; ++k)
        q[topo.layout().theta(k)] = std::uniform_real_distribution<Real>(-1, 1)(rng);
    return q;
}

NaturalStrains own_strains(const NetTopology &topo, const VecX &q, const FrameSeed &seed) {
    const ConfigState st = eval_config(topo, q, seed);
    VecX lens(topo.edge_count());
    for (int k = 0; k < topo.edge_count(); ++k)
        lens[k] = st.lengths[k];
    return natural_from_state(topo, compute_strain_state(topo, q, st.frames, lens));
}

Real total_energy(const NetTopology &topo, const VecX &q, const FrameSeed &seed,
                  const NaturalStrains &natural, const MaterialParams &mat) {
    const ConfigState st = eval_config(topo, q, seed);
    return elastic_energy(topo, measure_strains(topo, st, natural), natural, mat).total();
}

Eigen::MatrixXd dense_from(const std::vector<Triplet> &trips, int n) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (const Triplet &t : trips)
        M(t.row(), t.col()) += t.value();
    return M;
}

const MaterialParams kMat = MaterialParams::circular(1e7, 1e-2, 1e3);

} // namespace

TEST_CASE("material parameters of a circular section") {
    CHECK(kMat.EA == doctest::Approx(1e7 * M_PI * 1e-4));
    CHECK(kMat.EI1 == doctest::Approx(1e7 * M_PI * 1e-8 / 4));
    CHECK(kMat.EI2 == doctest::Approx(kMat.EI1));
    CHECK(kMat.GJ == doctest::Approx((1e7 / 3.0) * M_PI * 1e-8 / 2));
    CHECK(kMat.area() == doctest::Approx(M_PI * 1e-4));
}

TEST_CASE("single stretched edge energy") {
    NetTopology topo = build_chain(2);
    VecX q = VecX::Zero(topo.layout().size());
    set_node_pos(q, 1, Vec3(1.1, 0, 0));
    MaterialParams mat;
    mat.EA = 1.0;
    NaturalStrains nat;
    nat.rest_len = VecX::Ones(1);
    nat.kappa1 = nat.kappa2 = nat.tau = nat.voronoi = VecX(0);
    const FrameSeed seed = make_seed(topo, q);
    const ConfigState st = eval_config(topo, q, seed);
    const EnergyBreakdown e = elastic_energy(topo, measure_strains(topo, st, nat), nat, mat);
    CHECK(e.stretch == doctest::Approx(0.005));
    CHECK(e.bend == 0.0);
    CHECK(e.twist == 0.0);
}

TEST_CASE("energy is linear in the stiffnesses") {
    std::mt19937 rng(11);
    NetTopology topo = build_chain(8);
    const VecX q0 = wiggly_rod(topo, rng, 0.02);
    const VecX q1 = wiggly_rod(topo, rng, 0.02);
    const FrameSeed seed = make_seed(topo, q0);
    const NaturalStrains nat = own_strains(topo, q0, seed);
    MaterialParams m2 = kMat;
    m2.EA *= 2;
    m2.EI1 *= 2;
    m2.EI2 *= 2;
    m2.GJ *= 2;
    CHECK(total_energy(topo, q1, seed, nat, m2) ==
          doctest::Approx(2 * total_energy(topo, q1, seed, nat, kMat)));
}

TEST_CASE("energy at the natural state is zero") {
    std::mt19937 rng(5);
    NetTopology topo = build_chain(10);
    const VecX q = wiggly_rod(topo, rng, 0.03);
    const FrameSeed seed = make_seed(topo, q);
    const NaturalStrains nat = own_strains(topo, q, seed);
    CHECK(total_energy(topo, q, seed, nat, kMat) < 1e-18);
    const ConfigState st = eval_config(topo, q, seed);
    CHECK(elastic_gradient(topo, st, seed, nat, kMat).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("energy is invariant under rigid motion") {
    std::mt19937 rng(17);
    NetTopology topo = build_chain(9);
    const VecX q0 = wiggly_rod(topo, rng, 0.02);
    const VecX qn = wiggly_rod(topo, rng, 0.02);
    const FrameSeed seed = make_seed(topo, q0);
    const NaturalStrains nat = own_strains(topo, qn, seed);
    const Real e0 = total_energy(topo, q0, seed, nat, kMat);

    const Eigen::AngleAxisd rot(0.7, Vec3(1, 2, 3).normalized());
    const Vec3 shift(0.3, -0.2, 0.5);
    VecX qr = q0;
    for (int n = 0; n < topo.node_count; ++n)
        set_node_pos(qr, n, rot * node_pos(q0, n) + shift);
    // transported frames rotate rigidly only if the seed rotates with them
    FrameSeed seed_r = seed;
    for (size_t k = 0; k < seed.t0.size(); ++k) {
        seed_r.t0[k] = rot * seed.t0[k];
        seed_r.u0[k] = rot * seed.u0[k];
    }
    CHECK(total_energy(topo, qr, seed_r, nat, kMat) == doctest::Approx(e0).epsilon(1e-10));
}

TEST_CASE("forward gradient matches finite differences of the energy") {
    std::mt19937 rng(23);
    for (int rep = 0; rep < 4; ++rep) {
        NetTopology topo = build_chain(10);
        const VecX q = wiggly_rod(topo, rng, 0.02);
        const VecX qn = wiggly_rod(topo, rng, 0.02);
        const FrameSeed seed = make_seed(topo, qn);
        const NaturalStrains nat = own_strains(topo, qn, seed);
        const ConfigState st = eval_config(topo, q, seed);
        const VecX g = elastic_gradient(topo, st, seed, nat, kMat);
        const Real h = 1e-6;
        const Real scale = g.cwiseAbs().maxCoeff();
        for (int d = 0; d < q.size(); ++d) {
            VecX qp = q, qm = q;
            qp[d] += h;
            qm[d] -= h;
            const Real fd = (total_energy(topo, qp, seed, nat, kMat) -
                             total_energy(topo, qm, seed, nat, kMat)) /
                            (2 * h);
            CHECK(std::abs(g[d] - fd) < 1e-5 * scale);
        }
    }
}

TEST_CASE("forward gradient matches finite differences on a net joint") {
    std::mt19937 rng(29);
    NetTopology topo = x_joint();
    const VecX q = x_joint_positions(rng, 0.05);
    const VecX qn = x_joint_positions(rng, 0.05);
    const FrameSeed seed = make_seed(topo, qn);
    const NaturalStrains nat = own_strains(topo, qn, seed);
    const ConfigState st = eval_config(topo, q, seed);
    const VecX g = elastic_gradient(topo, st, seed, nat, kMat);
    const Real h = 1e-6;
    const Real scale = g.cwiseAbs().maxCoeff();
    for (int d = 0; d < q.size(); ++d) {
        VecX qp = q, qm = q;
        qp[d] += h;
        qm[d] -= h;
        const Real fd = (total_energy(topo, qp, seed, nat, kMat) -
                         total_energy(topo, qm, seed, nat, kMat)) /
                        (2 * h);
        CHECK(std::abs(g[d] - fd) < 1e-5 * scale);
    }
}

TEST_CASE("translations produce no force") {
    std::mt19937 rng(31);
    NetTopology topo = build_chain(9);
    const VecX q = wiggly_rod(topo, rng, 0.02);
    const VecX qn = wiggly_rod(topo, rng, 0.02);
    const FrameSeed seed = make_seed(topo, qn);
    const NaturalStrains nat = own_strains(topo, qn, seed);
    const ConfigState st = eval_config(topo, q, seed);
    const VecX g = elastic_gradient(topo, st, seed, nat, kMat);
    const Real scale = g.cwiseAbs().maxCoeff();

    for (int axis = 0; axis < 3; ++axis) {
        Real along = 0;
        for (int n = 0; n < topo.node_count; ++n)
            along += g[topo.layout().pos(n, axis)];
        CHECK(std::abs(along) < 1e-9 * scale);
    }
    // rotating positions alone is not a symmetry here (the frame seed stays
    // put), so rotational invariance is checked as a finite motion with a
    // co-rotated seed in the invariance test above
    (void)scale;
}

TEST_CASE("Hessian matches finite differences of the gradient") {
    std::mt19937 rng(37);
    NetTopology topo = build_chain(8);
    const VecX q = wiggly_rod(topo, rng, 0.02);
    const VecX qn = wiggly_rod(topo, rng, 0.02);
    const FrameSeed seed = make_seed(topo, qn);
    const NaturalStrains nat = own_strains(topo, qn, seed);
    const ConfigState st = eval_config(topo, q, seed);

    std::vector<Triplet> trips;
    elastic_hessian_triplets(topo, st, seed, nat, kMat, trips);
    const int n = topo.layout().size();
    const Eigen::MatrixXd H = dense_from(trips, n);

    CHECK((H - H.transpose()).cwiseAbs().maxCoeff() < 1e-8 * H.cwiseAbs().maxCoeff());

    const Real h = 1e-6;
    Eigen::MatrixXd fd(n, n);
    for (int d = 0; d < n; ++d) {
        VecX qp = q, qm = q;
        qp[d] += h;
        qm[d] -= h;
        const ConfigState sp = eval_config(topo, qp, seed);
        const ConfigState sm = eval_config(topo, qm, seed);
        fd.col(d) = (elastic_gradient(topo, sp, seed, nat, kMat) -
                     elastic_gradient(topo, sm, seed, nat, kMat)) /
                    (2 * h);
    }
    CHECK((H - fd).cwiseAbs().maxCoeff() < 1e-4 * fd.cwiseAbs().maxCoeff());

    // threaded assembly is bit-identical
    std::vector<Triplet> trips4;
    elastic_hessian_triplets(topo, st, seed, nat, kMat, trips4, 4);
    CHECK((dense_from(trips4, n) - H).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Hessian annihilates translations") {
    std::mt19937 rng(41);
    NetTopology topo = build_chain(8);
    const VecX q = wiggly_rod(topo, rng, 0.02);
    const FrameSeed seed = make_seed(topo, q);
    const VecX qn = wiggly_rod(topo, rng, 0.02);
    const NaturalStrains nat = own_strains(topo, qn, seed);
    const ConfigState st = eval_config(topo, q, seed);
    std::vector<Triplet> trips;
    elastic_hessian_triplets(topo, st, seed, nat, kMat, trips);
    const int n = topo.layout().size();
    const Eigen::MatrixXd H = dense_from(trips, n);
    for (int axis = 0; axis < 3; ++axis) {
        VecX t = VecX::Zero(n);
        for (int nd = 0; nd < topo.node_count; ++nd)
            t[topo.layout().pos(nd, axis)] = 1.0;
        CHECK((H * t).cwiseAbs().maxCoeff() < 1e-9 * H.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("Gauss-Newton part equals the Hessian at a stress-free state") {
    std::mt19937 rng(43);
    NetTopology topo = build_chain(8);
    const VecX q = wiggly_rod(topo, rng, 0.02);
    const FrameSeed seed = make_seed(topo, q);
    const NaturalStrains nat = own_strains(topo, q, seed); // prefactors vanish
    const ConfigState st = eval_config(topo, q, seed);
    const int n = topo.layout().size();
    std::vector<Triplet> ht, gt;
    elastic_hessian_triplets(topo, st, seed, nat, kMat, ht);
    elastic_gauss_newton_triplets(topo, st, seed, nat, kMat, gt);
    const Eigen::MatrixXd H = dense_from(ht, n), G = dense_from(gt, n);
    CHECK((H - G).cwiseAbs().maxCoeff() < 1e-5 * G.cwiseAbs().maxCoeff());
}

// ---------------------------------------------------------------------------
// Inverse model
// ---------------------------------------------------------------------------

TEST_CASE("inverse force agrees with the duality definition") {
    // The inverse residual must equal the forward gradient evaluated at the
    // frozen DC while the natural strains are read off the candidate state.
    std::mt19937 rng(47);
    NetTopology topo = build_chain(10);
    const VecX dc_q = wiggly_rod(topo, rng, 0.03);
    const VecX cand_q = wiggly_rod(topo, rng, 0.03);
    const InverseModel model = freeze_dc(topo, dc_q, kMat);
    const ConfigState cand = eval_config(topo, cand_q, model.seed);
    const VecX gi = inverse_gradient(model, cand);

    const NaturalStrains nat = own_strains(topo, cand_q, model.seed);
    const ConfigState dc = eval_config(topo, dc_q, model.seed);
    const VecX gdual = elastic_gradient(topo, dc, model.seed, nat, kMat);
    CHECK((gi - gdual).cwiseAbs().maxCoeff() < 1e-10 * gdual.cwiseAbs().maxCoeff());
}

TEST_CASE("inverse Jacobian matches finite differences of the inverse force") {
    std::mt19937 rng(53);
    for (int rep = 0; rep < 3; ++rep) {
        NetTopology topo = build_chain(8);
        const VecX dc_q = wiggly_rod(topo, rng, 0.03);
        const VecX cand_q = wiggly_rod(topo, rng, 0.03);
        const InverseModel model = freeze_dc(topo, dc_q, kMat);

        std::vector<Triplet> trips;
        inverse_jacobian_triplets(model, eval_config(topo, cand_q, model.seed), trips);
        const int n = topo.layout().size();
        const Eigen::MatrixXd J = dense_from(trips, n);

        const Real h = 1e-6;
        Eigen::MatrixXd fd(n, n);
        for (int d = 0; d < n; ++d) {
            VecX qp = cand_q, qm = cand_q;
            qp[d] += h;
            qm[d] -= h;
            fd.col(d) = (inverse_gradient(model, eval_config(topo, qp, model.seed)) -
                         inverse_gradient(model, eval_config(topo, qm, model.seed))) /
                        (2 * h);
        }
        CHECK((J - fd).cwiseAbs().maxCoeff() < 1e-4 * fd.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("inverse Jacobian on a net joint matches finite differences") {
    std::mt19937 rng(59);
    NetTopology topo = x_joint();
    const VecX dc_q = x_joint_positions(rng, 0.05);
    const VecX cand_q = x_joint_positions(rng, 0.05);
    const InverseModel model = freeze_dc(topo, dc_q, kMat);

    std::vector<Triplet> trips;
    inverse_jacobian_triplets(model, eval_config(topo, cand_q, model.seed), trips);
    const int n = topo.layout().size();
    const Eigen::MatrixXd J = dense_from(trips, n);

    const Real h = 1e-6;
    Eigen::MatrixXd fd(n, n);
    for (int d = 0; d < n; ++d) {
        VecX qp = cand_q, qm = cand_q;
        qp[d] += h;
        qm[d] -= h;
        fd.col(d) = (inverse_gradient(model, eval_config(topo, qp, model.seed)) -
                     inverse_gradient(model, eval_config(topo, qm, model.seed))) /
                    (2 * h);
    }
    CHECK((J - fd).cwiseAbs().maxCoeff() < 1e-4 * fd.cwiseAbs().maxCoeff());
}

TEST_CASE("inverse Jacobian is genuinely non-symmetric on a bent rod") {
    std::mt19937 rng(61);
    NetTopology topo = build_chain(8);
    const VecX dc_q = wiggly_rod(topo, rng, 0.05);
    const VecX cand_q = wiggly_rod(topo, rng, 0.05);
    const InverseModel model = freeze_dc(topo, dc_q, kMat);
    std::vector<Triplet> trips;
    inverse_jacobian_triplets(model, eval_config(topo, cand_q, model.seed), trips);
    const int n = topo.layout().size();
    const Eigen::MatrixXd J = dense_from(trips, n);
    CHECK((J - J.transpose()).cwiseAbs().maxCoeff() > 0.01 * J.cwiseAbs().maxCoeff());
}

TEST_CASE("inverse Jacobian is nonsingular at candidate = DC on a clamped chain") {
    std::mt19937 rng(67);
    NetTopology topo = build_chain(8);
    topo.clamped_nodes = {0, 1};
    topo.clamped_edges = {0};
    const VecX dc_q = wiggly_rod(topo, rng, 0.03);
    const InverseModel model = freeze_dc(topo, dc_q, kMat);
    std::vector<Triplet> trips;
    inverse_jacobian_triplets(model, eval_config(topo, dc_q, model.seed), trips);
    const int n = topo.layout().size();
    const Eigen::MatrixXd J = dense_from(trips, n);

    std::vector<int> free;
    std::vector<bool> fixed(n, false);
    for (int nd : topo.clamped_nodes)
        for (int a = 0; a < 3; ++a)
            fixed[topo.layout().pos(nd, a)] = true;
    for (int k : topo.clamped_edges)
        fixed[topo.layout().theta(k)] = true;
    for (int d = 0; d < n; ++d)
        if (!fixed[d])
            free.push_back(d);
    Eigen::MatrixXd Jf(free.size(), free.size());
    for (size_t r = 0; r < free.size(); ++r)
        for (size_t c = 0; c < free.size(); ++c)
            Jf(r, c) = J(free[r], free[c]);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(Jf);
    CHECK(svd.singularValues()(svd.singularValues().size() - 1) >
          1e-10 * svd.singularValues()(0));
}
