#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "invrod/errors.hpp"
#include "invrod/topology.hpp"

#include <sstream>

using namespace invrod;

TEST_CASE("chain layout: Nv nodes, Nv-1 edges, Nv-2 bends") {
    const NetTopology topo = build_chain(5);
    CHECK(topo.node_count == 5);
    CHECK(topo.edge_count() == 4);
    CHECK(topo.bend_count() == 3);
    for (int k = 0; k < topo.edge_count(); ++k) {
        CHECK(topo.edges[k].a == k);
        CHECK(topo.edges[k].b == k + 1);
    }
    for (int b = 0; b < topo.bend_count(); ++b) {
        CHECK(topo.bends[b].edge_i == b);
        CHECK(topo.bends[b].edge_j == b + 1);
        CHECK(topo.bends[b].center == b + 1);
        CHECK(topo.bends[b].sign_i == 1);
        CHECK(topo.bends[b].sign_j == 1);
    }
    CHECK_NOTHROW(validate_topology(topo));
    CHECK(topo.layout().size() == 3 * 5 + 4);
}

TEST_CASE("chains need at least two nodes") {
    CHECK_THROWS_AS(build_chain(1), TooFewNodes);
    CHECK_THROWS_AS(build_chain(0), TooFewNodes);
    CHECK_NOTHROW(build_chain(2));
}

TEST_CASE("orientation sign follows the stored edge direction") {
    const Edge e{3, 7};
    CHECK(orientation_sign(e, 3) == 1);
    CHECK(orientation_sign(e, 7) == -1);
    CHECK_THROWS_AS(orientation_sign(e, 5), NotIncident);
}

TEST_CASE("bend outer nodes follow the traversal through the center") {
    NetTopology topo;
    topo.node_count = 3;
    // center node 1; edge 0 stored toward it, edge 1 stored away from it
    topo.edges = {{0, 1}, {1, 2}};
    topo.bends = {{0, 1, 1, 1, 1}};
    CHECK(topo.bend_node_a(topo.bends[0]) == 0);
    CHECK(topo.bend_node_b(topo.bends[0]) == 2);
    CHECK_NOTHROW(validate_topology(topo));

    // reverse the second edge: traversal unchanged, sign flips
    topo.edges[1] = {2, 1};
    topo.bends[0].sign_j = -1;
    CHECK(topo.bend_node_a(topo.bends[0]) == 0);
    CHECK(topo.bend_node_b(topo.bends[0]) == 2);
    CHECK_NOTHROW(validate_topology(topo));
}

TEST_CASE("validate_topology rejects malformed nets") {
    NetTopology topo = build_chain(4);

    SUBCASE("edge endpoint out of range") {
        topo.edges[0].b = 9;
        CHECK_THROWS_AS(validate_topology(topo), InvalidBend);
    }
    SUBCASE("self loop") {
        topo.edges[1] = {2, 2};
        CHECK_THROWS_AS(validate_topology(topo), InvalidBend);
    }
    SUBCASE("duplicate edge, either direction") {
        topo.edges[2] = {1, 0};
        CHECK_THROWS_AS(validate_topology(topo), InvalidBend);
    }
    SUBCASE("bend whose edges do not share the center") {
        topo.bends[0].center = 3;
        CHECK_THROWS_AS(validate_topology(topo), InvalidBend);
    }
    SUBCASE("bend using one edge twice") {
        topo.bends[0].edge_j = topo.bends[0].edge_i;
        CHECK_THROWS_AS(validate_topology(topo), InvalidBend);
    }
    SUBCASE("orientation sign inconsistent with the stored direction") {
        topo.bends[1].sign_i = -1;
        CHECK_THROWS_AS(validate_topology(topo), InvalidBend);
    }
    SUBCASE("clamp indices out of range") {
        topo.clamped_nodes = {4};
        CHECK_THROWS_AS(validate_topology(topo), InvalidBend);
        topo.clamped_nodes = {};
        topo.clamped_edges = {-1};
        CHECK_THROWS_AS(validate_topology(topo), InvalidBend);
    }
}

TEST_CASE("element maps address the DOF layout") {
    const NetTopology topo = build_chain(4);
    const ElementMaps maps = build_element_maps(topo);
    const DofLayout lay = topo.layout();
    REQUIRE(maps.edge_dofs.size() == 3);
    REQUIRE(maps.bend_dofs.size() == 2);
    CHECK(maps.edge_dofs[1][0] == lay.pos(1, 0));
    CHECK(maps.edge_dofs[1][5] == lay.pos(2, 2));
    CHECK(maps.edge_dofs[1][6] == lay.theta(1));
    // bend 0: a=0, center=1, b=2, thetas of edges 0 and 1
    CHECK(maps.bend_dofs[0][0] == lay.pos(0, 0));
    CHECK(maps.bend_dofs[0][3] == lay.pos(1, 0));
    CHECK(maps.bend_dofs[0][6] == lay.pos(2, 0));
    CHECK(maps.bend_dofs[0][9] == lay.theta(0));
    CHECK(maps.bend_dofs[0][10] == lay.theta(1));
}

TEST_CASE("net file parsing") {
    const char *text = "# tiny chain with a branch clamp\n"
                       "v 0 0 0\n"
                       "v 1 0 0\n"
                       "v 1 1 0   # head node\n"
                       "e 0 1\n"
                       "e 1 2\n"
                       "b 0 1 1 1 1\n"
                       "clamp_node 0\n"
                       "clamp_edge 0\n";
    std::istringstream in(text);
    const NetFile net = load_net(in);
    CHECK(net.topology.node_count == 3);
    CHECK(net.topology.edge_count() == 2);
    CHECK(net.topology.bend_count() == 1);
    CHECK(net.positions[2].isApprox(Vec3(1, 1, 0)));
    CHECK(net.topology.clamped_nodes == std::vector<int>{0});
    CHECK(net.topology.clamped_edges == std::vector<int>{0});
}

TEST_CASE("net file parse errors carry the line number") {
    SUBCASE("unknown record") {
        std::istringstream in("v 0 0 0\nq 1 2\n");
        try {
            load_net(in);
            FAIL("expected ParseError");
        } catch (const ParseError &e) {
            CHECK(e.line_number == 2);
        }
    }
    SUBCASE("truncated record") {
        std::istringstream in("v 0 0\n");
        CHECK_THROWS_AS(load_net(in), ParseError);
    }
    SUBCASE("invalid topology is rejected at load time") {
        std::istringstream in("v 0 0 0\nv 1 0 0\ne 0 5\n");
        CHECK_THROWS_AS(load_net(in), InvalidBend);
    }
}

TEST_CASE("net save/load round trip") {
    NetFile net;
    net.positions = {Vec3(0, 0, 0), Vec3(1, 0, 0.25), Vec3(2, 0.5, 0), Vec3(1, -1, 0)};
    net.topology.node_count = 4;
    net.topology.edges = {{0, 1}, {1, 2}, {3, 1}};
    net.topology.bends = {{0, 1, 1, 1, 1}, {0, 2, 1, 1, -1}};
    net.topology.clamped_nodes = {0, 3};
    net.topology.clamped_edges = {0};
    CHECK_NOTHROW(validate_topology(net.topology));

    std::stringstream ss;
    save_net(ss, net);
    const NetFile back = load_net(ss);
    CHECK(back.topology.node_count == net.topology.node_count);
    REQUIRE(back.topology.edge_count() == net.topology.edge_count());
    REQUIRE(back.topology.bend_count() == net.topology.bend_count());
    for (int k = 0; k < net.topology.edge_count(); ++k) {
        CHECK(back.topology.edges[k].a == net.topology.edges[k].a);
        CHECK(back.topology.edges[k].b == net.topology.edges[k].b);
    }
    for (int b = 0; b < net.topology.bend_count(); ++b) {
        CHECK(back.topology.bends[b].sign_i == net.topology.bends[b].sign_i);
        CHECK(back.topology.bends[b].sign_j == net.topology.bends[b].sign_j);
    }
    for (int n = 0; n < net.topology.node_count; ++n)
        CHECK((back.positions[n] - net.positions[n]).norm() == doctest::Approx(0.0));
    CHECK(back.topology.clamped_nodes == net.topology.clamped_nodes);
    CHECK(back.topology.clamped_edges == net.topology.clamped_edges);
}

TEST_CASE("shipped fixtures load and validate") {
    for (const char *path : {"fixtures/ring.net", "fixtures/knot.net", "fixtures/fullerene.net"}) {
        const NetFile net = load_net_file(path);
        CHECK(net.topology.node_count > 0);
        CHECK(net.topology.edge_count() > 0);
        CHECK(!net.topology.clamped_nodes.empty());
    }
}
