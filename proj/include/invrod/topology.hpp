#pragma once

#include "invrod/types.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace invrod {

struct Edge {
    int a = -1; // tail
    int b = -1; // head
};

// A bend couples two edges meeting at center. Traversal runs through the
// center: edge_i enters it, edge_j leaves it. sign_k = +1 when the stored
// edge direction agrees with that traversal, -1 when it is reversed.
struct Bend {
    int edge_i = -1;
    int edge_j = -1;
    int center = -1;
    int sign_i = 1;
    int sign_j = 1;
};

struct NetTopology {
    int node_count = 0;
    std::vector<Edge> edges;
    std::vector<Bend> bends;
    std::vector<int> clamped_nodes;
    std::vector<int> clamped_edges;

    DofLayout layout() const {
        return DofLayout{node_count, static_cast<int>(edges.size())};
    }
    int edge_count() const { return static_cast<int>(edges.size()); }
    int bend_count() const { return static_cast<int>(bends.size()); }

    // Outer nodes of a bend in traversal order (a -> center -> b).
    int bend_node_a(const Bend &bd) const {
        const Edge &e = edges[bd.edge_i];
        return e.a == bd.center ? e.b : e.a;
    }
    int bend_node_b(const Bend &bd) const {
        const Edge &e = edges[bd.edge_j];
        return e.a == bd.center ? e.b : e.a;
    }
};

// DOF index stencils for element assembly.
struct ElementMaps {
    // per edge: 6 position indices (tail xyz, head xyz) + 1 twist index
    std::vector<std::array<int, 7>> edge_dofs;
    // per bend: 9 position indices (a, center, b) + 2 twist indices
    std::vector<std::array<int, 11>> bend_dofs;
};

ElementMaps build_element_maps(const NetTopology &topo);

// Straight chain over the given node count: Nv-1 edges, Nv-2 bends, all +1.
NetTopology build_chain(int node_count);

// +1 when the edge is directed away from center_node, -1 when toward it.
int orientation_sign(const Edge &edge, int center_node);

// Line-oriented net description:
//   v x y z        node position
//   e a b          directed edge
//   b i j c si sj  bend (edge pair, center node, orientation signs)
//   clamp_node n
//   clamp_edge k
// '#' starts a comment; indices are 0-based.
struct NetFile {
    NetTopology topology;
    std::vector<Vec3> positions;
};

NetFile load_net(std::istream &in);
NetFile load_net_file(const std::string &path);
void save_net(std::ostream &out, const NetFile &net);

void validate_topology(const NetTopology &topo);

} // namespace invrod
