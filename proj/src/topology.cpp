#include "invrod/topology.hpp"
#include "invrod/errors.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace invrod {

NetTopology build_chain(int node_count) {
    if (node_count < 2)
        throw TooFewNodes();
    NetTopology topo;
    topo.node_count = node_count;
    topo.edges.reserve(node_count - 1);
    for (int i = 0; i + 1 < node_count; ++i)
        topo.edges.push_back({i, i + 1});
    topo.bends.reserve(node_count >= 2 ? node_count - 2 : 0);
    for (int i = 0; i + 2 < node_count; ++i)
        topo.bends.push_back({i, i + 1, i + 1, 1, 1});
    return topo;
}

int orientation_sign(const Edge &edge, int center_node) {
    if (edge.a == center_node)
        return 1;
    if (edge.b == center_node)
        return -1;
    throw NotIncident();
}

ElementMaps build_element_maps(const NetTopology &topo) {
    const DofLayout lay = topo.layout();
    ElementMaps maps;
    maps.edge_dofs.reserve(topo.edges.size());
    for (int k = 0; k < topo.edge_count(); ++k) {
        const Edge &e = topo.edges[k];
        std::array<int, 7> d{};
        for (int c = 0; c < 3; ++c) {
            d[c] = lay.pos(e.a, c);
            d[3 + c] = lay.pos(e.b, c);
        }
        d[6] = lay.theta(k);
        maps.edge_dofs.push_back(d);
    }
    maps.bend_dofs.reserve(topo.bends.size());
    for (const Bend &bd : topo.bends) {
        const int na = topo.bend_node_a(bd);
        const int nb = topo.bend_node_b(bd);
        std::array<int, 11> d{};
        for (int c = 0; c < 3; ++c) {
            d[c] = lay.pos(na, c);
            d[3 + c] = lay.pos(bd.center, c);
            d[6 + c] = lay.pos(nb, c);
        }
        d[9] = lay.theta(bd.edge_i);
        d[10] = lay.theta(bd.edge_j);
        maps.bend_dofs.push_back(d);
    }
    return maps;
}

void validate_topology(const NetTopology &topo) {
    std::set<std::pair<int, int>> seen;
    for (size_t k = 0; k < topo.edges.size(); ++k) {
        const Edge &e = topo.edges[k];
        if (e.a < 0 || e.b < 0 || e.a >= topo.node_count || e.b >= topo.node_count)
            throw InvalidBend("edge " + std::to_string(k) + " endpoint out of range");
        if (e.a == e.b)
            throw InvalidBend("edge " + std::to_string(k) + " is a loop");
        auto key = std::minmax(e.a, e.b);
        if (!seen.insert({key.first, key.second}).second)
            throw InvalidBend("duplicate edge " + std::to_string(e.a) + "-" + std::to_string(e.b));
    }
    for (const Bend &bd : topo.bends) {
        if (bd.edge_i < 0 || bd.edge_j < 0 || bd.edge_i >= topo.edge_count() ||
            bd.edge_j >= topo.edge_count() || bd.edge_i == bd.edge_j)
            throw InvalidBend("bend edges " + std::to_string(bd.edge_i) + "," +
                              std::to_string(bd.edge_j));
        const Edge &ei = topo.edges[bd.edge_i];
        const Edge &ej = topo.edges[bd.edge_j];
        const bool i_has = (ei.a == bd.center || ei.b == bd.center);
        const bool j_has = (ej.a == bd.center || ej.b == bd.center);
        if (!i_has || !j_has)
            throw InvalidBend("edges " + std::to_string(bd.edge_i) + "," +
                              std::to_string(bd.edge_j) + " do not share center " +
                              std::to_string(bd.center));
        // sign_i: +1 when edge_i already enters the center (head == center)
        const int want_i = (ei.b == bd.center) ? 1 : -1;
        const int want_j = (ej.a == bd.center) ? 1 : -1;
        if (bd.sign_i != want_i || bd.sign_j != want_j)
            throw InvalidBend("signs of bend at center " + std::to_string(bd.center) +
                              " inconsistent with edge directions");
    }
    for (int n : topo.clamped_nodes)
        if (n < 0 || n >= topo.node_count)
            throw InvalidBend("clamped node " + std::to_string(n) + " out of range");
    for (int k : topo.clamped_edges)
        if (k < 0 || k >= topo.edge_count())
            throw InvalidBend("clamped edge " + std::to_string(k) + " out of range");
}

NetFile load_net(std::istream &in) {
    NetFile net;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag))
            continue;
        auto need = [&](auto &...vals) {
            if (!((ls >> vals) && ...))
                throw ParseError(line_no, "bad record '" + tag + "'");
        };
        if (tag == "v") {
            Vec3 x;
            need(x.x(), x.y(), x.z());
            net.positions.push_back(x);
        } else if (tag == "e") {
            Edge e;
            need(e.a, e.b);
            net.topology.edges.push_back(e);
        } else if (tag == "b") {
            Bend bd;
            need(bd.edge_i, bd.edge_j, bd.center, bd.sign_i, bd.sign_j);
            net.topology.bends.push_back(bd);
        } else if (tag == "clamp_node") {
            int n;
            need(n);
            net.topology.clamped_nodes.push_back(n);
        } else if (tag == "clamp_edge") {
            int k;
            need(k);
            net.topology.clamped_edges.push_back(k);
        } else {
            throw ParseError(line_no, "unknown record '" + tag + "'");
        }
    }
    net.topology.node_count = static_cast<int>(net.positions.size());
    validate_topology(net.topology);
    return net;
}

NetFile load_net_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError(0, "cannot open " + path);
    return load_net(in);
}

void save_net(std::ostream &out, const NetFile &net) {
    out << std::setprecision(17);
    for (const Vec3 &x : net.positions)
        out << "v " << x.x() << " " << x.y() << " " << x.z() << "\n";
    for (const Edge &e : net.topology.edges)
        out << "e " << e.a << " " << e.b << "\n";
    for (const Bend &bd : net.topology.bends)
        out << "b " << bd.edge_i << " " << bd.edge_j << " " << bd.center << " " << bd.sign_i
            << " " << bd.sign_j << "\n";
    for (int n : net.topology.clamped_nodes)
        out << "clamp_node " << n << "\n";
    for (int k : net.topology.clamped_edges)
        out << "clamp_edge " << k << "\n";
}

} // namespace invrod
