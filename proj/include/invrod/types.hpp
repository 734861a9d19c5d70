#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/SparseCore>
#include <cstdint>
#include <vector>

namespace invrod {

using Real = double;
using Vec3 = Eigen::Matrix<Real, 3, 1>;
using VecX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using Mat3 = Eigen::Matrix<Real, 3, 3>;
using SpMat = Eigen::SparseMatrix<Real>;
using Triplet = Eigen::Triplet<Real>;

// DOF layout: 3*Nv nodal coordinates first, then Ne twist angles.
struct DofLayout {
    int node_count = 0;
    int edge_count = 0;

    int size() const { return 3 * node_count + edge_count; }
    int pos(int node, int axis) const { return 3 * node + axis; }
    int theta(int edge) const { return 3 * node_count + edge; }
};

inline Vec3 node_pos(const VecX &q, int node) {
    return q.segment<3>(3 * node);
}

inline void set_node_pos(VecX &q, int node, const Vec3 &x) {
    q.segment<3>(3 * node) = x;
}

} // namespace invrod
