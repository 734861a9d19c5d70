#pragma once

#include "invrod/solver.hpp"
#include "invrod/topology.hpp"
#include "invrod/types.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace invrod {

// OBJ polyline snapshot: one `v x y z` per node, one `l a b` per edge
// (1-based indices).
void write_obj(std::ostream &out, const NetTopology &topo, const VecX &q);
void write_obj_file(const std::string &path, const NetTopology &topo, const VecX &q);

std::string frame_filename(int step); // frame_%06d.obj

struct ObjData {
    std::vector<Vec3> vertices;
    std::vector<std::pair<int, int>> segments; // 0-based
};

ObjData read_obj(std::istream &in);
ObjData read_obj_file(const std::string &path);

// energies.csv: step, Es, Eb, Et, total, residual, ms
void write_energies_csv(std::ostream &out, const SolveReport &report);
void write_energies_csv_file(const std::string &path, const SolveReport &report);

// roundtrip.csv: per-node recovery error plus a trailing RMS row.
void write_roundtrip_csv(std::ostream &out, const std::vector<Real> &per_node_error,
                         Real rms);

struct BenchRow {
    std::string name;
    int vertices = 0, edges = 0, bends = 0;
    double forward_total_s = 0, forward_ms_per_step = 0;
    double inverse_total_s = 0, inverse_ms_per_step = 0;
};

void write_bench_csv(std::ostream &out, const std::vector<BenchRow> &rows);

// oracle comparison: s, closed-form angle, simulated angle
void write_oracle_csv(std::ostream &out, const std::vector<Real> &s,
                      const std::vector<Real> &theta_ref,
                      const std::vector<Real> &theta_sim);

// JSON run configuration (schema version 1); CLI flags override file values.
struct RunConfig {
    std::string scenario;
    std::string out_dir = "out";
    int steps = 0;        // 0 -> solver default
    Real dt = 0;          // 0 -> solver default
    int export_every = 100;
    int nodes = 0;        // 0 -> scenario default
    Real gamma = 3.0;     // oracle mode
    Real damping = 0;     // 0 -> solver default
};

RunConfig config_from_json(const std::string &text);
RunConfig load_config_file(const std::string &path);

} // namespace invrod
