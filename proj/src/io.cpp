#include "invrod/io.hpp"
#include "invrod/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace invrod {

void write_obj(std::ostream &out, const NetTopology &topo, const VecX &q) {
    out << std::setprecision(17);
    for (int n = 0; n < topo.node_count; ++n) {
        const Vec3 x = node_pos(q, n);
        out << "v " << x[0] << ' ' << x[1] << ' ' << x[2] << '\n';
    }
    for (const Edge &e : topo.edges)
        out << "l " << e.a + 1 << ' ' << e.b + 1 << '\n';
}

void write_obj_file(const std::string &path, const NetTopology &topo, const VecX &q) {
    std::ofstream f(path);
    if (!f)
        throw SimError("cannot open " + path);
    write_obj(f, topo, q);
}

std::string frame_filename(int step) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%06d.obj", step);
    return buf;
}

ObjData read_obj(std::istream &in) {
    ObjData data;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag) || tag[0] == '#')
            continue;
        if (tag == "v") {
            Vec3 x;
            if (!(ss >> x[0] >> x[1] >> x[2]))
                throw ParseError(line_no, "bad vertex record");
            data.vertices.push_back(x);
        } else if (tag == "l") {
            std::vector<int> chain;
            int idx;
            while (ss >> idx)
                chain.push_back(idx - 1);
            if (chain.size() < 2)
                throw ParseError(line_no, "polyline needs at least 2 indices");
            for (size_t i = 0; i + 1 < chain.size(); ++i)
                data.segments.emplace_back(chain[i], chain[i + 1]);
        }
    }
    return data;
}

ObjData read_obj_file(const std::string &path) {
    std::ifstream f(path);
    if (!f)
        throw SimError("cannot open " + path);
    return read_obj(f);
}

void write_energies_csv(std::ostream &out, const SolveReport &report) {
    out << std::setprecision(17);
    out << "step,Es,Eb,Et,total,residual,ms\n";
    for (const StepStats &s : report.steps)
        out << s.step << ',' << s.Es << ',' << s.Eb << ',' << s.Et << ','
            << s.Es + s.Eb + s.Et << ',' << s.residual << ',' << s.ms << '\n';
}

void write_energies_csv_file(const std::string &path, const SolveReport &report) {
    std::ofstream f(path);
    if (!f)
        throw SimError("cannot open " + path);
    write_energies_csv(f, report);
}

void write_roundtrip_csv(std::ostream &out, const std::vector<Real> &per_node_error,
                         Real rms) {
    out << std::setprecision(17);
    out << "node,error\n";
    for (size_t n = 0; n < per_node_error.size(); ++n)
        out << n << ',' << per_node_error[n] << '\n';
    out << "rms," << rms << '\n';
}

void write_bench_csv(std::ostream &out, const std::vector<BenchRow> &rows) {
    out << std::setprecision(17);
    out << "case,vertices,edges,bends,forward_total_s,forward_ms_per_step,"
           "inverse_total_s,inverse_ms_per_step\n";
    for (const BenchRow &r : rows)
        out << r.name << ',' << r.vertices << ',' << r.edges << ',' << r.bends << ','
            << r.forward_total_s << ',' << r.forward_ms_per_step << ','
            << r.inverse_total_s << ',' << r.inverse_ms_per_step << '\n';
}

void write_oracle_csv(std::ostream &out, const std::vector<Real> &s,
                      const std::vector<Real> &theta_ref,
                      const std::vector<Real> &theta_sim) {
    out << std::setprecision(17);
    out << "s,theta_oracle,theta_sim\n";
    for (size_t i = 0; i < s.size(); ++i)
        out << s[i] << ',' << theta_ref[i] << ',' << theta_sim[i] << '\n';
}

RunConfig config_from_json(const std::string &text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    const int schema = j.value("schema", 1);
    if (schema != 1)
        throw SimError("unsupported config schema " + std::to_string(schema));
    RunConfig cfg;
    cfg.scenario = j.value("scenario", cfg.scenario);
    cfg.out_dir = j.value("out", cfg.out_dir);
    cfg.steps = j.value("steps", cfg.steps);
    cfg.dt = j.value("dt", cfg.dt);
    cfg.export_every = j.value("export_every", cfg.export_every);
    cfg.nodes = j.value("nodes", cfg.nodes);
    cfg.gamma = j.value("gamma", cfg.gamma);
    cfg.damping = j.value("damping", cfg.damping);
    if (cfg.export_every < 1)
        throw SimError("export_every must be >= 1");
    return cfg;
}

RunConfig load_config_file(const std::string &path) {
    std::ifstream f(path);
    if (!f)
        throw SimError("cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return config_from_json(ss.str());
}

} // namespace invrod
