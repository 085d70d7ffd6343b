#include "shapeinv/io.hpp"

#include <fstream>
#include <sstream>

#include "shapeinv/errors.hpp"

namespace shapeinv {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open file for writing: " + path, 0);
    out.precision(17);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path, 0);
    return in;
}

void expect_header(std::ifstream& in, const std::string& header, long& line_no) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty file", 0);
    ++line_no;
    if (line != header) throw ParseError("expected header '" + header + "'", line_no);
}

} // namespace

void write_scalar_field(const ScalarField& u, const std::string& path) {
    auto out = open_out(path);
    out << "node_id,value\n";
    for (std::size_t i = 0; i < u.size(); ++i) out << i << "," << u[i] << "\n";
}

ScalarField read_scalar_field(const std::string& path) {
    auto in = open_in(path);
    long line_no = 0;
    expect_header(in, "node_id,value", line_no);
    ScalarField u;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        long id;
        char c;
        double v;
        if (!(ss >> id >> c >> v) || c != ',' ||
            id != static_cast<long>(u.values.size()))
            throw ParseError("malformed field row", line_no);
        u.values.push_back(v);
    }
    return u;
}

void write_vector_field(const VectorField& v, const std::string& path) {
    auto out = open_out(path);
    out << "node_id,vx,vy\n";
    for (std::size_t i = 0; i < v.size(); ++i)
        out << i << "," << v[i].x << "," << v[i].y << "\n";
}

VectorField read_vector_field(const std::string& path) {
    auto in = open_in(path);
    long line_no = 0;
    expect_header(in, "node_id,vx,vy", line_no);
    VectorField v;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        long id;
        char c1, c2;
        double x, y;
        if (!(ss >> id >> c1 >> x >> c2 >> y) || c1 != ',' || c2 != ',' ||
            id != static_cast<long>(v.values.size()))
            throw ParseError("malformed field row", line_no);
        v.values.push_back(Vec2{x, y});
    }
    return v;
}

void write_history(const std::vector<IterationRecord>& history, const std::string& path) {
    auto out = open_out(path);
    out << "iter,J,dt,hausdorff,min_area,a1_margin\n";
    for (const auto& r : history)
        out << r.iter << "," << r.J << "," << r.dt << "," << r.hausdorff << ","
            << r.min_area << "," << r.a1_margin << "\n";
}

void write_trace(const BoundaryTrace& trace, const std::string& path) {
    auto out = open_out(path);
    out << "node_id,x,y,nx,ny,weight\n";
    for (int i = 0; i < trace.size(); ++i)
        out << trace.node_ids[i] << "," << trace.positions[i].x << ","
            << trace.positions[i].y << "," << trace.normals[i].x << ","
            << trace.normals[i].y << "," << trace.weights[i] << "\n";
}

void write_radial_trajectory(const std::vector<RadialState>& traj, const RadialConfig& cfg,
                             const std::string& path) {
    auto out = open_out(path);
    out << "t,r,vn\n";
    for (const auto& s : traj) out << s.t << "," << s.r << "," << vn(s.r, cfg) << "\n";
}

void write_spectrum(const std::vector<std::pair<int, double>>& spectrum,
                    const std::string& path) {
    auto out = open_out(path);
    out << "k,lambda\n";
    for (const auto& [k, lambda] : spectrum) out << k << "," << lambda << "\n";
}

void write_mode_trajectory(const std::vector<ModeSample>& traj, const std::string& path) {
    auto out = open_out(path);
    out << "t,rho0,amplitude\n";
    for (const auto& s : traj)
        out << s.t << "," << s.rho0 << "," << s.amplitude << "\n";
}

void write_trace_svg(const std::vector<BoundaryTrace>& traces,
                     const BoundaryTrace* reference, double extent,
                     const std::string& path) {
    auto out = open_out(path);
    const int size = 800;
    const double scale = size / (2.0 * extent);
    auto px = [&](const Vec2& p) {
        return std::pair<double, double>{(p.x + extent) * scale, (extent - p.y) * scale};
    };
    auto polyline = [&](const BoundaryTrace& tr, const char* style) {
        out << "  <polygon points=\"";
        for (const Vec2& p : tr.positions) {
            const auto [x, y] = px(p);
            out << x << "," << y << " ";
        }
        out << "\" style=\"" << style << "\"/>\n";
    };
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\""
        << size << "\">\n";
    if (reference)
        polyline(*reference, "fill:none;stroke:#888;stroke-width:2;stroke-dasharray:6 4");
    for (std::size_t i = 0; i < traces.size(); ++i) {
        std::ostringstream style;
        style << "fill:none;stroke:hsl(" << (traces.size() > 1 ? 240.0 * i / (traces.size() - 1)
                                                               : 0.0)
              << ",80%,45%);stroke-width:1.5";
        polyline(traces[i], style.str().c_str());
    }
    out << "</svg>\n";
}

} // namespace shapeinv
