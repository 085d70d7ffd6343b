#include "shapeinv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "shapeinv/errors.hpp"

namespace shapeinv {

namespace {

constexpr double kPi = 3.14159265358979323846;

double polyline_perimeter(const std::vector<Vec2>& poly) {
    double p = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        p += dist(poly[i], poly[(i + 1) % poly.size()]);
    return p;
}

bool segments_properly_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double d1 = (b - a).cross(c - a);
    const double d2 = (b - a).cross(d - a);
    const double d3 = (d - c).cross(a - c);
    const double d4 = (d - c).cross(b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

bool polyline_is_simple(const std::vector<Vec2>& poly) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // skip segments sharing a vertex
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_properly_intersect(poly[i], poly[(i + 1) % n],
                                            poly[j], poly[(j + 1) % n]))
                return false;
        }
    }
    return true;
}

bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& poly) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& pi = poly[i];
        const Vec2& pj = poly[j];
        if ((pi.y > p.y) != (pj.y > p.y)) {
            const double xint = pj.x + (p.y - pj.y) / (pi.y - pj.y) * (pi.x - pj.x);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

// Distance from the origin to the inner curve along direction (cos t, sin t).
double ray_radius(const std::vector<Vec2>& poly, double theta) {
    const Vec2 d{std::cos(theta), std::sin(theta)};
    const std::size_t n = poly.size();
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        const Vec2 e = q - p;
        const double denom = d.cross(e);
        if (std::abs(denom) < 1e-15) continue;
        const double t = p.cross(e) / denom;   // distance along the ray
        const double s = p.cross(d) / denom;   // parameter on the segment
        if (t > 0.0 && s >= 0.0 && s < 1.0) {
            if (best > 0.0 && std::abs(t - best) > 1e-9 * (1.0 + best))
                throw GeometryError("inner curve is not star-shaped about the origin");
            best = std::max(best, t);
        }
    }
    if (best <= 0.0)
        throw GeometryError("inner curve does not enclose the origin");
    return best;
}

double polygon_signed_area(const std::vector<Vec2>& poly) {
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        a += poly[i].cross(poly[(i + 1) % poly.size()]);
    return 0.5 * a;
}

std::vector<Vec2> loop_positions(const Mesh& mesh, const std::vector<int>& ids) {
    std::vector<Vec2> pos;
    pos.reserve(ids.size());
    for (int id : ids) pos.push_back(mesh.nodes[id]);
    return pos;
}

// Orders the edges of one marker into a closed loop of node ids.
std::vector<int> order_loop(const Mesh& mesh, BoundaryMarker marker) {
    std::map<int, std::vector<int>> adj;
    std::size_t edge_count = 0;
    for (const auto& e : mesh.boundary_edges) {
        if (e.marker != marker) continue;
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
        ++edge_count;
    }
    if (edge_count < 3)
        throw TopologyError("boundary marker has fewer than 3 edges");
    for (const auto& [node, nbrs] : adj)
        if (nbrs.size() != 2)
            throw TopologyError("boundary node " + std::to_string(node) +
                                " does not have exactly two incident edges");
    std::vector<int> loop;
    loop.reserve(adj.size());
    const int start = adj.begin()->first;
    int prev = -1, cur = start;
    do {
        loop.push_back(cur);
        const auto& nbrs = adj.at(cur);
        const int next = (nbrs[0] == prev) ? nbrs[1] : nbrs[0];
        prev = cur;
        cur = next;
        if (loop.size() > edge_count)
            throw TopologyError("boundary edges do not close into a single loop");
    } while (cur != start);
    if (loop.size() != edge_count)
        throw TopologyError("boundary marker forms more than one loop");
    return loop;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.norm2();
    if (len2 == 0.0) return dist(p, a);
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return dist(p, a + t * ab);
}

double directed_hausdorff(const BoundaryTrace& from, const BoundaryTrace& to) {
    double h = 0.0;
    const int m = to.size();
    for (const Vec2& p : from.positions) {
        double d = std::numeric_limits<double>::max();
        for (int j = 0; j < m; ++j)
            d = std::min(d, point_segment_distance(p, to.positions[j],
                                                   to.positions[(j + 1) % m]));
        h = std::max(h, d);
    }
    return h;
}

} // namespace

double triangle_signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * (b - a).cross(c - a);
}

double min_signed_area(const Mesh& mesh) {
    double m = std::numeric_limits<double>::max();
    for (const auto& t : mesh.triangles)
        m = std::min(m, triangle_signed_area(mesh.nodes[t[0]], mesh.nodes[t[1]],
                                             mesh.nodes[t[2]]));
    return m;
}

void validate_mesh(const Mesh& mesh) {
    if (mesh.nodes.empty() || mesh.triangles.empty())
        throw MeshingError("mesh is empty");
    for (const auto& t : mesh.triangles) {
        for (int v : t)
            if (v < 0 || v >= mesh.node_count())
                throw MeshingError("triangle references invalid node id");
        if (triangle_signed_area(mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]) <= 0.0)
            throw MeshingError("triangle with non-positive signed area");
    }

    // every boundary edge belongs to exactly one triangle
    std::map<std::pair<int, int>, int> tri_edges;
    for (const auto& t : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            int a = t[k], b = t[(k + 1) % 3];
            if (a > b) std::swap(a, b);
            ++tri_edges[{a, b}];
        }
    }
    for (const auto& e : mesh.boundary_edges) {
        int a = e.a, b = e.b;
        if (a > b) std::swap(a, b);
        auto it = tri_edges.find({a, b});
        if (it == tri_edges.end() || it->second != 1)
            throw TopologyError("boundary edge does not belong to exactly one triangle");
    }

    const auto sigma_loop = order_loop(mesh, BoundaryMarker::Sigma);
    const auto gamma_loop = order_loop(mesh, BoundaryMarker::Gamma);
    const auto sigma_poly = loop_positions(mesh, sigma_loop);
    const auto gamma_poly = loop_positions(mesh, gamma_loop);
    if (!polyline_is_simple(sigma_poly) || !polyline_is_simple(gamma_poly))
        throw TopologyError("boundary loop is self-intersecting");
    for (const Vec2& p : gamma_poly)
        if (!point_in_polygon(p, sigma_poly))
            throw GeometryError("Gamma loop is not strictly inside the Sigma loop");
}

Mesh build_annulus_mesh(double outer_radius, const std::vector<Vec2>& inner_curve,
                        double h_target) {
    if (h_target <= 0.0) throw MeshingError("h_target must be positive");
    if (inner_curve.size() < 3) throw GeometryError("inner curve needs at least 3 points");
    for (const Vec2& p : inner_curve)
        if (p.norm() >= outer_radius)
            throw GeometryError("inner curve intersects or exits the outer circle");
    if (!polyline_is_simple(inner_curve))
        throw GeometryError("inner curve is self-intersecting");

    const double p_in = polyline_perimeter(inner_curve);
    const double p_out = 2.0 * kPi * outer_radius;
    // Equal node count per ring: size it by the geometric mean of the two
    // perimeters so both boundary spacings stay within [0.5, 2] h.
    const int n = std::max(16, static_cast<int>(std::lround(std::sqrt(p_in * p_out) / h_target)));

    std::vector<double> r_in(n);
    double mean_gap = 0.0;
    for (int i = 0; i < n; ++i) {
        const double theta = 2.0 * kPi * i / n;
        r_in[i] = ray_radius(inner_curve, theta);
        mean_gap += outer_radius - r_in[i];
    }
    mean_gap /= n;
    if (mean_gap <= 0.0) throw GeometryError("inner curve touches the outer circle");
    const int layers = std::max(3, static_cast<int>(std::lround(mean_gap / h_target)));

    Mesh mesh;
    mesh.nodes.reserve(static_cast<std::size_t>(n) * (layers + 1));
    for (int j = 0; j <= layers; ++j) {
        const double s = static_cast<double>(j) / layers;
        for (int i = 0; i < n; ++i) {
            const double theta = 2.0 * kPi * i / n;
            const double r = (1.0 - s) * r_in[i] + s * outer_radius;
            mesh.nodes.emplace_back(r * std::cos(theta), r * std::sin(theta));
        }
    }

    auto id = [n](int j, int i) { return j * n + ((i % n) + n) % n; };
    for (int j = 0; j < layers; ++j) {
        for (int i = 0; i < n; ++i) {
            const int a = id(j, i), b = id(j, i + 1);
            const int c = id(j + 1, i), d = id(j + 1, i + 1);
            mesh.triangles.push_back({a, c, d});
            mesh.triangles.push_back({a, d, b});
        }
    }
    for (int i = 0; i < n; ++i) {
        mesh.boundary_edges.push_back({id(0, i), id(0, i + 1), BoundaryMarker::Gamma});
        mesh.boundary_edges.push_back({id(layers, i), id(layers, i + 1), BoundaryMarker::Sigma});
    }

    validate_mesh(mesh);
    return mesh;
}

BoundaryTrace extract_boundary_trace(const Mesh& mesh, BoundaryMarker marker) {
    std::vector<int> loop = order_loop(mesh, marker);
    // orient counter-clockwise so that tangent.perp^-1 points away from the
    // enclosed region (into Omega for Gamma, out of the disk for Sigma)
    if (polygon_signed_area(loop_positions(mesh, loop)) < 0.0)
        std::reverse(loop.begin(), loop.end());

    BoundaryTrace tr;
    tr.marker = marker;
    tr.node_ids = loop;
    tr.positions = loop_positions(mesh, loop);
    const int m = tr.size();
    tr.normals.resize(m);
    tr.weights.resize(m);
    for (int i = 0; i < m; ++i) {
        const Vec2& prev = tr.positions[(i + m - 1) % m];
        const Vec2& cur = tr.positions[i];
        const Vec2& next = tr.positions[(i + 1) % m];
        const Vec2 t = ((cur - prev).normalized() + (next - cur).normalized()).normalized();
        tr.normals[i] = Vec2{t.y, -t.x};  // clockwise rotation of the tangent
        tr.weights[i] = 0.5 * (dist(prev, cur) + dist(cur, next));
    }
    return tr;
}

Mesh deform_mesh(const Mesh& mesh, const std::vector<Vec2>& displacement, double dt) {
    if (displacement.size() != mesh.nodes.size())
        throw MeshingError("displacement field size does not match node count");
    Mesh out = mesh;
    for (int i = 0; i < mesh.node_count(); ++i)
        out.nodes[i] = mesh.nodes[i] + dt * displacement[i];
    const double min_area = min_signed_area(out);
    if (min_area <= 0.0) throw ReversedTriangleError(min_area);
    return out;
}

double hausdorff_distance(const BoundaryTrace& a, const BoundaryTrace& b) {
    if (a.size() == 0 || b.size() == 0)
        throw TopologyError("hausdorff_distance on empty trace");
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

BoundaryTrace trace_from_polyline(const std::vector<Vec2>& polyline, BoundaryMarker marker) {
    if (polyline.size() < 3) throw TopologyError("polyline needs at least 3 points");
    std::vector<Vec2> poly = polyline;
    if (polygon_signed_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());
    BoundaryTrace tr;
    tr.marker = marker;
    const int m = static_cast<int>(poly.size());
    tr.positions = poly;
    tr.node_ids.resize(m);
    tr.normals.resize(m);
    tr.weights.resize(m);
    for (int i = 0; i < m; ++i) {
        tr.node_ids[i] = i;
        const Vec2& prev = poly[(i + m - 1) % m];
        const Vec2& cur = poly[i];
        const Vec2& next = poly[(i + 1) % m];
        const Vec2 t = ((cur - prev).normalized() + (next - cur).normalized()).normalized();
        tr.normals[i] = Vec2{t.y, -t.x};
        tr.weights[i] = 0.5 * (dist(prev, cur) + dist(cur, next));
    }
    return tr;
}

std::vector<Vec2> make_circle(double radius, int segments) {
    std::vector<Vec2> pts;
    pts.reserve(segments);
    for (int i = 0; i < segments; ++i) {
        const double t = 2.0 * kPi * i / segments;
        pts.emplace_back(radius * std::cos(t), radius * std::sin(t));
    }
    return pts;
}

std::vector<Vec2> make_kite(int segments, double scale) {
    std::vector<Vec2> pts;
    pts.reserve(segments);
    for (int i = 0; i < segments; ++i) {
        const double t = 2.0 * kPi * i / segments;
        pts.emplace_back(scale * (std::cos(t) + 0.65 * std::cos(2.0 * t) - 0.65),
                         scale * 1.5 * std::sin(t));
    }
    return pts;
}

void write_mesh(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open mesh file for writing: " + path, 0);
    out.precision(17);
    out << "mesh 2d\n";
    out << "nodes " << mesh.node_count() << "\n";
    for (int i = 0; i < mesh.node_count(); ++i)
        out << i << " " << mesh.nodes[i].x << " " << mesh.nodes[i].y << "\n";
    out << "triangles " << mesh.triangle_count() << "\n";
    for (int i = 0; i < mesh.triangle_count(); ++i)
        out << i << " " << mesh.triangles[i][0] << " " << mesh.triangles[i][1]
            << " " << mesh.triangles[i][2] << "\n";
    out << "edges " << mesh.boundary_edges.size() << "\n";
    for (std::size_t i = 0; i < mesh.boundary_edges.size(); ++i) {
        const auto& e = mesh.boundary_edges[i];
        out << i << " " << e.a << " " << e.b << " "
            << (e.marker == BoundaryMarker::Sigma ? "sigma" : "gamma") << "\n";
    }
}

Mesh read_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open mesh file: " + path, 0);
    long line_no = 0;
    auto next_line = [&](std::string& line) {
        if (!std::getline(in, line)) throw ParseError("unexpected end of mesh file", line_no);
        ++line_no;
    };
    std::string line;
    next_line(line);
    if (line != "mesh 2d") throw ParseError("bad mesh header", line_no);

    Mesh mesh;
    std::string kw;
    long count = 0;
    next_line(line);
    {
        std::istringstream ss(line);
        if (!(ss >> kw >> count) || kw != "nodes" || count < 0)
            throw ParseError("expected 'nodes N'", line_no);
    }
    mesh.nodes.resize(count);
    for (long i = 0; i < count; ++i) {
        next_line(line);
        std::istringstream ss(line);
        long id;
        double x, y;
        if (!(ss >> id >> x >> y) || id < 0 || id >= count)
            throw ParseError("bad node line", line_no);
        mesh.nodes[id] = Vec2{x, y};
    }
    next_line(line);
    {
        std::istringstream ss(line);
        if (!(ss >> kw >> count) || kw != "triangles" || count < 0)
            throw ParseError("expected 'triangles M'", line_no);
    }
    mesh.triangles.resize(count);
    for (long i = 0; i < count; ++i) {
        next_line(line);
        std::istringstream ss(line);
        long id;
        int a, b, c;
        if (!(ss >> id >> a >> b >> c) || id < 0 || id >= count)
            throw ParseError("bad triangle line", line_no);
        mesh.triangles[id] = {a, b, c};
    }
    next_line(line);
    {
        std::istringstream ss(line);
        if (!(ss >> kw >> count) || kw != "edges" || count < 0)
            throw ParseError("expected 'edges K'", line_no);
    }
    mesh.boundary_edges.resize(count);
    for (long i = 0; i < count; ++i) {
        next_line(line);
        std::istringstream ss(line);
        long id;
        int a, b;
        std::string marker;
        if (!(ss >> id >> a >> b >> marker) || id < 0 || id >= count ||
            (marker != "sigma" && marker != "gamma"))
            throw ParseError("bad edge line", line_no);
        mesh.boundary_edges[id] = {a, b, marker == "sigma" ? BoundaryMarker::Sigma
                                                           : BoundaryMarker::Gamma};
    }
    return mesh;
}

} // namespace shapeinv
