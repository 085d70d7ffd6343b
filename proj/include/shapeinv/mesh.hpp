#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "shapeinv/vec2.hpp"

namespace shapeinv {

enum class BoundaryMarker { Sigma, Gamma };

struct BoundaryEdge {
    int a = -1;
    int b = -1;
    BoundaryMarker marker = BoundaryMarker::Sigma;
};

/// Triangulated annulus bounded by the fixed outer loop Sigma and the free
/// inner loop Gamma. Triangles are counter-clockwise (positive signed area).
struct Mesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::vector<BoundaryEdge> boundary_edges;

    int node_count() const { return static_cast<int>(nodes.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }
};

/// One closed boundary loop, ordered, with per-node unit normals and
/// arc-length lumped weights. Gamma normals point into the annulus (away
/// from the inclusion); Sigma normals point out of the disk.
struct BoundaryTrace {
    std::vector<int> node_ids;
    std::vector<Vec2> positions;
    std::vector<Vec2> normals;
    std::vector<double> weights;
    BoundaryMarker marker = BoundaryMarker::Gamma;

    int size() const { return static_cast<int>(node_ids.size()); }
};

double triangle_signed_area(const Vec2& a, const Vec2& b, const Vec2& c);

double min_signed_area(const Mesh& mesh);

/// Validates all Mesh invariants; throws MeshingError / TopologyError /
/// GeometryError on the first violation found.
void validate_mesh(const Mesh& mesh);

/// Structured annular mesh between inner_curve (becomes Gamma) and the
/// circle of radius outer_radius (becomes Sigma). The inner curve must be
/// a simple closed polyline, star-shaped with respect to the origin and
/// strictly inside the outer circle.
Mesh build_annulus_mesh(double outer_radius, const std::vector<Vec2>& inner_curve,
                        double h_target);

BoundaryTrace extract_boundary_trace(const Mesh& mesh, BoundaryMarker marker);

/// Moves nodes by dt * displacement, keeping connectivity. Throws
/// ReversedTriangleError (with the offending minimum signed area) if any
/// triangle would flip or degenerate; the mesh is left untouched in that case.
Mesh deform_mesh(const Mesh& mesh, const std::vector<Vec2>& displacement, double dt);

/// Symmetric point-to-segment Hausdorff distance between two closed polylines.
double hausdorff_distance(const BoundaryTrace& a, const BoundaryTrace& b);

/// Standalone trace (no mesh behind it) from a closed polyline, e.g. a
/// reference truth curve; node_ids are just 0..n-1.
BoundaryTrace trace_from_polyline(const std::vector<Vec2>& polyline, BoundaryMarker marker);

std::vector<Vec2> make_circle(double radius, int segments);

/// Kite-shaped closed curve (non-convex, star-shaped about the origin),
/// scaled to fit well inside the unit disk.
std::vector<Vec2> make_kite(int segments, double scale = 0.35);

void write_mesh(const Mesh& mesh, const std::string& path);
Mesh read_mesh(const std::string& path);

} // namespace shapeinv
