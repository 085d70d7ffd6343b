#pragma once

#include <string>
#include <vector>

#include "shapeinv/descent.hpp"
#include "shapeinv/fem.hpp"
#include "shapeinv/mesh.hpp"
#include "shapeinv/radial.hpp"
#include "shapeinv/stability.hpp"

namespace shapeinv {

void write_scalar_field(const ScalarField& u, const std::string& path);
ScalarField read_scalar_field(const std::string& path);

void write_vector_field(const VectorField& v, const std::string& path);
VectorField read_vector_field(const std::string& path);

void write_history(const std::vector<IterationRecord>& history, const std::string& path);

void write_trace(const BoundaryTrace& trace, const std::string& path);

void write_radial_trajectory(const std::vector<RadialState>& traj, const RadialConfig& cfg,
                             const std::string& path);

void write_spectrum(const std::vector<std::pair<int, double>>& spectrum,
                    const std::string& path);

void write_mode_trajectory(const std::vector<ModeSample>& traj, const std::string& path);

/// Hand-rolled SVG: each trace as a closed polyline, reference (if any)
/// drawn dashed underneath.
void write_trace_svg(const std::vector<BoundaryTrace>& traces,
                     const BoundaryTrace* reference, double extent,
                     const std::string& path);

} // namespace shapeinv
