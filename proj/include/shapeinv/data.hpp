#pragma once

#include <functional>
#include <string>
#include <vector>

#include "shapeinv/mesh.hpp"

namespace shapeinv {

struct MeasurementSample {
    double theta = 0.0;  // arc parameter on Sigma, in [0, 2 pi)
    Vec2 position;
    double f = 0.0;
    double g = 0.0;
};

/// Cauchy data sampled on Sigma, sorted by strictly increasing theta.
struct MeasurementSet {
    std::vector<MeasurementSample> samples;
};

/// Synthetic Cauchy pair on the true geometry: solves the Dirichlet state
/// on a mesh refined by refine_factor relative to h_inversion and recovers
/// g on Sigma. Different resolution than the inversion mesh keeps the data
/// free of inverse crimes.
MeasurementSet generate_synthetic(const std::vector<Vec2>& true_gamma,
                                  const std::function<double(double)>& f_of_theta,
                                  double outer_radius, double h_inversion,
                                  int refine_factor);

/// Periodic linear interpolation of the samples onto the Sigma nodes of a
/// mesh; both vectors are aligned with extract_boundary_trace(mesh, Sigma).
struct SigmaData {
    std::vector<double> f;
    std::vector<double> g;
};

SigmaData resample_to_mesh(const MeasurementSet& ms, const Mesh& mesh);

void write_measurements(const MeasurementSet& ms, const std::string& path);
MeasurementSet read_measurements(const std::string& path);

} // namespace shapeinv
