#include "shapeinv/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "shapeinv/errors.hpp"
#include "shapeinv/fem.hpp"

namespace shapeinv {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

double wrap_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    return t;
}

} // namespace

MeasurementSet generate_synthetic(const std::vector<Vec2>& true_gamma,
                                  const std::function<double(double)>& f_of_theta,
                                  double outer_radius, double h_inversion,
                                  int refine_factor) {
    if (refine_factor < 2) throw DomainError("refine_factor must be >= 2");
    const double h_fine = h_inversion / refine_factor;
    const Mesh mesh = build_annulus_mesh(outer_radius, true_gamma, h_fine);
    const BoundaryTrace sigma = extract_boundary_trace(mesh, BoundaryMarker::Sigma);

    std::vector<double> f_sigma(sigma.size());
    for (int i = 0; i < sigma.size(); ++i)
        f_sigma[i] = f_of_theta(wrap_angle(std::atan2(sigma.positions[i].y,
                                                      sigma.positions[i].x)));
    const ScalarField u = solve_state_dirichlet(mesh, sigma, f_sigma);
    const std::vector<double> g_sigma = recover_normal_derivative(mesh, u, sigma);

    MeasurementSet ms;
    ms.samples.reserve(sigma.size());
    for (int i = 0; i < sigma.size(); ++i) {
        const Vec2& p = sigma.positions[i];
        ms.samples.push_back({wrap_angle(std::atan2(p.y, p.x)), p, f_sigma[i], g_sigma[i]});
    }
    std::sort(ms.samples.begin(), ms.samples.end(),
              [](const MeasurementSample& a, const MeasurementSample& b) {
                  return a.theta < b.theta;
              });
    return ms;
}

SigmaData resample_to_mesh(const MeasurementSet& ms, const Mesh& mesh) {
    if (ms.samples.empty()) throw DomainError("empty measurement set");
    const BoundaryTrace sigma = extract_boundary_trace(mesh, BoundaryMarker::Sigma);
    const std::size_t n = ms.samples.size();

    SigmaData out;
    out.f.resize(sigma.size());
    out.g.resize(sigma.size());
    for (int i = 0; i < sigma.size(); ++i) {
        const double theta = wrap_angle(std::atan2(sigma.positions[i].y,
                                                   sigma.positions[i].x));
        // bracketing samples, periodic in theta
        const auto it = std::upper_bound(ms.samples.begin(), ms.samples.end(), theta,
                                         [](double t, const MeasurementSample& s) {
                                             return t < s.theta;
                                         });
        const std::size_t hi = (it == ms.samples.end()) ? 0 : (it - ms.samples.begin());
        const std::size_t lo = (hi + n - 1) % n;
        const double t0 = ms.samples[lo].theta;
        double t1 = ms.samples[hi].theta;
        double t = theta;
        if (t1 <= t0) t1 += kTwoPi;          // wrapped interval
        if (t < t0) t += kTwoPi;
        const double span = t1 - t0;
        const double w = (span > 0.0) ? (t - t0) / span : 0.0;
        out.f[i] = (1.0 - w) * ms.samples[lo].f + w * ms.samples[hi].f;
        out.g[i] = (1.0 - w) * ms.samples[lo].g + w * ms.samples[hi].g;
    }
    return out;
}

void write_measurements(const MeasurementSet& ms, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open measurement file for writing: " + path, 0);
    out.precision(17);
    out << "theta,x,y,f,g\n";
    for (const auto& s : ms.samples)
        out << s.theta << "," << s.position.x << "," << s.position.y << ","
            << s.f << "," << s.g << "\n";
}

MeasurementSet read_measurements(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open measurement file: " + path, 0);
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty measurement file", 0);
    ++line_no;
    if (line != "theta,x,y,f,g") throw ParseError("bad measurement header", line_no);

    MeasurementSet ms;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        MeasurementSample s;
        char c1, c2, c3, c4;
        if (!(ss >> s.theta >> c1 >> s.position.x >> c2 >> s.position.y >> c3 >> s.f >> c4 >>
              s.g) ||
            c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',')
            throw ParseError("malformed measurement row", line_no);
        if (!ms.samples.empty() && s.theta <= ms.samples.back().theta)
            throw ParseError("theta values not strictly increasing", line_no);
        ms.samples.push_back(s);
    }
    if (ms.samples.empty()) throw ParseError("measurement file has no samples", line_no);
    return ms;
}

} // namespace shapeinv
