// Command-line driver: forward solves, synthetic data generation,
// inversion runs, radial ODE studies, and the perturbation spectrum.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shapeinv/data.hpp"
#include "shapeinv/descent.hpp"
#include "shapeinv/errors.hpp"
#include "shapeinv/io.hpp"
#include "shapeinv/mesh.hpp"
#include "shapeinv/objective.hpp"
#include "shapeinv/radial.hpp"
#include "shapeinv/stability.hpp"

namespace fs = std::filesystem;
using namespace shapeinv;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitStalled = 4;

// Line-oriented `key = value` configuration with `#` comments.
class Config {
  public:
    static Config load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open config file: " + path, 0);
        Config cfg;
        std::string line;
        long line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            const auto strip = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                if (b == std::string::npos) return std::string{};
                const auto e = s.find_last_not_of(" \t\r");
                return s.substr(b, e - b + 1);
            };
            if (strip(line).empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ParseError("expected 'key = value'", line_no);
            const std::string key = strip(line.substr(0, eq));
            const std::string value = strip(line.substr(eq + 1));
            if (key.empty()) throw ParseError("empty key", line_no);
            cfg.values_[key] = value;
        }
        return cfg;
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    std::string require_string(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end())
            throw ParseError("missing required config key '" + key + "'", 0);
        return it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        return parse_double(key, it->second);
    }

    int get_int(const std::string& key, int fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        try {
            std::size_t pos = 0;
            const int v = std::stoi(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ParseError("config key '" + key + "' is not an integer", 0);
        }
    }

    bool get_bool(const std::string& key, bool fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        if (it->second == "true" || it->second == "1") return true;
        if (it->second == "false" || it->second == "0") return false;
        throw ParseError("config key '" + key + "' is not a boolean", 0);
    }

  private:
    static double parse_double(const std::string& key, const std::string& s) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ParseError("config key '" + key + "' is not a number", 0);
        }
    }

    std::map<std::string, std::string> values_;
};

std::vector<Vec2> truth_curve(const Config& cfg) {
    const std::string shape = cfg.get_string("truth_shape", "circle");
    const int segments = cfg.get_int("truth_segments", 256);
    if (shape == "circle") return make_circle(cfg.get_double("truth_radius", 0.5), segments);
    if (shape == "kite") return make_kite(segments, cfg.get_double("truth_scale", 0.35));
    throw ParseError("config key 'truth_shape' must be 'circle' or 'kite'", 0);
}

AlgorithmKind parse_algorithm(const Config& cfg) {
    const std::string a = cfg.get_string("algorithm", "domain_variation");
    if (a == "domain_variation") return AlgorithmKind::DomainVariation;
    if (a == "boundary_variation") return AlgorithmKind::BoundaryVariation;
    throw ParseError("config key 'algorithm' must be 'domain_variation' or "
                     "'boundary_variation'", 0);
}

KernelMode parse_kernel(const std::string& k) {
    if (k == "g_minus") return KernelMode::GMinus;
    if (k == "g_full") return KernelMode::FullG;
    if (k == "g_plus") return KernelMode::GPlus;
    throw ParseError("kernel must be 'g_minus', 'g_full' or 'g_plus'", 0);
}

DescentConfig descent_config(const Config& cfg) {
    DescentConfig d;
    d.algorithm = parse_algorithm(cfg);
    d.kernel = parse_kernel(cfg.get_string("kernel", "g_minus"));
    d.c_step = cfg.get_double("c_step", 0.5);
    d.max_iters = cfg.get_int("max_iters", 100);
    d.dt_min = cfg.get_double("dt_min", 1e-10);
    d.target_cost = cfg.get_double("target_cost", 0.0);
    d.backtrack_factor = cfg.get_double("backtrack_factor", 0.5);
    d.validate();
    return d;
}

Mesh inversion_mesh(const Config& cfg) {
    const double R = cfg.get_double("outer_radius", 1.0);
    const double h = cfg.get_double("h", 0.05);
    const double r0 = cfg.get_double("initial_radius", 0.9);
    const int segments = cfg.get_int("initial_segments", 256);
    return build_annulus_mesh(R, make_circle(r0, segments), h);
}

int cmd_forward(const Config& cfg, const fs::path& out_dir) {
    Mesh mesh;
    if (cfg.has("mesh_path")) {
        const std::string path = cfg.require_string("mesh_path");
        if (!fs::exists(path))
            throw ParseError("config key 'mesh_path' points to a missing file: " + path, 0);
        mesh = read_mesh(path);
        validate_mesh(mesh);
    } else {
        const double R = cfg.get_double("outer_radius", 1.0);
        const double h = cfg.get_double("h", 0.05);
        const double r = cfg.get_double("gamma_radius", 0.9);
        mesh = build_annulus_mesh(R, make_circle(r, cfg.get_int("gamma_segments", 256)), h);
    }
    const BoundaryTrace sigma = extract_boundary_trace(mesh, BoundaryMarker::Sigma);
    const BoundaryTrace gamma = extract_boundary_trace(mesh, BoundaryMarker::Gamma);

    const double f_const = cfg.get_double("f_const", 1.0);
    double g_const;
    if (cfg.has("g_const")) {
        g_const = cfg.get_double("g_const", 0.0);
    } else {
        // derive consistent data from a radial truth at r_star
        const double R = cfg.get_double("outer_radius", 1.0);
        const double r_star = cfg.get_double("r_star", 0.5);
        g_const = f_const == 0.0 ? 0.0 : f_const / (R * std::log(R / r_star));
    }
    const std::vector<double> f_sigma(sigma.size(), f_const);
    const std::vector<double> g_sigma(sigma.size(), g_const);

    const ScalarField uD = solve_state_dirichlet(mesh, sigma, f_sigma);
    const ScalarField uN = solve_state_mixed(mesh, sigma, g_sigma);
    const std::vector<double> dnD = recover_normal_derivative(mesh, uD, gamma);
    const std::vector<double> dnN = recover_normal_derivative(mesh, uN, gamma);
    const double j_dom = cost_domain(mesh, uD, uN);
    const double j_bnd = cost_boundary(mesh, uD, uN, sigma, f_sigma, g_sigma);
    const ConditionA1 a1 = check_condition_a1(dnD, dnN);

    write_scalar_field(uD, (out_dir / "u_dirichlet.csv").string());
    write_scalar_field(uN, (out_dir / "u_neumann.csv").string());
    {
        std::ofstream out(out_dir / "gamma_flux.csv");
        out.precision(17);
        out << "node_id,x,y,dnD,dnN\n";
        for (int i = 0; i < gamma.size(); ++i)
            out << gamma.node_ids[i] << "," << gamma.positions[i].x << ","
                << gamma.positions[i].y << "," << dnD[i] << "," << dnN[i] << "\n";
    }
    std::cout.precision(10);
    std::cout << "J_domain=" << j_dom << " J_boundary=" << j_bnd
              << " a1_margin=" << a1.margin << "\n";
    return 0;
}

int cmd_generate_data(const Config& cfg, const fs::path& out_dir) {
    const double f_const = cfg.get_double("f_const", 1.0);
    const MeasurementSet ms = generate_synthetic(
        truth_curve(cfg), [f_const](double) { return f_const; },
        cfg.get_double("outer_radius", 1.0), cfg.get_double("h", 0.05),
        cfg.get_int("refine_factor", 4));
    const std::string name = cfg.get_string("measurements_name", "measurements.csv");
    write_measurements(ms, (out_dir / name).string());
    std::cout << "wrote " << ms.samples.size() << " samples to " << (out_dir / name).string()
              << "\n";
    return 0;
}

int run_single_inversion(const Config& cfg, const DescentConfig& dcfg,
                         const fs::path& out_dir, const std::string& suffix,
                         int svg_every, InversionResult& result) {
    const std::string ms_path = cfg.require_string("measurements_path");
    if (!fs::exists(ms_path))
        throw ParseError("config key 'measurements_path' points to a missing file: " + ms_path,
                         0);
    const MeasurementSet ms = read_measurements(ms_path);
    const Mesh mesh0 = inversion_mesh(cfg);
    const SigmaData data = resample_to_mesh(ms, mesh0);

    std::optional<BoundaryTrace> reference;
    if (cfg.has("truth_shape"))
        reference = trace_from_polyline(truth_curve(cfg), BoundaryMarker::Gamma);

    std::vector<BoundaryTrace> snapshots;
    IterationObserver observer;
    if (svg_every > 0)
        observer = [&](const IterationRecord& rec, const InversionState& st) {
            if (rec.iter % svg_every == 0) snapshots.push_back(st.gamma);
        };

    result = run_inversion(dcfg, mesh0, data.f, data.g, reference, observer);
    write_history(result.history, (out_dir / ("history" + suffix + ".csv")).string());
    write_trace(result.final_gamma, (out_dir / ("final_gamma" + suffix + ".csv")).string());
    if (svg_every > 0) {
        snapshots.push_back(result.final_gamma);
        write_trace_svg(snapshots, reference ? &*reference : nullptr,
                        cfg.get_double("outer_radius", 1.0),
                        (out_dir / ("snapshots" + suffix + ".svg")).string());
    }
    return result.stalled ? kExitStalled : 0;
}

int cmd_invert(const Config& cfg, const fs::path& out_dir, int svg_every) {
    DescentConfig dcfg = descent_config(cfg);
    InversionResult result;
    if (!cfg.get_bool("compare_kernels", false)) {
        const int rc = run_single_inversion(cfg, dcfg, out_dir, "", svg_every, result);
        if (result.stalled)
            std::cerr << "stalled: " << result.stall_reason << "\n";
        std::cout << "iterations=" << result.history.size();
        if (!result.history.empty()) {
            std::cout.precision(10);
            std::cout << " final_J=" << result.history.back().J;
            if (result.history.back().hausdorff >= 0.0)
                std::cout << " final_hausdorff=" << result.history.back().hausdorff;
        }
        std::cout << "\n";
        return rc;
    }

    // side-by-side Hausdorff histories for the two kernels
    InversionResult res_minus, res_full;
    dcfg.kernel = KernelMode::GMinus;
    const int rc1 = run_single_inversion(cfg, dcfg, out_dir, "_g_minus", svg_every, res_minus);
    dcfg.kernel = KernelMode::FullG;
    const int rc2 = run_single_inversion(cfg, dcfg, out_dir, "_g_full", svg_every, res_full);
    {
        std::ofstream out(out_dir / "kernel_comparison.csv");
        out.precision(17);
        out << "iter,hausdorff_g_minus,hausdorff_g_full\n";
        const std::size_t rows = std::max(res_minus.history.size(), res_full.history.size());
        for (std::size_t i = 0; i < rows; ++i) {
            out << i << ",";
            if (i < res_minus.history.size()) out << res_minus.history[i].hausdorff;
            out << ",";
            if (i < res_full.history.size()) out << res_full.history[i].hausdorff;
            out << "\n";
        }
    }
    std::cout << "g_minus iterations=" << res_minus.history.size()
              << " g_full iterations=" << res_full.history.size() << "\n";
    return rc1 != 0 ? rc1 : rc2;
}

int cmd_radial(const Config& cfg, const fs::path& out_dir) {
    const RadialConfig rc = make_radial_config(
        cfg.get_double("R", 1.0), cfg.get_double("r_star", 0.5), cfg.get_double("f", 1.0),
        cfg.get_int("dimension", 2));
    const double r0 = cfg.get_double("r0", 0.9);
    const double dt = cfg.get_double("dt", 1e-4);
    const double T = cfg.get_double("T", 0.02);
    const auto traj = integrate_radius(rc, r0, dt, T);
    write_radial_trajectory(traj, rc, (out_dir / "radial_trajectory.csv").string());
    std::cout << "r(0)=" << r0 << " r(T)=" << traj.back().r << " steps=" << traj.size() - 1
              << "\n";

    if (!cfg.get_bool("compare_fem", false)) return 0;
    if (rc.dimension != 2)
        throw ParseError("compare_fem requires dimension = 2", 0);

    // FEM inversion on consistent constant data, then the ODE re-integrated
    // over the recorded dt sequence.
    const double h = cfg.get_double("h", 0.05);
    const Mesh mesh0 = build_annulus_mesh(rc.R, make_circle(r0, cfg.get_int("initial_segments", 256)), h);
    const BoundaryTrace sigma0 = extract_boundary_trace(mesh0, BoundaryMarker::Sigma);
    const std::vector<double> f_sigma(sigma0.size(), rc.f);
    const std::vector<double> g_sigma(sigma0.size(), rc.g());

    DescentConfig dcfg;
    dcfg.algorithm = AlgorithmKind::DomainVariation;
    dcfg.kernel = KernelMode::GMinus;
    dcfg.c_step = cfg.get_double("c_step", 0.5);
    dcfg.max_iters = cfg.get_int("fem_iters", 20);

    std::vector<double> fem_radius;
    const auto observer = [&](const IterationRecord&, const InversionState& st) {
        double mean = 0.0;
        for (const Vec2& p : st.gamma.positions) mean += p.norm();
        fem_radius.push_back(mean / st.gamma.size());
    };
    const InversionResult inv = run_inversion(dcfg, mesh0, f_sigma, g_sigma, std::nullopt,
                                              observer);

    std::ofstream out(out_dir / "radial_comparison.csv");
    out.precision(17);
    out << "iter,t,r_fem,r_ode,rel_gap\n";
    double t = 0.0, r_ode = r0, max_gap = 0.0;
    for (std::size_t i = 0; i < inv.history.size(); ++i) {
        const double step = inv.history[i].dt;
        r_ode = integrate_radius(rc, r_ode, step, step).back().r;
        t += step;
        const double gap = std::abs(fem_radius[i] - r_ode) / r_ode;
        max_gap = std::max(max_gap, gap);
        out << i << "," << t << "," << fem_radius[i] << "," << r_ode << "," << gap << "\n";
    }
    std::cout.precision(6);
    std::cout << "max_rel_gap=" << max_gap << "\n";
    return 0;
}

int cmd_spectrum(const Config& cfg, const fs::path& out_dir) {
    const StabilityConfig sc = make_stability_config(
        cfg.get_double("r_sigma", 1.0), cfg.get_double("f", 1.0),
        cfg.get_double("g", 1.0 / std::log(2.0)));
    const double rho0 = cfg.get_double("rho0", 0.9);
    const int k_min = cfg.get_int("k_min", 1);
    const int k_max = cfg.get_int("k_max", 64);
    std::vector<std::pair<int, double>> spectrum;
    for (int k = k_min; k <= k_max; ++k) spectrum.emplace_back(k, lambda_k(k, rho0, sc));
    write_spectrum(spectrum, (out_dir / "spectrum.csv").string());

    if (cfg.has("mode_k")) {
        ModeState mode;
        mode.k = cfg.get_int("mode_k", 2);
        mode.rho0 = rho0;
        mode.amplitude = cfg.get_double("amplitude", 1e-3);
        const auto traj = evolve_mode(mode, sc, cfg.get_double("dt", 1e-5),
                                      cfg.get_double("T", 0.01));
        write_mode_trajectory(traj, (out_dir / "mode_trajectory.csv").string());
    }
    std::cout << "wrote " << spectrum.size() << " spectrum rows\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Free-boundary reconstruction toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir_str = ".";
    int svg_every = 0;
    long seed = 0;  // reserved; the pipeline is deterministic without randomness
    app.add_option("--config", config_path, "path to key = value config file");
    app.add_option("--out", out_dir_str, "output directory");
    app.add_option("--seed", seed, "reserved");
    app.add_option("--svg-every", svg_every, "emit an SVG snapshot every N iterates");

    auto* forward = app.add_subcommand("forward", "solve the two states on a geometry");
    auto* generate = app.add_subcommand("generate-data", "synthetic Cauchy data on the truth");
    auto* invert = app.add_subcommand("invert", "run the shape descent loop");
    auto* radial = app.add_subcommand("radial", "closed-form radius dynamics");
    auto* spectrum = app.add_subcommand("spectrum", "perturbation growth rates");

    CLI11_PARSE(app, argc, argv);

    try {
        const Config cfg = config_path.empty() ? Config{} : Config::load(config_path);
        const fs::path out_dir{out_dir_str};
        fs::create_directories(out_dir);
        if (forward->parsed()) return cmd_forward(cfg, out_dir);
        if (generate->parsed()) return cmd_generate_data(cfg, out_dir);
        if (invert->parsed()) return cmd_invert(cfg, out_dir, svg_every);
        if (radial->parsed()) return cmd_radial(cfg, out_dir);
        if (spectrum->parsed()) return cmd_spectrum(cfg, out_dir);
        return kExitConfig;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const StalledError& e) {
        std::cerr << "stalled: " << e.what() << "\n";
        return kExitStalled;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}
