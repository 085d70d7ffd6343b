#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const std::string cli = SHAPEINV_CLI_PATH;

struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) : dir(fs::path("cli_scratch") / name) {
        fs::create_directories(dir);
    }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    std::string config(const std::string& body) const {
        const fs::path p = dir / "run.cfg";
        std::ofstream(p) << body;
        return p.string();
    }
    std::string out() const { return (dir / "out").string(); }
};

int run(const std::string& args) {
    const std::string cmd = cli + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(cell);
        rows.push_back(row);
    }
    return rows;
}

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("missing subcommand and bad config both fail with the config code") {
    CHECK(run("") != 0);
    Scratch s("badcfg");
    const std::string cfg = s.config("this is not a key value line\n");
    CHECK(run("forward --config " + cfg + " --out " + s.out()) == 2);
}

TEST_CASE("a missing mesh path is reported with the config exit code") {
    Scratch s("missingmesh");
    const std::string cfg = s.config("mesh_path = /nonexistent/mesh.txt\n");
    CHECK(run("forward --config " + cfg + " --out " + s.out()) == 2);
}

TEST_CASE("forward run on zero data produces the zero cost") {
    Scratch s("forwardzero");
    const std::string cfg = s.config(
        "outer_radius = 1.0\nh = 0.1\ngamma_radius = 0.7\nf_const = 0.0\ng_const = 0.0\n");
    CHECK(run("forward --config " + cfg + " --out " + s.out()) == 0);
    const auto u = read_csv(fs::path(s.out()) / "u_dirichlet.csv");
    REQUIRE(u.size() > 1);
    for (std::size_t i = 1; i < u.size(); ++i)
        CHECK(std::abs(std::stod(u[i][1])) <= 1e-10);
}

TEST_CASE("spectrum emits the expected table and handles an empty range") {
    Scratch s("spectrum");
    const std::string cfg = s.config(
        "r_sigma = 1.0\nf = 1.0\ng = 1.4426950408889634\nrho0 = 0.9\nk_min = 1\nk_max = 64\n");
    CHECK(run("spectrum --config " + cfg + " --out " + s.out()) == 0);
    const auto rows = read_csv(fs::path(s.out()) / "spectrum.csv");
    REQUIRE(rows.size() == 65);
    CHECK(rows[0][0] == "k");
    CHECK(std::stod(rows[2][1]) == doctest::Approx(-103.66).epsilon(0.05 / 103.66));
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][1]) < 0.0);

    const std::string empty_cfg = s.config(
        "r_sigma = 1.0\nf = 1.0\ng = 1.0\nrho0 = 0.9\nk_min = 5\nk_max = 4\n");
    CHECK(run("spectrum --config " + empty_cfg + " --out " + s.out()) == 0);
    CHECK(read_csv(fs::path(s.out()) / "spectrum.csv").size() == 1);
}

TEST_CASE("radial trajectory decreases monotonically in both dimensions") {
    for (const int dim : {2, 3}) {
        Scratch s("radial" + std::to_string(dim));
        const std::string cfg = s.config(
            "R = 1.0\nr_star = 0.5\nf = 1.0\ndimension = " + std::to_string(dim) +
            "\nr0 = 0.9\ndt = 1e-4\nT = 0.02\n");
        CHECK(run("radial --config " + cfg + " --out " + s.out()) == 0);
        const auto rows = read_csv(fs::path(s.out()) / "radial_trajectory.csv");
        REQUIRE(rows.size() > 3);
        for (std::size_t i = 2; i < rows.size(); ++i)
            CHECK(std::stod(rows[i][1]) < std::stod(rows[i - 1][1]));
    }
}

TEST_CASE("radial cross-check against the mesh-based run stays within five percent") {
    Scratch s("radialcmp");
    const std::string cfg = s.config(
        "R = 1.0\nr_star = 0.5\nf = 1.0\ndimension = 2\nr0 = 0.9\ndt = 1e-4\nT = 0.02\n"
        "compare_fem = true\nh = 0.025\nfem_iters = 20\nc_step = 0.45\n");
    CHECK(run("radial --config " + cfg + " --out " + s.out()) == 0);
    const auto rows = read_csv(fs::path(s.out()) / "radial_comparison.csv");
    REQUIRE(rows.size() == 21);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(std::stod(rows[i][4]) <= 0.05);
}

TEST_CASE("inversion emits a monotone history and an empty budget only a header") {
    Scratch s("invert");
    const std::string gen = s.config(
        "truth_shape = circle\ntruth_radius = 0.5\ntruth_segments = 256\n"
        "outer_radius = 1.0\nh = 0.05\nf_const = 1.0\nrefine_factor = 3\n");
    REQUIRE(run("generate-data --config " + gen + " --out " + s.out()) == 0);
    const std::string inv = s.config(
        "measurements_path = " + s.out() + "/measurements.csv\n"
        "outer_radius = 1.0\nh = 0.05\ninitial_radius = 0.9\n"
        "algorithm = domain_variation\nkernel = g_minus\nmax_iters = 20\nc_step = 0.05\n");
    CHECK(run("invert --config " + inv + " --out " + s.out()) == 0);
    const auto rows = read_csv(fs::path(s.out()) / "history.csv");
    REQUIRE(rows.size() == 21);
    for (std::size_t i = 2; i < rows.size(); ++i)
        CHECK(std::stod(rows[i][1]) < std::stod(rows[i - 1][1]));

    const std::string empty = s.config(
        "measurements_path = " + s.out() + "/measurements.csv\n"
        "outer_radius = 1.0\nh = 0.05\ninitial_radius = 0.9\nmax_iters = 0\n");
    CHECK(run("invert --config " + empty + " --out " + s.out()) == 0);
    CHECK(read_csv(fs::path(s.out()) / "history.csv").size() == 1);
}

TEST_CASE("kernel comparison runs both variants and tabulates them") {
    Scratch s("kernelcmp");
    const std::string gen = s.config(
        "truth_shape = kite\ntruth_scale = 0.35\ntruth_segments = 256\n"
        "outer_radius = 1.0\nh = 0.08\nf_const = 1.0\nrefine_factor = 2\n");
    REQUIRE(run("generate-data --config " + gen + " --out " + s.out()) == 0);
    const std::string inv = s.config(
        "measurements_path = " + s.out() + "/measurements.csv\n"
        "truth_shape = kite\ntruth_scale = 0.35\n"
        "outer_radius = 1.0\nh = 0.08\ninitial_radius = 0.9\n"
        "algorithm = domain_variation\nmax_iters = 10\nc_step = 0.3\n"
        "compare_kernels = true\n");
    CHECK(run("invert --config " + inv + " --out " + s.out()) == 0);
    const auto rows = read_csv(fs::path(s.out()) / "kernel_comparison.csv");
    REQUIRE(rows.size() >= 2);
    CHECK(rows[0][0] == "iter");
    CHECK(fs::exists(fs::path(s.out()) / "history_g_minus.csv"));
    CHECK(fs::exists(fs::path(s.out()) / "history_g_full.csv"));
}

TEST_CASE("identical configurations produce byte-identical outputs") {
    Scratch s("determinism");
    const std::string cfg = s.config(
        "truth_shape = circle\ntruth_radius = 0.5\ntruth_segments = 128\n"
        "outer_radius = 1.0\nh = 0.08\nf_const = 1.0\nrefine_factor = 2\n"
        "measurements_name = m.csv\n");
    REQUIRE(run("generate-data --config " + cfg + " --out " + s.out() + "/a") == 0);
    REQUIRE(run("generate-data --config " + cfg + " --out " + s.out() + "/b") == 0);
    std::ifstream a(fs::path(s.out()) / "a" / "m.csv"), b(fs::path(s.out()) / "b" / "m.csv");
    const std::string ta{std::istreambuf_iterator<char>(a), {}};
    const std::string tb{std::istreambuf_iterator<char>(b), {}};
    CHECK(ta == tb);
    CHECK(!ta.empty());
}

TEST_SUITE_END();
