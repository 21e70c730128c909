#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const std::string kCli = STEKLOV_CLI_PATH;

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr interleaved
};

RunResult run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[512];
    while (std::fgets(buf, sizeof buf, pipe)) res.output += buf;
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

// value after "name ... = " on the matching line
double parse_value(const std::string& text, const std::string& name) {
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.rfind(name, 0) != 0) continue;
        const auto eq = line.find('=');
        REQUIRE(eq != std::string::npos);
        return std::stod(line.substr(eq + 1));
    }
    FAIL("missing line for ", name);
    return 0.0;
}

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "steklov-cli-test";
    fs::create_directories(dir);
    return dir;
}

std::string write_circle_domain(double hole_radius, double beta) {
    const fs::path path = scratch_dir() / "circle.json";
    std::ofstream out(path);
    out << "{ \"outline\": { \"type\": \"radial\", \"a0\": 1.0, \"cos\": [], \"sin\": [] },\n"
        << "  \"hole_radius\": " << hole_radius << ",\n"
        << "  \"beta\": { \"type\": \"constant\", \"value\": " << beta << " } }\n";
    return path.string();
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("oracle prints the 2-D closed forms") {
    const RunResult res = run("oracle -n 2 -r 0.5 -R 1 -b 1");
    CHECK(res.exit_code == 0);
    const double ln2 = std::log(2.0);
    CHECK(parse_value(res.output, "sigma_beta") == doctest::Approx(1.0 / (2.0 + ln2)).epsilon(1e-6));
    CHECK(parse_value(res.output, "sigma_dirichlet") == doctest::Approx(1.0 / ln2).epsilon(1e-6));
    CHECK(parse_value(res.output, "q") == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(res.output.find("note:") == std::string::npos);
}

TEST_CASE("oracle flags the corrected constants for n >= 3") {
    const RunResult res = run("oracle -n 3 -r 1 -R 2 -b 1");
    CHECK(res.exit_code == 0);
    CHECK(parse_value(res.output, "sigma_beta") == doctest::Approx(1.0 / 6.0).epsilon(1e-6));
    CHECK(res.output.find("note: uses corrected constants for n>=3") != std::string::npos);
}

TEST_CASE("oracle rejects invalid parameters with the usage exit code") {
    CHECK(run("oracle -n 1 -r 0.5 -R 1 -b 1").exit_code == 2);
    CHECK(run("oracle -n 2 -r 1 -R 0.5 -b 1").exit_code == 2);
    CHECK(run("oracle -n 2 -r 0.5 -R 1 -b 0").exit_code == 2);
    CHECK(run("oracle --no-such-flag").exit_code == 2);
}

TEST_CASE("bad domain files exit with the usage code") {
    const fs::path dir = scratch_dir();
    const fs::path bad = dir / "bad.json";
    std::ofstream(bad) << "{ \"outline\": { \"type\": \"nope\" } }";
    CHECK(run("solve --domain " + bad.string()).exit_code == 2);
    CHECK(run("solve --domain " + (dir / "missing.json").string()).exit_code == 2);
}

TEST_CASE("solve reports all four spectral quantities with small residuals") {
    const std::string dom = write_circle_domain(0.5, 1.0);
    const fs::path out = scratch_dir() / "solve-out";
    const RunResult res =
        run("solve --domain " + dom + " --n-radial 12 --n-angular 96 -o " + out.string());
    CHECK(res.exit_code == 0);

    const double ln2 = std::log(2.0);
    CHECK(parse_value(res.output, "sigma_beta") ==
          doctest::Approx(1.0 / (2.0 + ln2)).epsilon(2e-3));
    CHECK(parse_value(res.output, "sigma_dirichlet") == doctest::Approx(1.0 / ln2).epsilon(2e-3));
    CHECK(parse_value(res.output, "mu1") > 0.0);
    CHECK(parse_value(res.output, "q_beta") == doctest::Approx(0.5).epsilon(1e-6));

    const auto json = nlohmann::json::parse(slurp(out / "solve.json"));
    CHECK(json["sigma_beta"] == doctest::Approx(parse_value(res.output, "sigma_beta")));
    const std::string csv = slurp(out / "solve.csv");
    CHECK(csv.rfind("quantity,value,residual,gap\n", 0) == 0);
}

TEST_CASE("a written mesh solves to exactly the directly-meshed values") {
    const std::string dom = write_circle_domain(0.5, 1.0);
    const fs::path dir = scratch_dir();
    const fs::path mesh_file = dir / "mesh.txt";
    const RunResult meshed = run("mesh --domain " + dom +
                                 " --n-radial 10 --n-angular 80 -o " + mesh_file.string());
    CHECK(meshed.exit_code == 0);
    CHECK(meshed.output.find("vertices") != std::string::npos);

    const fs::path out_a = dir / "direct";
    const fs::path out_b = dir / "frommesh";
    CHECK(run("solve --domain " + dom + " --n-radial 10 --n-angular 80 -o " + out_a.string())
              .exit_code == 0);
    CHECK(run("solve --domain " + dom + " --mesh " + mesh_file.string() + " -o " +
              out_b.string())
              .exit_code == 0);
    CHECK(slurp(out_a / "solve.csv") == slurp(out_b / "solve.csv"));
}

TEST_CASE("verify runs the default suite clean and writes reports") {
    const fs::path out = scratch_dir() / "verify-out";
    const RunResult res = run("verify --suite default -o " + out.string());
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("FAIL") == std::string::npos);
    CHECK(res.output.find(" 0 failed") != std::string::npos);

    const std::string csv = slurp(out / "report.csv");
    CHECK(csv.rfind("check,domain,beta,h,lhs,rhs,margin,tol,verdict\n", 0) == 0);
    CHECK(csv.find(",fail\n") == std::string::npos);
    const auto json = nlohmann::json::parse(slurp(out / "report.json"));
    CHECK(json["failed"] == 0);
    CHECK(json["total"] > 0);

    CHECK(run("verify --suite bogus").exit_code == 2);
}

TEST_CASE("beta sweep produces a monotone CSV and a plot") {
    const std::string dom = write_circle_domain(0.5, 1.0);
    const fs::path out = scratch_dir() / "sweep-out";
    const RunResult res = run("sweep --domain " + dom +
                              " --n-radial 8 --n-angular 64 --beta 0.01:100:6 -o " +
                              out.string());
    CHECK(res.exit_code == 0);

    std::istringstream ss(res.output);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "beta,sigma");
    double prev = -1.0;
    int rows = 0;
    while (std::getline(ss, line) && line.find(',') != std::string::npos) {
        const double sigma = std::stod(line.substr(line.find(',') + 1));
        CHECK(sigma >= prev);
        prev = sigma;
        ++rows;
    }
    CHECK(rows == 6);
    CHECK(slurp(out / "sweep.svg").find("<svg") == 0);

    CHECK(run("sweep --domain " + dom).exit_code == 2);
    CHECK(run("sweep --domain " + dom + " --beta 1:2:3 --radius 0.5,0.25").exit_code == 2);
}

TEST_CASE("convergence study reports second-order accuracy") {
    const std::string dom = write_circle_domain(0.5, 1.0);
    const fs::path out = scratch_dir() / "conv-out";
    const RunResult res = run("convergence --domain " + dom +
                              " --n-radial 8 --n-angular 64 --levels 2 -o " + out.string());
    CHECK(res.exit_code == 0);

    const auto pos = res.output.find("fitted order: sigma ");
    REQUIRE(pos != std::string::npos);
    const double order = std::stod(res.output.substr(pos + 20));
    CHECK(order >= 1.5);
    CHECK(slurp(out / "convergence.csv").rfind("h,", 0) == 0);
}
