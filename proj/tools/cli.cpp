#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "steklov/assembly.hpp"
#include "steklov/geometry.hpp"
#include "steklov/mesh.hpp"
#include "steklov/shell.hpp"
#include "steklov/spectral.hpp"
#include "steklov/verify.hpp"

namespace {

using namespace steklov;

constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

// Minimal line plot: one or more series as polylines with axes and ticks.
std::string svg_plot(const std::vector<double>& xs,
                     const std::vector<std::vector<double>>& series,
                     const std::vector<std::string>& names, const std::string& xlabel,
                     const std::string& ylabel, bool logx, bool logy) {
    constexpr double W = 640, H = 440, ML = 70, MR = 20, MT = 20, MB = 50;
    const auto tx = [&](double x) { return logx ? std::log10(x) : x; };
    const auto ty = [&](double y) { return logy ? std::log10(y) : y; };
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (double x : xs) {
        x0 = std::min(x0, tx(x));
        x1 = std::max(x1, tx(x));
    }
    for (const auto& s : series)
        for (double y : s) {
            y0 = std::min(y0, ty(y));
            y1 = std::max(y1, ty(y));
        }
    if (x1 <= x0) x1 = x0 + 1;
    if (y1 <= y0) y1 = y0 + 1;
    const auto px = [&](double x) { return ML + (tx(x) - x0) / (x1 - x0) * (W - ML - MR); };
    const auto py = [&](double y) { return H - MB - (ty(y) - y0) / (y1 - y0) * (H - MT - MB); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR << "\" y2=\""
        << H - MB << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\"" << H - MB
        << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = x0 + (x1 - x0) * t / 4.0;
        const double fy = y0 + (y1 - y0) * t / 4.0;
        const double vx = logx ? std::pow(10.0, fx) : fx;
        const double vy = logy ? std::pow(10.0, fy) : fy;
        const double cx = ML + (W - ML - MR) * t / 4.0;
        const double cy = H - MB - (H - MT - MB) * t / 4.0;
        char lbl[32];
        std::snprintf(lbl, sizeof lbl, "%.3g", vx);
        svg << "<text x=\"" << cx << "\" y=\"" << H - MB + 18
            << "\" font-size=\"11\" text-anchor=\"middle\">" << lbl << "</text>\n";
        std::snprintf(lbl, sizeof lbl, "%.3g", vy);
        svg << "<text x=\"" << ML - 6 << "\" y=\"" << cy + 4
            << "\" font-size=\"11\" text-anchor=\"end\">" << lbl << "</text>\n";
        svg << "<line x1=\"" << cx << "\" y1=\"" << H - MB << "\" x2=\"" << cx << "\" y2=\""
            << H - MB + 4 << "\" stroke=\"black\"/>\n";
        svg << "<line x1=\"" << ML - 4 << "\" y1=\"" << cy << "\" x2=\"" << ML << "\" y2=\"" << cy
            << "\" stroke=\"black\"/>\n";
    }
    svg << "<text x=\"" << (ML + W - MR) / 2 << "\" y=\"" << H - 12
        << "\" font-size=\"12\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    svg << "<text x=\"16\" y=\"" << (MT + H - MB) / 2
        << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (MT + H - MB) / 2 << ")\">" << ylabel << "</text>\n";
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    for (std::size_t s = 0; s < series.size(); ++s) {
        svg << "<polyline fill=\"none\" stroke=\"" << colors[s % 4] << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            char pt[48];
            std::snprintf(pt, sizeof pt, "%.2f,%.2f ", px(xs[i]), py(series[s][i]));
            svg << pt;
        }
        svg << "\"/>\n";
        svg << "<text x=\"" << W - MR - 6 << "\" y=\"" << MT + 16 + 14 * s
            << "\" font-size=\"12\" text-anchor=\"end\" fill=\"" << colors[s % 4] << "\">"
            << names[s] << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

Mesh build_mesh(const AnnularDomain& domain, int n_radial, int n_angular, int refine,
                double h_target) {
    Mesh mesh;
    if (std::holds_alternative<Dumbbell>(domain.outline)) {
        const double eps = std::get<Dumbbell>(domain.outline).eps;
        const double h = h_target > 0.0 ? h_target : eps * eps * eps / 2.0;
        mesh = dumbbell_mesh(eps, domain.hole_radius, h);
    } else {
        mesh = polar_mesh(domain, n_radial, n_angular);
    }
    for (int i = 0; i < refine; ++i) mesh = uniform_refine(mesh, domain);
    return mesh;
}

int cmd_oracle(int n, double r, double R, double beta) {
    if (n < 2 || !(r > 0.0) || !(R > r) || !(beta > 0.0)) {
        std::fprintf(stderr, "oracle: need n >= 2, 0 < r < R, beta > 0\n");
        return kExitUsage;
    }
    const ShellSpec spec(n, r, R);
    const double s = sigma_beta_shell(spec, beta);
    const double sd = sigma_dirichlet_shell(spec);
    const double q = q_shell(spec);
    const auto [robin_res, steklov_res] = shell_bc_residuals(spec, beta);
    std::printf("shell n=%d r=%s R=%s beta=%s\n", n, fmt(r).c_str(), fmt(R).c_str(),
                fmt(beta).c_str());
    std::printf("sigma_beta      = %.7f\n", s);
    std::printf("sigma_dirichlet = %.7f\n", sd);
    std::printf("q               = %.7f\n", q);
    std::printf("bc_residuals    = %.3e %.3e\n", robin_res, steklov_res);
    std::printf("small-beta slope (P(B_r)/P(B_R)) = %.7f\n", std::pow(r / R, n - 1));
    if (n >= 3)
        std::printf("note: uses corrected constants for n>=3; the published closed form "
                    "has a typo (see README)\n");
    return 0;
}

struct DomainArgs {
    std::string domain_path;
    std::string mesh_path;
    int n_radial = 16;
    int n_angular = 128;
    int refine = 0;
    double h_target = 0.0;
};

void add_domain_flags(CLI::App* cmd, DomainArgs& args, bool mesh_input) {
    cmd->add_option("--domain", args.domain_path, "domain JSON file")->required();
    if (mesh_input) cmd->add_option("--mesh", args.mesh_path, "pre-built mesh file");
    cmd->add_option("--n-radial", args.n_radial, "radial subdivisions");
    cmd->add_option("--n-angular", args.n_angular, "angular subdivisions");
    cmd->add_option("--refine", args.refine, "uniform refinement levels");
    cmd->add_option("--h-target", args.h_target, "target edge length (dumbbell outlines)");
}

int cmd_mesh(const DomainArgs& args, const std::string& out_path) {
    const auto [domain, beta] = parse_domain_json(read_file(args.domain_path));
    (void)beta;
    const Mesh mesh = build_mesh(domain, args.n_radial, args.n_angular, args.refine,
                                 args.h_target);
    write_file(out_path, write_mesh(mesh));
    std::printf("mesh: %zu vertices, %zu triangles, %zu boundary edges, h=%s -> %s\n",
                mesh.vertices.size(), mesh.triangles.size(), mesh.boundary_edges.size(),
                fmt(mesh.max_edge_length()).c_str(), out_path.c_str());
    return 0;
}

int cmd_solve(const DomainArgs& args, const std::string& out_dir,
              const std::vector<std::string>& formats) {
    const auto [domain, beta] = parse_domain_json(read_file(args.domain_path));
    const Mesh mesh = args.mesh_path.empty()
                          ? build_mesh(domain, args.n_radial, args.n_angular, args.refine,
                                       args.h_target)
                          : read_mesh(read_file(args.mesh_path));
    const SymSparse K = stiffness(mesh);
    const SymSparse B_in = boundary_mass(mesh, BoundaryTag::Inner, beta, domain.hole_center());
    const SymSparse B_unit = boundary_mass(mesh, BoundaryTag::Inner);
    const SymSparse M_out = boundary_mass(mesh, BoundaryTag::Outer);
    const auto inner = mesh.tagged_vertices(BoundaryTag::Inner);
    const auto outer = mesh.tagged_vertices(BoundaryTag::Outer);

    struct Row {
        const char* name;
        SpectralResult res;
    };
    const std::vector<Row> rows = {
        {"sigma_beta", solve_steklov_robin(K, B_in, M_out, outer)},
        {"sigma_dirichlet", solve_steklov_dirichlet(K, M_out, outer, inner)},
        {"mu1", solve_mu1(K, M_out, boundary_integral_row(mesh, BoundaryTag::Inner))},
        {"q_beta", solve_q_beta(K, B_in, M_out, inner, outer)},
    };
    std::string csv = "quantity,value,residual,gap\n";
    for (const auto& row : rows) {
        csv += std::string(row.name) + "," + fmt(row.res.value) + "," + fmt(row.res.residual) +
               "," + fmt(row.res.gap) + "\n";
        std::printf("%-16s = %.10f  (residual %.2e)\n", row.name, row.res.value,
                    row.res.residual);
    }
    if (!out_dir.empty()) {
        for (const auto& f : formats) {
            if (f == "csv") write_file(out_dir + "/solve.csv", csv);
            else if (f == "json") {
                std::string j = "{\n";
                for (std::size_t i = 0; i < rows.size(); ++i)
                    j += "  \"" + std::string(rows[i].name) + "\": " + fmt(rows[i].res.value) +
                         (i + 1 < rows.size() ? ",\n" : "\n");
                write_file(out_dir + "/solve.json", j + "}\n");
            } else throw std::invalid_argument("unknown format " + f);
        }
    }
    return 0;
}

int cmd_verify(const std::string& suite, const std::string& out_dir) {
    if (suite != "default") {
        std::fprintf(stderr, "verify: unknown suite '%s'\n", suite.c_str());
        return kExitUsage;
    }
    const auto recs = default_suite();
    int failed = 0;
    for (const auto& r : recs) {
        if (!r.pass) ++failed;
        std::printf("[%s] %s %s beta=%s lhs=%s rhs=%s\n", r.pass ? "pass" : "FAIL",
                    r.name.c_str(), r.domain.c_str(), r.beta.c_str(), fmt(r.lhs).c_str(),
                    fmt(r.rhs).c_str());
    }
    std::printf("%zu checks, %d failed\n", recs.size(), failed);
    if (!out_dir.empty()) {
        write_file(out_dir + "/report.csv", report_csv(recs));
        write_file(out_dir + "/report.json", report_json(recs));
    }
    return std::min(failed, 125);
}

std::vector<double> parse_grid(const std::string& text) {
    // "lo:hi:count" geometric grid, or a comma-separated explicit list.
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double lo, hi;
        int count;
        if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 2 ||
            !(lo > 0.0) || !(hi > lo))
            throw std::invalid_argument("grid must be lo:hi:count with 0 < lo < hi, count >= 2");
        for (int i = 0; i < count; ++i)
            out.push_back(lo * std::pow(hi / lo, double(i) / (count - 1)));
    } else {
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
        if (out.size() < 2) throw std::invalid_argument("grid needs at least 2 values");
    }
    return out;
}

int cmd_sweep(const DomainArgs& args, const std::string& beta_grid,
              const std::string& radius_list, const std::string& out_dir) {
    if (beta_grid.empty() == radius_list.empty()) {
        std::fprintf(stderr, "sweep: pass exactly one of --beta or --radius\n");
        return kExitUsage;
    }
    const auto [domain, beta] = parse_domain_json(read_file(args.domain_path));
    std::string csv;
    std::string svg;
    std::vector<CheckRecord> checks;
    if (!beta_grid.empty()) {
        const auto betas = parse_grid(beta_grid);
        const Mesh mesh = build_mesh(domain, args.n_radial, args.n_angular, args.refine,
                                     args.h_target);
        const BetaSweep sweep = sweep_beta(domain, mesh, betas, "domain");
        csv = "beta,sigma\n";
        std::vector<double> xs, ys;
        for (const auto& row : sweep.rows) {
            csv += fmt(row.beta) + "," + fmt(row.sigma) + "\n";
            xs.push_back(row.beta);
            ys.push_back(row.sigma);
        }
        svg = svg_plot(xs, {ys}, {"sigma_beta"}, "beta", "sigma", true, false);
        checks = sweep.checks;
    } else {
        if (!domain.is_radial())
            throw std::invalid_argument("radius sweep needs a radial outline");
        auto radii = parse_grid(radius_list);
        std::sort(radii.begin(), radii.end(), std::greater<double>());
        const RadiusSweep sweep = radius_sweep(domain.radial(), beta.min_value(), radii,
                                               args.n_radial, args.n_angular, "domain");
        csv = "r,sigma,shell_sigma\n";
        std::vector<double> xs, ys, zs;
        for (const auto& row : sweep.rows) {
            csv += fmt(row.r) + "," + fmt(row.sigma) + "," + fmt(row.shell_sigma) + "\n";
            xs.push_back(row.r);
            ys.push_back(row.sigma);
            zs.push_back(row.shell_sigma);
        }
        svg = svg_plot(xs, {ys, zs}, {"sigma_beta", "shell bound"}, "r", "sigma", false, false);
        checks = sweep.checks;
    }
    std::fputs(csv.c_str(), stdout);
    int failed = 0;
    for (const auto& c : checks)
        if (!c.pass) {
            ++failed;
            std::printf("[FAIL] %s lhs=%s rhs=%s\n", c.name.c_str(), fmt(c.lhs).c_str(),
                        fmt(c.rhs).c_str());
        }
    if (!out_dir.empty()) {
        write_file(out_dir + "/sweep.csv", csv);
        write_file(out_dir + "/sweep.svg", svg);
    }
    return std::min(failed, 125);
}

int cmd_convergence(const DomainArgs& args, int levels, double beta_value,
                    const std::string& out_dir) {
    const auto [domain, beta] = parse_domain_json(read_file(args.domain_path));
    (void)beta;
    if (!domain.is_radial() || !domain.radial().cos_coeffs.empty() ||
        !domain.radial().sin_coeffs.empty())
        throw std::invalid_argument("convergence study needs a circular outline (closed form)");
    const ShellConvergence conv = shell_validation(domain.hole_radius, domain.radial().a0,
                                                   beta_value, args.n_radial, args.n_angular,
                                                   levels);
    std::string csv = "h,sigma_err,dirichlet_err,q_err,mu1\n";
    std::vector<double> hs, se, de;
    for (const auto& row : conv.rows) {
        csv += fmt(row.h) + "," + fmt(row.sigma_err) + "," + fmt(row.dirichlet_err) + "," +
               fmt(row.q_err) + "," + fmt(row.mu1) + "\n";
        hs.push_back(row.h);
        se.push_back(std::max(row.sigma_err, 1e-16));
        de.push_back(std::max(row.dirichlet_err, 1e-16));
    }
    std::fputs(csv.c_str(), stdout);
    std::printf("fitted order: sigma %.2f, dirichlet %.2f, q %.2f\n", conv.order_sigma,
                conv.order_dirichlet, conv.order_q);
    if (!out_dir.empty()) {
        write_file(out_dir + "/convergence.csv", csv);
        char note[64];
        std::snprintf(note, sizeof note, "order %.2f", conv.order_sigma);
        std::string svg = svg_plot(hs, {se, de},
                                   {std::string("sigma err (") + note + ")", "dirichlet err"},
                                   "h", "relative error", true, true);
        write_file(out_dir + "/convergence.svg", svg);
    }
    int failed = 0;
    for (const auto& c : conv.checks) failed += c.pass ? 0 : 1;
    return std::min(failed, 125);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steklov-Robin eigenvalue toolkit for annular domains"};
    app.require_subcommand(1);

    auto* oracle = app.add_subcommand("oracle", "closed-form shell eigenvalues");
    int n = 2;
    double r = 1.0, R = 2.0, b = 1.0;
    oracle->add_option("-n", n, "space dimension (>= 2)");
    oracle->add_option("-r", r, "inner radius");
    oracle->add_option("-R", R, "outer radius");
    oracle->add_option("-b,--beta", b, "Robin weight");

    DomainArgs margs, sargs, wargs, cargs;
    std::string mesh_out = "mesh.txt";
    auto* mesh = app.add_subcommand("mesh", "build and write a mesh");
    add_domain_flags(mesh, margs, false);
    mesh->add_option("-o,--output", mesh_out, "output mesh file");

    auto* solve = app.add_subcommand("solve", "solve the four eigenvalue problems");
    add_domain_flags(solve, sargs, true);
    std::string solve_out;
    std::vector<std::string> formats = {"csv", "json"};
    solve->add_option("-o,--output", solve_out, "output directory");
    solve->add_option("--formats", formats, "output formats (csv json)");

    auto* verify = app.add_subcommand("verify", "run a certification suite");
    std::string suite = "default";
    std::string verify_out;
    verify->add_option("--suite", suite, "suite name");
    verify->add_option("-o,--output", verify_out, "output directory");

    auto* sweep = app.add_subcommand("sweep", "sweep beta or hole radius");
    add_domain_flags(sweep, wargs, false);
    std::string beta_grid, radius_list, sweep_out;
    sweep->add_option("--beta", beta_grid, "geometric grid lo:hi:count");
    sweep->add_option("--radius", radius_list, "comma-separated decreasing radii");
    sweep->add_option("-o,--output", sweep_out, "output directory");

    auto* conv = app.add_subcommand("convergence", "mesh convergence against closed forms");
    add_domain_flags(conv, cargs, false);
    int levels = 3;
    double conv_beta = 1.0;
    std::string conv_out;
    conv->add_option("--levels", levels, "refinement levels");
    conv->add_option("--beta", conv_beta, "Robin weight");
    conv->add_option("-o,--output", conv_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (oracle->parsed()) return cmd_oracle(n, r, R, b);
        if (mesh->parsed()) return cmd_mesh(margs, mesh_out);
        if (solve->parsed()) return cmd_solve(sargs, solve_out, formats);
        if (verify->parsed()) return cmd_verify(suite, verify_out);
        if (sweep->parsed()) return cmd_sweep(wargs, beta_grid, radius_list, sweep_out);
        if (conv->parsed()) return cmd_convergence(cargs, levels, conv_beta, conv_out);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return kExitSolver;
    }
    return 0;
}
