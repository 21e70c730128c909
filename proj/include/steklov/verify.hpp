#pragma once

#include <string>
#include <vector>

#include "steklov/geometry.hpp"
#include "steklov/mesh.hpp"

namespace steklov {

// One certified inequality (lhs <= rhs up to tol) or limit residual
// (rhs = 0, pass iff |lhs| <= tol). margin = rhs - lhs.
struct CheckRecord {
    std::string name;
    std::string domain;
    std::string beta;
    double h = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    double tol = 0.0;
    bool pass = false;
};

// The four same-mesh variational inequalities:
// sigma <= sigma_dirichlet, sigma <= m/P (constant test function),
// 1/sigma <= 1/mu1 + P/m, 1/sigma <= 1/sigma_dirichlet + 1/q.
std::vector<CheckRecord> check_upper_bounds(const AnnularDomain& domain, const BetaSpec& beta,
                                            const Mesh& mesh, const std::string& label);

// sigma >= sigma_shell(A_{r,R_m}, inf beta) / starshape_factor, radial outlines only.
CheckRecord check_lower_bound(const AnnularDomain& domain, const BetaSpec& beta,
                              const Mesh& mesh, const std::string& label);

struct BetaSweepRow {
    double beta = 0.0;
    double sigma = 0.0;
};
struct BetaSweep {
    std::vector<BetaSweepRow> rows;
    std::vector<CheckRecord> checks;  // monotone, small-beta slope, large-beta limit
};
BetaSweep sweep_beta(const AnnularDomain& domain, const Mesh& mesh,
                     const std::vector<double>& betas, const std::string& label);

struct EigenConvergenceRow {
    double beta = 0.0;
    double h1_dist = 0.0;      // H1 distance to the Dirichlet eigenvector
    double inner_trace = 0.0;  // L2 norm of the trace on the hole boundary
};
struct EigenConvergence {
    std::vector<EigenConvergenceRow> rows;
    std::vector<CheckRecord> checks;
};
EigenConvergence eigenfunction_convergence(const AnnularDomain& domain, const Mesh& mesh,
                                           const std::vector<double>& betas,
                                           const std::string& label);

// Thin-neck family: sigma below the 2*pi^2*eps test-function bound, decreasing
// in eps, and the interpolated neck test function reproduces the bound.
std::vector<CheckRecord> dumbbell_check(const std::vector<double>& eps_list, double hole_radius,
                                        double h_target, double beta = 1.0);

struct RadiusSweepRow {
    double r = 0.0;
    double sigma = 0.0;
    double shell_sigma = 0.0;  // closed form on A_{r,R_m}
};
struct RadiusSweep {
    std::vector<RadiusSweepRow> rows;
    std::vector<CheckRecord> checks;
};
RadiusSweep radius_sweep(const RadialOutline& outline, double beta,
                         const std::vector<double>& r_list, int n_radial, int n_angular,
                         const std::string& label);

struct ShellConvergenceRow {
    double h = 0.0;
    double sigma_err = 0.0;
    double dirichlet_err = 0.0;
    double q_err = 0.0;
    double mu1 = 0.0;
};
struct ShellConvergence {
    std::vector<ShellConvergenceRow> rows;
    double order_sigma = 0.0;
    double order_dirichlet = 0.0;
    double order_q = 0.0;
    std::vector<CheckRecord> checks;
};
// Nested refinements of the circular annulus, errors against the closed forms.
ShellConvergence shell_validation(double r, double R, double beta, int n_radial, int n_angular,
                                  int levels);

// Fixed fixture set covering shells, a Fourier outline (constant and piecewise
// weights) and the dumbbell family; deterministic record order.
std::vector<CheckRecord> default_suite();

std::string report_csv(const std::vector<CheckRecord>& records);
std::string report_json(const std::vector<CheckRecord>& records);

}  // namespace steklov
