#pragma once

#include <utility>

namespace steklov {

// Spherical shell A_{r,R} = { x in R^n : r < |x| < R }, n >= 2.
struct ShellSpec {
    int n;
    double r;
    double R;

    ShellSpec(int n_, double r_, double R_);
};

// First eigenvalue of the harmonic problem on the shell with a Robin
// condition (-v'(r) + beta v(r) = 0) on the inner sphere and a Steklov
// condition (v'(R) = sigma v(R)) on the outer sphere, for constant beta > 0.
//
//   n = 2 : sigma = 1 / ( R/(beta r) + R log(R/r) )
//   n >= 3: sigma = (n-2) / ( ((n-2)/beta)(R/r)^{n-1} + R((R/r)^{n-2} - 1) )
double sigma_beta_shell(const ShellSpec& spec, double beta);

// beta -> infinity limit: the Steklov problem with a Dirichlet hole.
//   n = 2 : 1 / (R log(R/r));   n >= 3: (n-2) / ( R((R/r)^{n-2} - 1) )
double sigma_dirichlet_shell(const ShellSpec& spec);

// Radial profile v(s) of the first eigenfunction, s in [r, R]:
//   n = 2 : log(s/r) + 1/(beta r)
//   n >= 3: 1/r^{n-2} - 1/s^{n-2} + (n-2)/(beta r^{n-1})
double shell_eigenfunction(const ShellSpec& spec, double beta, double s);

// Self-certification of the closed form: returns the relative residuals
//   ( |-v'(r) + beta v(r)| / (|v'(r)| + beta |v(r)|),
//     |v'(R) - sigma v(R)| / (|v'(R)| + sigma |v(R)|) ).
// Both vanish identically for the implemented coefficients.
std::pair<double, double> shell_bc_residuals(const ShellSpec& spec, double beta);

// Absolute residuals for the n >= 3 profile with the additive constant
// (n-2)/(beta R r^{n-2}) instead of (n-2)/(beta r^{n-1}). That variant does
// not satisfy the Robin condition; kept as a regression witness.
std::pair<double, double> shell_bc_residuals_uncorrected(const ShellSpec& spec,
                                                         double beta);

// Slope of the uncorrected eigenvalue branch as beta -> 0, i.e. (r/R)^{n-2};
// the correct limit of sigma/beta is the perimeter ratio (r/R)^{n-1}.
double uncorrected_small_beta_slope(const ShellSpec& spec);

// min over harmonic w with zero outer Neumann data of
// int_{inner} w^2 / int_{outer} w^2; attained by constants: (r/R)^{n-1}.
double q_shell(const ShellSpec& spec);

// Residual of 1/sigma_beta - 1/sigma_D - 1/(beta q); identically zero on
// shells (the splitting bound is an equality in the radial case).
double shell_reciprocal_identity(const ShellSpec& spec, double beta);

}  // namespace steklov
