#include "steklov/shell.hpp"

#include <cmath>
#include <stdexcept>

namespace steklov {

ShellSpec::ShellSpec(int n_, double r_, double R_) : n(n_), r(r_), R(R_) {
    if (n < 2) throw std::invalid_argument("ShellSpec: dimension must be >= 2");
    if (!(r > 0.0)) throw std::invalid_argument("ShellSpec: inner radius must be > 0");
    if (!(R > r)) throw std::invalid_argument("ShellSpec: outer radius must exceed inner radius");
}

static void require_beta(double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
}

double sigma_beta_shell(const ShellSpec& spec, double beta) {
    require_beta(beta);
    const double r = spec.r, R = spec.R;
    if (spec.n == 2) {
        return 1.0 / (R / (beta * r) + R * std::log(R / r));
    }
    const double m = spec.n - 2;
    const double ratio = R / r;
    return m / ((m / beta) * std::pow(ratio, spec.n - 1) +
                R * (std::pow(ratio, spec.n - 2) - 1.0));
}

double sigma_dirichlet_shell(const ShellSpec& spec) {
    const double r = spec.r, R = spec.R;
    if (spec.n == 2) {
        return 1.0 / (R * std::log(R / r));
    }
    const double m = spec.n - 2;
    return m / (R * (std::pow(R / r, spec.n - 2) - 1.0));
}

double shell_eigenfunction(const ShellSpec& spec, double beta, double s) {
    require_beta(beta);
    if (s < spec.r || s > spec.R)
        throw std::domain_error("shell_eigenfunction: s outside [r, R]");
    const double r = spec.r;
    if (spec.n == 2) {
        return std::log(s / r) + 1.0 / (beta * r);
    }
    const double m = spec.n - 2;
    return 1.0 / std::pow(r, m) - 1.0 / std::pow(s, m) +
           m / (beta * std::pow(r, spec.n - 1));
}

namespace {

// v(s) = c1 log s + c2 (n = 2) or c1 s^{2-n} + c2 (n >= 3); residuals of
// the two boundary conditions for a given (c1, c2, sigma).
std::pair<double, double> profile_residuals(const ShellSpec& spec, double beta,
                                            double c1, double c2, double sigma,
                                            bool normalize) {
    const double r = spec.r, R = spec.R;
    double vr, vR, dvr, dvR;
    if (spec.n == 2) {
        vr = c1 * std::log(r) + c2;
        vR = c1 * std::log(R) + c2;
        dvr = c1 / r;
        dvR = c1 / R;
    } else {
        const double m = spec.n - 2;
        vr = c1 * std::pow(r, -m) + c2;
        vR = c1 * std::pow(R, -m) + c2;
        dvr = -m * c1 * std::pow(r, -m - 1.0);
        dvR = -m * c1 * std::pow(R, -m - 1.0);
    }
    double robin = std::abs(-dvr + beta * vr);
    double steklov = std::abs(dvR - sigma * vR);
    if (normalize) {
        robin /= std::abs(dvr) + beta * std::abs(vr);
        steklov /= std::abs(dvR) + sigma * std::abs(vR);
    }
    return {robin, steklov};
}

}  // namespace

std::pair<double, double> shell_bc_residuals(const ShellSpec& spec, double beta) {
    require_beta(beta);
    const double sigma = sigma_beta_shell(spec, beta);
    double c1, c2;
    if (spec.n == 2) {
        c1 = 1.0;
        c2 = 1.0 / (beta * spec.r) - std::log(spec.r);
    } else {
        const double m = spec.n - 2;
        c1 = -1.0;
        c2 = 1.0 / std::pow(spec.r, m) + m / (beta * std::pow(spec.r, spec.n - 1));
    }
    return profile_residuals(spec, beta, c1, c2, sigma, true);
}

std::pair<double, double> shell_bc_residuals_uncorrected(const ShellSpec& spec,
                                                         double beta) {
    require_beta(beta);
    if (spec.n < 3)
        throw std::invalid_argument("uncorrected constants only differ for n >= 3");
    const double m = spec.n - 2;
    const double c1 = -1.0;
    const double c2 = 1.0 / std::pow(spec.r, m) +
                      m / (beta * spec.R * std::pow(spec.r, m));
    const double ratio = spec.R / spec.r;
    const double sigma = m / ((m / beta) * std::pow(ratio, spec.n - 2) +
                              spec.R * (std::pow(ratio, spec.n - 2) - 1.0));
    return profile_residuals(spec, beta, c1, c2, sigma, false);
}

double uncorrected_small_beta_slope(const ShellSpec& spec) {
    if (spec.n < 3)
        throw std::invalid_argument("uncorrected constants only differ for n >= 3");
    return std::pow(spec.r / spec.R, spec.n - 2);
}

double q_shell(const ShellSpec& spec) {
    return std::pow(spec.r / spec.R, spec.n - 1);
}

double shell_reciprocal_identity(const ShellSpec& spec, double beta) {
    require_beta(beta);
    return 1.0 / sigma_beta_shell(spec, beta) - 1.0 / sigma_dirichlet_shell(spec) -
           1.0 / (beta * q_shell(spec));
}

}  // namespace steklov
