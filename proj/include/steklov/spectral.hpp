#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "steklov/assembly.hpp"

namespace steklov {

struct SpectralResult {
    double value = 0.0;
    DofVector vector;      // full-length, normalized, nonnegative orientation
    double residual = 0.0; // ||A v - lambda B v|| / ||A v|| on the active dofs
    double gap = 0.0;      // distance to the second eigenvalue of the pencil
};

struct DenseEig {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // B-orthonormal columns
};

// Deterministic dense symmetric-definite generalized eigensolver for
// A x = lambda B x with B positive definite.
DenseEig dense_sym_geig(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

// First eigenvalue of (K + B_in) v = sigma M_out v via Schur reduction onto
// the outer-boundary dofs. B_in must carry a positive weight (it makes
// K + B_in positive definite).
SpectralResult solve_steklov_robin(const SymSparse& K, const SymSparse& B_in,
                                   const SymSparse& M_out,
                                   const std::vector<int>& outer_dofs);

// Same pencil with homogeneous Dirichlet data on the hole: inner dofs are
// eliminated, the returned vector is zero there.
SpectralResult solve_steklov_dirichlet(const SymSparse& K, const SymSparse& M_out,
                                       const std::vector<int>& outer_dofs,
                                       const std::vector<int>& inner_dofs);

// min v'Kv / v'M_out v subject to inner_row . v = 0 (zero mean over the hole
// boundary), by eliminating one inner dof through the constraint.
SpectralResult solve_mu1(const SymSparse& K, const SymSparse& M_out,
                         const DofVector& inner_row);

// min over discrete-harmonic extensions (natural outer data) of the inner
// trace g of (g'N g)/(g'D g) with N the weighted inner mass and D the outer
// mass of the extension; returns q with the extension as the vector.
SpectralResult solve_q_beta(const SymSparse& K, const SymSparse& B_in,
                            const SymSparse& M_out, const std::vector<int>& inner_dofs,
                            const std::vector<int>& outer_dofs);

// u = v + h with h equal to u on the hole dofs and discrete-harmonic (with
// natural outer data) elsewhere; v vanishes on the hole dofs and the two
// gradients are K-orthogonal. Returns (v, h).
std::pair<DofVector, DofVector> harmonic_split(const SymSparse& K, const DofVector& u,
                                               const std::vector<int>& inner_dofs);

// Independent route for the Robin solve: inverse iteration on the full
// pencil (K + B_in) v = sigma M_out v, no boundary reduction. Used as a
// cross-check of the Schur path.
SpectralResult solve_steklov_robin_inverse_iteration(const SymSparse& K,
                                                     const SymSparse& B_in,
                                                     const SymSparse& M_out);

}  // namespace steklov
