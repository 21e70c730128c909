#pragma once

#include <vector>

#include <Eigen/SparseCore>

#include "steklov/geometry.hpp"
#include "steklov/mesh.hpp"

namespace steklov {

using DofVector = std::vector<double>;

// Symmetric sparse matrix, compressed rows, full (both-halves) pattern.
struct SymSparse {
    int n = 0;
    std::vector<int> row_ptr;   // size n + 1
    std::vector<int> col_idx;   // size nnz
    std::vector<double> values;

    struct Triplet {
        int row;
        int col;
        double value;
    };

    // Duplicate entries are summed in a fixed (sorted) order, so the result
    // is independent of the order triplets were produced in.
    static SymSparse from_triplets(int n, std::vector<Triplet> triplets);

    DofVector multiply(const DofVector& v) const;
    double quad(const DofVector& u, const DofVector& v) const;  // u' A v
    double row_sum(int row) const;
    double max_abs() const;
    Eigen::SparseMatrix<double> to_eigen() const;
};

// P1 stiffness: int_Omega grad(u) . grad(v). Constants are in the kernel.
// The default entry point runs the element loop with OpenMP; the _serial
// variant is the reference implementation kept for testing and benchmarks.
SymSparse stiffness(const Mesh& mesh);
SymSparse stiffness_serial(const Mesh& mesh);

// Boundary mass on the tagged loop with unit weight: int v^2 along edges,
// exact per-edge integration of P1 products (L/6 * [[2,1],[1,2]]).
SymSparse boundary_mass(const Mesh& mesh, BoundaryTag tag);

// Robin boundary mass: int beta(x) v^2 on the tagged loop; beta is sampled
// at the edge midpoint angle relative to the given circle center.
SymSparse boundary_mass(const Mesh& mesh, BoundaryTag tag, const BetaSpec& beta,
                        const std::array<double, 2>& center);

// P1 consistent volume mass: int_Omega u v.
SymSparse volume_mass(const Mesh& mesh);
SymSparse volume_mass_serial(const Mesh& mesh);

// Rayleigh quotient (v'Kv + v'B v) / (v'Mv); every admissible vector bounds
// the discrete first eigenvalue from above.
double rayleigh(const SymSparse& K, const SymSparse& B_in, const SymSparse& M_out,
                const DofVector& v);

// sqrt((u-v)'(K + M_vol)(u-v)), the discrete H1 distance.
double h1_distance(const SymSparse& K, const SymSparse& M_vol, const DofVector& u,
                   const DofVector& v);

// sqrt(v' M v) for a boundary mass M.
double boundary_l2(const SymSparse& M, const DofVector& v);

// Discrete integral row c_j = int_{tagged loop} phi_j (row sums of the unit
// boundary mass); used as the zero-mean constraint.
DofVector boundary_integral_row(const Mesh& mesh, BoundaryTag tag);

}  // namespace steklov
