#include "steklov/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include <Eigen/SparseCholesky>

namespace steklov {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

Eigen::VectorXd to_eigen_vec(const DofVector& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Schur complement of A onto the dofs in `gdofs`, with `excluded` dofs
// removed beforehand (homogeneous Dirichlet).
struct SchurSystem {
    std::vector<int> gdofs;
    std::vector<int> idofs;
    Eigen::MatrixXd S;
    SpMat A_IG;
    std::unique_ptr<Eigen::SimplicialLDLT<SpMat>> interior;

    // Full-length vector: x on gdofs, the harmonic-complement values on
    // idofs, zero on excluded dofs.
    DofVector prolong(const Eigen::VectorXd& x, int n_full) const {
        DofVector out(n_full, 0.0);
        if (!idofs.empty()) {
            Eigen::VectorXd ui = interior->solve(-(A_IG * x));
            for (std::size_t i = 0; i < idofs.size(); ++i) out[idofs[i]] = ui[i];
        }
        for (std::size_t g = 0; g < gdofs.size(); ++g) out[gdofs[g]] = x[g];
        return out;
    }
};

SchurSystem schur_reduce(const SymSparse& A, const std::vector<int>& gdofs,
                         const std::vector<int>& excluded) {
    const int n = A.n;
    std::vector<int> role(n, 0);  // 0 interior, 1 boundary, 2 excluded
    for (int g : gdofs) role[g] = 1;
    for (int e : excluded) {
        if (role[e] == 1) throw std::invalid_argument("schur_reduce: dof both kept and excluded");
        role[e] = 2;
    }
    SchurSystem sys;
    sys.gdofs = gdofs;
    std::vector<int> local(n, -1);
    for (int i = 0; i < n; ++i)
        if (role[i] == 0) {
            local[i] = static_cast<int>(sys.idofs.size());
            sys.idofs.push_back(i);
        }
    std::vector<int> glocal(n, -1);
    for (std::size_t g = 0; g < gdofs.size(); ++g) glocal[gdofs[g]] = static_cast<int>(g);

    const int ni = static_cast<int>(sys.idofs.size());
    const int ng = static_cast<int>(gdofs.size());
    std::vector<Eigen::Triplet<double>> t_ii, t_ig;
    sys.S = Eigen::MatrixXd::Zero(ng, ng);
    for (int i = 0; i < n; ++i) {
        if (role[i] == 2) continue;
        for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) {
            const int j = A.col_idx[k];
            if (role[j] == 2) continue;
            const double v = A.values[k];
            if (role[i] == 0 && role[j] == 0) t_ii.emplace_back(local[i], local[j], v);
            else if (role[i] == 0 && role[j] == 1) t_ig.emplace_back(local[i], glocal[j], v);
            else if (role[i] == 1 && role[j] == 1) sys.S(glocal[i], glocal[j]) += v;
        }
    }
    SpMat A_II(ni, ni);
    A_II.setFromTriplets(t_ii.begin(), t_ii.end());
    sys.A_IG.resize(ni, ng);
    sys.A_IG.setFromTriplets(t_ig.begin(), t_ig.end());

    if (ni > 0) {
        sys.interior = std::make_unique<Eigen::SimplicialLDLT<SpMat>>(A_II);
        if (sys.interior->info() != Eigen::Success)
            throw std::runtime_error("schur_reduce: interior block factorization failed");
        // S -= A_GI * (A_II^{-1} A_IG), in column blocks to bound memory.
        constexpr int kBlock = 64;
        for (int c0 = 0; c0 < ng; c0 += kBlock) {
            const int nc = std::min(kBlock, ng - c0);
            Eigen::MatrixXd rhs = Eigen::MatrixXd(sys.A_IG.middleCols(c0, nc));
            Eigen::MatrixXd x = sys.interior->solve(rhs);
            sys.S.middleCols(c0, nc).noalias() -= sys.A_IG.transpose() * x;
        }
    }
    sys.S = ((sys.S + sys.S.transpose()) / 2.0).eval();
    return sys;
}

Eigen::MatrixXd restrict_dense(const SymSparse& M, const std::vector<int>& dofs) {
    std::vector<int> glocal(M.n, -1);
    for (std::size_t g = 0; g < dofs.size(); ++g) glocal[dofs[g]] = static_cast<int>(g);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dofs.size(), dofs.size());
    for (int i = 0; i < M.n; ++i) {
        if (glocal[i] < 0) continue;
        for (int k = M.row_ptr[i]; k < M.row_ptr[i + 1]; ++k) {
            const int j = M.col_idx[k];
            if (glocal[j] >= 0) out(glocal[i], glocal[j]) += M.values[k];
        }
    }
    return out;
}

void normalize_and_orient(DofVector& v, const SymSparse& M_norm,
                          const std::vector<int>& orient_dofs) {
    const double norm = std::sqrt(M_norm.quad(v, v));
    if (!(norm > 0.0)) throw std::runtime_error("spectral: zero-norm eigenvector");
    double mean = 0.0;
    for (int g : orient_dofs) mean += v[g];
    const double scale = (mean < 0.0 ? -1.0 : 1.0) / norm;
    for (double& x : v) x *= scale;
}

// ||A v - lambda M v|| / ||A v|| over the rows in `active` (empty = all).
double pencil_residual(const SymSparse& A, const SymSparse& B_extra, const SymSparse& M,
                       double lambda, const DofVector& v, const std::vector<int>& skip) {
    DofVector av = A.multiply(v);
    if (B_extra.n == A.n && !B_extra.values.empty()) {
        const DofVector bv = B_extra.multiply(v);
        for (std::size_t i = 0; i < av.size(); ++i) av[i] += bv[i];
    }
    const DofVector mv = M.multiply(v);
    std::vector<char> skipped(A.n, 0);
    for (int s : skip) skipped[s] = 1;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < A.n; ++i) {
        if (skipped[i]) continue;
        const double r = av[i] - lambda * mv[i];
        num += r * r;
        den += av[i] * av[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

const SymSparse kEmpty{};

}  // namespace

DenseEig dense_sym_geig(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        throw std::invalid_argument("dense_sym_geig: dimension mismatch");
    const Eigen::LLT<Eigen::MatrixXd> chol(B);
    if (chol.info() != Eigen::Success)
        throw std::runtime_error("dense_sym_geig: B is not positive definite");
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(A, B,
                                                                     Eigen::ComputeEigenvectors |
                                                                         Eigen::Ax_lBx);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("dense_sym_geig: factorization failed (B not PD?)");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

SpectralResult solve_steklov_robin(const SymSparse& K, const SymSparse& B_in,
                                   const SymSparse& M_out,
                                   const std::vector<int>& outer_dofs) {
    if (B_in.max_abs() == 0.0)
        throw std::invalid_argument("solve_steklov_robin: inner Robin mass is zero");
    SymSparse A = K;
    {
        // A = K + B_in (merge sparse patterns through triplets)
        std::vector<SymSparse::Triplet> trips;
        for (int i = 0; i < K.n; ++i)
            for (int k = K.row_ptr[i]; k < K.row_ptr[i + 1]; ++k)
                trips.push_back({i, K.col_idx[k], K.values[k]});
        for (int i = 0; i < B_in.n; ++i)
            for (int k = B_in.row_ptr[i]; k < B_in.row_ptr[i + 1]; ++k)
                trips.push_back({i, B_in.col_idx[k], B_in.values[k]});
        A = SymSparse::from_triplets(K.n, std::move(trips));
    }
    const SchurSystem sys = schur_reduce(A, outer_dofs, {});
    const Eigen::MatrixXd M_G = restrict_dense(M_out, outer_dofs);
    const DenseEig eig = dense_sym_geig(sys.S, M_G);

    SpectralResult res;
    res.value = eig.values[0];
    res.gap = eig.values.size() > 1 ? eig.values[1] - eig.values[0] : 0.0;
    res.vector = sys.prolong(eig.vectors.col(0), K.n);
    normalize_and_orient(res.vector, M_out, outer_dofs);
    res.residual = pencil_residual(K, B_in, M_out, res.value, res.vector, {});
    return res;
}

SpectralResult solve_steklov_dirichlet(const SymSparse& K, const SymSparse& M_out,
                                       const std::vector<int>& outer_dofs,
                                       const std::vector<int>& inner_dofs) {
    if (inner_dofs.empty())
        throw std::invalid_argument("solve_steklov_dirichlet: no inner dofs to constrain");
    const SchurSystem sys = schur_reduce(K, outer_dofs, inner_dofs);
    const Eigen::MatrixXd M_G = restrict_dense(M_out, outer_dofs);
    const DenseEig eig = dense_sym_geig(sys.S, M_G);

    SpectralResult res;
    res.value = eig.values[0];
    res.gap = eig.values.size() > 1 ? eig.values[1] - eig.values[0] : 0.0;
    res.vector = sys.prolong(eig.vectors.col(0), K.n);
    normalize_and_orient(res.vector, M_out, outer_dofs);
    res.residual = pencil_residual(K, kEmpty, M_out, res.value, res.vector, inner_dofs);
    return res;
}

SpectralResult solve_mu1(const SymSparse& K, const SymSparse& M_out,
                         const DofVector& inner_row) {
    const int n = K.n;
    if (static_cast<int>(inner_row.size()) != n)
        throw std::invalid_argument("solve_mu1: constraint row dimension mismatch");
    int pivot = -1;
    double best = 0.0;
    for (int i = 0; i < n; ++i)
        if (std::abs(inner_row[i]) > best) {
            best = std::abs(inner_row[i]);
            pivot = i;
        }
    if (pivot < 0) throw std::invalid_argument("solve_mu1: all-zero constraint row");
    const double ck = inner_row[pivot];

    // Change of basis e_j -> e_j - (c_j / c_k) e_k for j != k; the reduced
    // stiffness is K restricted to the constraint plane, with dof k excluded.
    std::vector<SymSparse::Triplet> trips;
    std::vector<int> support;  // dofs with nonzero constraint weight
    for (int i = 0; i < n; ++i)
        if (i != pivot && inner_row[i] != 0.0) support.push_back(i);
    // K row of the pivot dof, as a dense lookup.
    DofVector krow(n, 0.0);
    for (int k = K.row_ptr[pivot]; k < K.row_ptr[pivot + 1]; ++k)
        krow[K.col_idx[k]] = K.values[k];
    const double kkk = krow[pivot];
    for (int i = 0; i < n; ++i) {
        if (i == pivot) continue;
        for (int k = K.row_ptr[i]; k < K.row_ptr[i + 1]; ++k) {
            const int j = K.col_idx[k];
            if (j == pivot) continue;
            trips.push_back({i, j, K.values[k]});
        }
        if (krow[i] != 0.0) {
            for (int j : support) trips.push_back({j, i, -(inner_row[j] / ck) * krow[i]});
            for (int j : support) trips.push_back({i, j, -(inner_row[j] / ck) * krow[i]});
        }
    }
    for (int i : support)
        for (int j : support)
            trips.push_back({i, j, inner_row[i] * inner_row[j] / (ck * ck) * kkk});
    const SymSparse Kt = SymSparse::from_triplets(n, std::move(trips));

    // Outer dofs: rows of M_out with a nonzero diagonal entry.
    std::vector<int> outer_dofs;
    for (int i = 0; i < n; ++i)
        for (int k = M_out.row_ptr[i]; k < M_out.row_ptr[i + 1]; ++k)
            if (M_out.col_idx[k] == i && M_out.values[k] != 0.0) {
                outer_dofs.push_back(i);
                break;
            }
    const SchurSystem sys = schur_reduce(Kt, outer_dofs, {pivot});
    const Eigen::MatrixXd M_G = restrict_dense(M_out, outer_dofs);
    const DenseEig eig = dense_sym_geig(sys.S, M_G);

    SpectralResult res;
    res.value = eig.values[0];
    res.gap = eig.values.size() > 1 ? eig.values[1] - eig.values[0] : 0.0;
    res.vector = sys.prolong(eig.vectors.col(0), n);
    // Recover the eliminated dof from the constraint.
    double dot = 0.0;
    for (int i = 0; i < n; ++i)
        if (i != pivot) dot += inner_row[i] * res.vector[i];
    res.vector[pivot] = -dot / ck;
    normalize_and_orient(res.vector, M_out, outer_dofs);
    res.residual = pencil_residual(Kt, kEmpty, M_out, res.value, res.vector, {pivot});
    return res;
}

SpectralResult solve_q_beta(const SymSparse& K, const SymSparse& B_in,
                            const SymSparse& M_out, const std::vector<int>& inner_dofs,
                            const std::vector<int>& outer_dofs) {
    const int n = K.n;
    const int nd = static_cast<int>(inner_dofs.size());
    if (nd == 0) throw std::invalid_argument("solve_q_beta: no inner dofs");

    // Extension operator: free dofs F = everything but the inner trace,
    // w_F = -K_FF^{-1} K_F,Delta g (natural data on the outer boundary).
    std::vector<int> role(n, 0);
    for (int d : inner_dofs) role[d] = 1;
    std::vector<int> fdofs;
    std::vector<int> local(n, -1), dlocal(n, -1);
    for (int i = 0; i < n; ++i)
        if (!role[i]) {
            local[i] = static_cast<int>(fdofs.size());
            fdofs.push_back(i);
        }
    for (int d = 0; d < nd; ++d) dlocal[inner_dofs[d]] = d;

    const int nf = static_cast<int>(fdofs.size());
    std::vector<Eigen::Triplet<double>> t_ff, t_fd;
    for (int i = 0; i < n; ++i) {
        if (role[i]) continue;
        for (int k = K.row_ptr[i]; k < K.row_ptr[i + 1]; ++k) {
            const int j = K.col_idx[k];
            if (role[j]) t_fd.emplace_back(local[i], dlocal[j], K.values[k]);
            else t_ff.emplace_back(local[i], local[j], K.values[k]);
        }
    }
    SpMat K_FF(nf, nf), K_FD(nf, nd);
    K_FF.setFromTriplets(t_ff.begin(), t_ff.end());
    K_FD.setFromTriplets(t_fd.begin(), t_fd.end());
    Eigen::SimplicialLDLT<SpMat> free_block(K_FF);
    if (free_block.info() != Eigen::Success)
        throw std::runtime_error("solve_q_beta: free-block factorization failed");

    // Only the outer-boundary trace of the extension enters the quotient, so
    // solve in column blocks and keep just the outer rows.
    const int ng = static_cast<int>(outer_dofs.size());
    Eigen::MatrixXd X_out(ng, nd);
    {
        constexpr int kBlock = 64;
        for (int c0 = 0; c0 < nd; c0 += kBlock) {
            const int nc = std::min(kBlock, nd - c0);
            const Eigen::MatrixXd rhs = Eigen::MatrixXd(-K_FD.middleCols(c0, nc));
            const Eigen::MatrixXd x = free_block.solve(rhs);
            for (int g = 0; g < ng; ++g)
                X_out.block(g, c0, 1, nc) = x.row(local[outer_dofs[g]]);
        }
    }
    const Eigen::MatrixXd M_G = restrict_dense(M_out, outer_dofs);
    Eigen::MatrixXd D = X_out.transpose() * (M_G * X_out);
    D = ((D + D.transpose()) / 2.0).eval();
    Eigen::MatrixXd N = restrict_dense(B_in, inner_dofs);
    N = ((N + N.transpose()) / 2.0).eval();
    for (int d = 0; d < nd; ++d)
        if (!(N(d, d) > 0.0))
            throw std::runtime_error("solve_q_beta: inner weight matrix not positive definite");

    const DenseEig eig = dense_sym_geig(D, N);  // largest lambda = 1/q
    const Eigen::Index last = eig.values.size() - 1;
    const double lam = eig.values[last];
    if (!(lam > 0.0)) throw std::runtime_error("solve_q_beta: degenerate pencil");

    SpectralResult res;
    res.value = 1.0 / lam;
    res.gap = eig.values.size() > 1 ? 1.0 / eig.values[last - 1] - res.value : 0.0;
    res.vector.assign(n, 0.0);
    const Eigen::VectorXd g = eig.vectors.col(last);
    const Eigen::VectorXd wf = free_block.solve(-(K_FD * g));
    for (int d = 0; d < nd; ++d) res.vector[inner_dofs[d]] = g[d];
    for (int f = 0; f < nf; ++f) res.vector[fdofs[f]] = wf[f];
    normalize_and_orient(res.vector, B_in, outer_dofs);
    // Residual of D g = lambda N g in the reduced space.
    const Eigen::VectorXd rvec = D * g - lam * (N * g);
    const double dg = (D * g).norm();
    res.residual = dg > 0.0 ? rvec.norm() / dg : 0.0;
    return res;
}

std::pair<DofVector, DofVector> harmonic_split(const SymSparse& K, const DofVector& u,
                                               const std::vector<int>& inner_dofs) {
    const int n = K.n;
    if (static_cast<int>(u.size()) != n)
        throw std::invalid_argument("harmonic_split: dimension mismatch");
    std::vector<char> is_inner(n, 0);
    for (int d : inner_dofs) is_inner[d] = 1;
    std::vector<int> fdofs, local(n, -1);
    for (int i = 0; i < n; ++i)
        if (!is_inner[i]) {
            local[i] = static_cast<int>(fdofs.size());
            fdofs.push_back(i);
        }
    const int nf = static_cast<int>(fdofs.size());
    std::vector<Eigen::Triplet<double>> t_ff;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
    for (int i = 0; i < n; ++i) {
        if (is_inner[i]) continue;
        for (int k = K.row_ptr[i]; k < K.row_ptr[i + 1]; ++k) {
            const int j = K.col_idx[k];
            if (is_inner[j]) rhs[local[i]] -= K.values[k] * u[j];
            else t_ff.emplace_back(local[i], local[j], K.values[k]);
        }
    }
    SpMat K_FF(nf, nf);
    K_FF.setFromTriplets(t_ff.begin(), t_ff.end());
    Eigen::SimplicialLDLT<SpMat> fact(K_FF);
    if (fact.info() != Eigen::Success)
        throw std::runtime_error("harmonic_split: factorization failed");
    const Eigen::VectorXd hf = fact.solve(rhs);

    DofVector h(n, 0.0), v(n, 0.0);
    for (int d : inner_dofs) h[d] = u[d];
    for (int f = 0; f < nf; ++f) h[fdofs[f]] = hf[f];
    for (int i = 0; i < n; ++i) v[i] = u[i] - h[i];
    return {v, h};
}

SpectralResult solve_steklov_robin_inverse_iteration(const SymSparse& K,
                                                     const SymSparse& B_in,
                                                     const SymSparse& M_out) {
    const int n = K.n;
    SpMat A = K.to_eigen();
    A += B_in.to_eigen();
    SpMat M = M_out.to_eigen();
    Eigen::SimplicialLDLT<SpMat> fact(A);
    if (fact.info() != Eigen::Success)
        throw std::runtime_error("inverse iteration: factorization failed");

    Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
    double sigma = 0.0;
    for (int it = 0; it < 2000; ++it) {
        Eigen::VectorXd w = fact.solve(M * v);
        const double mn = std::sqrt(w.dot(M * w));
        if (!(mn > 0.0)) throw std::runtime_error("inverse iteration: vector left the range of M");
        w /= mn;
        const double next = w.dot(A * w) / w.dot(M * w);
        v = w;
        if (it > 3 && std::abs(next - sigma) <= 1e-14 * std::abs(next)) {
            sigma = next;
            break;
        }
        sigma = next;
    }
    SpectralResult res;
    res.value = sigma;
    res.vector.assign(v.data(), v.data() + n);
    double mean = v.sum();
    if (mean < 0.0)
        for (double& x : res.vector) x = -x;
    const Eigen::VectorXd rv = to_eigen_vec(res.vector);
    const Eigen::VectorXd num = A * rv - sigma * (M * rv);
    const double den = (A * rv).norm();
    res.residual = den > 0.0 ? num.norm() / den : 0.0;
    return res;
}

}  // namespace steklov
