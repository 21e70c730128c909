#include "steklov/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace steklov {

SymSparse SymSparse::from_triplets(int n, std::vector<Triplet> triplets) {
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SymSparse m;
    m.n = n;
    m.row_ptr.assign(n + 1, 0);
    for (std::size_t i = 0; i < triplets.size();) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < triplets.size() && triplets[j].row == triplets[i].row &&
               triplets[j].col == triplets[i].col)
            sum += triplets[j++].value;
        m.col_idx.push_back(triplets[i].col);
        m.values.push_back(sum);
        ++m.row_ptr[triplets[i].row + 1];
        i = j;
    }
    std::partial_sum(m.row_ptr.begin(), m.row_ptr.end(), m.row_ptr.begin());
    return m;
}

DofVector SymSparse::multiply(const DofVector& v) const {
    if (static_cast<int>(v.size()) != n) throw std::invalid_argument("dimension mismatch");
    DofVector out(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            out[i] += values[k] * v[col_idx[k]];
    return out;
}

double SymSparse::quad(const DofVector& u, const DofVector& v) const {
    if (static_cast<int>(u.size()) != n || static_cast<int>(v.size()) != n)
        throw std::invalid_argument("dimension mismatch");
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            sum += u[i] * values[k] * v[col_idx[k]];
    return sum;
}

double SymSparse::row_sum(int row) const {
    double sum = 0.0;
    for (int k = row_ptr[row]; k < row_ptr[row + 1]; ++k) sum += values[k];
    return sum;
}

double SymSparse::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

Eigen::SparseMatrix<double> SymSparse::to_eigen() const {
    Eigen::SparseMatrix<double> m(n, n);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(values.size());
    for (int i = 0; i < n; ++i)
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            trips.emplace_back(i, col_idx[k], values[k]);
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

namespace {

// Local P1 stiffness of one triangle; 3x3 entries appended as triplets.
inline void element_stiffness(const Mesh& mesh, int t, SymSparse::Triplet* out) {
    const auto& tri = mesh.triangles[t];
    const auto& p0 = mesh.vertices[tri[0]];
    const auto& p1 = mesh.vertices[tri[1]];
    const auto& p2 = mesh.vertices[tri[2]];
    const double bx[3] = {p1[1] - p2[1], p2[1] - p0[1], p0[1] - p1[1]};
    const double by[3] = {p2[0] - p1[0], p0[0] - p2[0], p1[0] - p0[0]};
    const double twice_area = (p1[0] - p0[0]) * (p2[1] - p0[1]) -
                              (p2[0] - p0[0]) * (p1[1] - p0[1]);
    if (!(twice_area > 0.0)) throw std::runtime_error("assembly: degenerate triangle");
    int k = 0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            out[k++] = {tri[a], tri[b], (bx[a] * bx[b] + by[a] * by[b]) / (2.0 * twice_area)};
}

inline void element_volume_mass(const Mesh& mesh, int t, SymSparse::Triplet* out) {
    const auto& tri = mesh.triangles[t];
    const auto& p0 = mesh.vertices[tri[0]];
    const auto& p1 = mesh.vertices[tri[1]];
    const auto& p2 = mesh.vertices[tri[2]];
    const double area = 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) -
                               (p2[0] - p0[0]) * (p1[1] - p0[1]));
    int k = 0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            out[k++] = {tri[a], tri[b], area / 12.0 * (a == b ? 2.0 : 1.0)};
}

// Each element writes a fixed slot range, so the triplet list (and hence the
// summation order inside from_triplets) does not depend on the thread count.
template <typename ElementKernel>
SymSparse assemble_elements(const Mesh& mesh, ElementKernel&& kernel, bool parallel) {
    const int nt = static_cast<int>(mesh.triangles.size());
    std::vector<SymSparse::Triplet> trips(static_cast<std::size_t>(nt) * 9);
    if (parallel) {
        // Exceptions must not escape the parallel region; stash and rethrow.
        std::exception_ptr err;
#pragma omp parallel for schedule(static)
        for (int t = 0; t < nt; ++t) {
            try {
                kernel(mesh, t, &trips[static_cast<std::size_t>(t) * 9]);
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
    } else {
        for (int t = 0; t < nt; ++t) kernel(mesh, t, &trips[static_cast<std::size_t>(t) * 9]);
    }
    return SymSparse::from_triplets(static_cast<int>(mesh.vertices.size()), std::move(trips));
}

}  // namespace

SymSparse stiffness(const Mesh& mesh) {
    return assemble_elements(mesh, [](const Mesh& m, int t, SymSparse::Triplet* o) {
        element_stiffness(m, t, o);
    }, true);
}

SymSparse stiffness_serial(const Mesh& mesh) {
    return assemble_elements(mesh, [](const Mesh& m, int t, SymSparse::Triplet* o) {
        element_stiffness(m, t, o);
    }, false);
}

SymSparse volume_mass(const Mesh& mesh) {
    return assemble_elements(mesh, [](const Mesh& m, int t, SymSparse::Triplet* o) {
        element_volume_mass(m, t, o);
    }, true);
}

SymSparse volume_mass_serial(const Mesh& mesh) {
    return assemble_elements(mesh, [](const Mesh& m, int t, SymSparse::Triplet* o) {
        element_volume_mass(m, t, o);
    }, false);
}

namespace {

SymSparse boundary_mass_impl(const Mesh& mesh, BoundaryTag tag, const BetaSpec* beta,
                             const std::array<double, 2>& center) {
    std::vector<SymSparse::Triplet> trips;
    bool found = false;
    for (const auto& e : mesh.boundary_edges) {
        if (e.tag != tag) continue;
        found = true;
        const auto& a = mesh.vertices[e.a];
        const auto& b = mesh.vertices[e.b];
        const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
        double w = 1.0;
        if (beta) {
            const double theta = std::atan2((a[1] + b[1]) / 2.0 - center[1],
                                            (a[0] + b[0]) / 2.0 - center[0]);
            w = beta->value_at(theta);
        }
        const double c = w * len / 6.0;
        trips.push_back({e.a, e.a, 2.0 * c});
        trips.push_back({e.b, e.b, 2.0 * c});
        trips.push_back({e.a, e.b, c});
        trips.push_back({e.b, e.a, c});
    }
    if (!found) throw std::invalid_argument("boundary_mass: tag absent from mesh");
    return SymSparse::from_triplets(static_cast<int>(mesh.vertices.size()), std::move(trips));
}

}  // namespace

SymSparse boundary_mass(const Mesh& mesh, BoundaryTag tag) {
    return boundary_mass_impl(mesh, tag, nullptr, {0.0, 0.0});
}

SymSparse boundary_mass(const Mesh& mesh, BoundaryTag tag, const BetaSpec& beta,
                        const std::array<double, 2>& center) {
    return boundary_mass_impl(mesh, tag, &beta, center);
}

double rayleigh(const SymSparse& K, const SymSparse& B_in, const SymSparse& M_out,
                const DofVector& v) {
    const double denom = M_out.quad(v, v);
    if (!(denom > 0.0))
        throw std::domain_error("rayleigh: vector has zero outer boundary trace");
    return (K.quad(v, v) + B_in.quad(v, v)) / denom;
}

double h1_distance(const SymSparse& K, const SymSparse& M_vol, const DofVector& u,
                   const DofVector& v) {
    if (u.size() != v.size()) throw std::invalid_argument("dimension mismatch");
    DofVector d(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) d[i] = u[i] - v[i];
    return std::sqrt(K.quad(d, d) + M_vol.quad(d, d));
}

double boundary_l2(const SymSparse& M, const DofVector& v) {
    return std::sqrt(M.quad(v, v));
}

DofVector boundary_integral_row(const Mesh& mesh, BoundaryTag tag) {
    const SymSparse m = boundary_mass(mesh, tag);
    DofVector row(m.n, 0.0);
    for (int i = 0; i < m.n; ++i) row[i] = m.row_sum(i);
    return row;
}

}  // namespace steklov
