#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "steklov/assembly.hpp"
#include "steklov/geometry.hpp"
#include "steklov/mesh.hpp"

using namespace steklov;

namespace {

constexpr double kPi = 3.14159265358979323846;

AnnularDomain annulus(double r, double R) {
    AnnularDomain d;
    d.outline = RadialOutline{R, {}, {}};
    d.hole_radius = r;
    return d;
}

// Single unit right triangle with the hypotenuse tagged Outer and the
// vertical leg tagged Inner (synthetic fixture; tags are arbitrary here).
Mesh unit_triangle() {
    Mesh m;
    m.vertices = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    m.triangles = {{0, 1, 2}};
    m.boundary_edges = {{1, 2, BoundaryTag::Outer}, {2, 0, BoundaryTag::Inner}};
    return m;
}

}  // namespace

TEST_CASE("stiffness of the unit right triangle") {
    // gradients of the P1 hats: (-1,-1), (1,0), (0,1); area 1/2, so
    // K = 1/2 * [[2,-1,-1],[-1,1,0],[-1,0,1]]
    const SymSparse K = stiffness(unit_triangle());
    DofVector e0 = {1.0, 0.0, 0.0}, e1 = {0.0, 1.0, 0.0}, e2 = {0.0, 0.0, 1.0};
    CHECK(K.quad(e0, e0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(K.quad(e1, e1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(K.quad(e2, e2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(K.quad(e0, e1) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(K.quad(e1, e2) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("stiffness annihilates constants and reproduces linear energies") {
    const Mesh m = polar_mesh(annulus(1.0, 2.0), 6, 48);
    const SymSparse K = stiffness(m);
    const DofVector ones(m.vertices.size(), 1.0);
    const DofVector k1 = K.multiply(ones);
    double mx = 0.0;
    for (double v : k1) mx = std::max(mx, std::abs(v));
    CHECK(mx <= 1e-12 * K.max_abs());

    // v = x interpolates exactly; grad v = (1,0), so v'Kv = area
    DofVector vx(m.vertices.size());
    for (std::size_t i = 0; i < m.vertices.size(); ++i) vx[i] = m.vertices[i][0];
    CHECK(K.quad(vx, vx) == doctest::Approx(m.area()).epsilon(1e-12));
}

TEST_CASE("boundary mass of a single edge") {
    // edge mass is L/6 * [[2,1],[1,2]]
    const Mesh m = unit_triangle();
    const SymSparse B = boundary_mass(m, BoundaryTag::Inner);  // edge (2,0), length 1
    DofVector u = {1.0, 0.0, 0.0}, v = {0.0, 0.0, 1.0};
    CHECK(B.quad(u, u) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(B.quad(v, v) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(B.quad(u, v) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));

    const SymSparse Bo = boundary_mass(m, BoundaryTag::Outer);  // hypotenuse, length sqrt2
    DofVector w = {0.0, 1.0, 1.0};
    CHECK(Bo.quad(w, w) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("volume mass matches the consistent P1 element matrix") {
    const SymSparse M = volume_mass(unit_triangle());
    // (area/12) * [[2,1,1],[1,2,1],[1,1,2]] with area 1/2
    DofVector e0 = {1.0, 0.0, 0.0}, e1 = {0.0, 1.0, 0.0};
    CHECK(M.quad(e0, e0) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
    CHECK(M.quad(e0, e1) == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
    const DofVector ones(3, 1.0);
    CHECK(M.quad(ones, ones) == doctest::Approx(0.5).epsilon(1e-14));  // total area
}

TEST_CASE("constant functions integrate to the discrete perimeters") {
    const Mesh m = polar_mesh(annulus(1.0, 2.0), 6, 64);
    const DofVector ones(m.vertices.size(), 1.0);
    CHECK(boundary_mass(m, BoundaryTag::Outer).quad(ones, ones) ==
          doctest::Approx(m.boundary_length(BoundaryTag::Outer)).epsilon(1e-13));
    CHECK(boundary_mass(m, BoundaryTag::Inner).quad(ones, ones) ==
          doctest::Approx(m.boundary_length(BoundaryTag::Inner)).epsilon(1e-13));
}

TEST_CASE("weighted boundary mass scales linearly and localizes") {
    const AnnularDomain d = annulus(1.0, 2.0);
    const Mesh m = polar_mesh(d, 6, 64);
    const DofVector ones(m.vertices.size(), 1.0);
    const SymSparse B1 = boundary_mass(m, BoundaryTag::Inner, BetaSpec::constant(1.0),
                                       d.hole_center());
    const SymSparse B3 = boundary_mass(m, BoundaryTag::Inner, BetaSpec::constant(3.0),
                                       d.hole_center());
    for (std::size_t k = 0; k < B1.values.size(); ++k)
        CHECK(B3.values[k] == doctest::Approx(3.0 * B1.values[k]).epsilon(1e-14));

    // piecewise weight integrates to its L1 norm up to the polygonal chord error
    const BetaSpec pw = BetaSpec::piecewise({0.0, kPi}, {2.0, 4.0});
    const SymSparse Bpw = boundary_mass(m, BoundaryTag::Inner, pw, d.hole_center());
    CHECK(Bpw.quad(ones, ones) == doctest::Approx(pw.l1_norm(1.0)).epsilon(2e-3));
}

TEST_CASE("parallel and serial assemblies agree bitwise") {
    AnnularDomain d;
    d.outline = RadialOutline{1.5, {0.0, 0.3}, {}};
    d.hole_radius = 0.5;
    const Mesh m = polar_mesh(d, 10, 96);
    const SymSparse a = stiffness(m), b = stiffness_serial(m);
    CHECK(a.row_ptr == b.row_ptr);
    CHECK(a.col_idx == b.col_idx);
    CHECK(a.values == b.values);
    const SymSparse c = volume_mass(m), e = volume_mass_serial(m);
    CHECK(c.values == e.values);
}

TEST_CASE("Rayleigh quotient and degenerate traces") {
    const AnnularDomain d = annulus(1.0, 2.0);
    const Mesh m = polar_mesh(d, 6, 48);
    const SymSparse K = stiffness(m);
    const SymSparse B = boundary_mass(m, BoundaryTag::Inner, BetaSpec::constant(1.0),
                                      d.hole_center());
    const SymSparse Mo = boundary_mass(m, BoundaryTag::Outer);
    const DofVector ones(m.vertices.size(), 1.0);
    // constant function: quotient = m / P
    CHECK(rayleigh(K, B, Mo, ones) ==
          doctest::Approx(B.quad(ones, ones) / Mo.quad(ones, ones)).epsilon(1e-13));
    const DofVector zero(m.vertices.size(), 0.0);
    CHECK_THROWS_AS(rayleigh(K, B, Mo, zero), std::domain_error);
}

TEST_CASE("H1 distance and boundary norms") {
    const AnnularDomain d = annulus(1.0, 2.0);
    const Mesh m = polar_mesh(d, 6, 48);
    const SymSparse K = stiffness(m);
    const SymSparse Mv = volume_mass(m);
    DofVector u(m.vertices.size(), 1.0), v(m.vertices.size(), 1.0);
    CHECK(h1_distance(K, Mv, u, v) == 0.0);
    // u - v = constant 1: distance^2 = ||1||_{L2}^2 = area
    for (double& x : v) x = 0.0;
    CHECK(h1_distance(K, Mv, u, v) == doctest::Approx(std::sqrt(m.area())).epsilon(1e-13));

    const SymSparse Bi = boundary_mass(m, BoundaryTag::Inner);
    CHECK(boundary_l2(Bi, u) ==
          doctest::Approx(std::sqrt(m.boundary_length(BoundaryTag::Inner))).epsilon(1e-13));
}

TEST_CASE("inner integral row sums the boundary mass") {
    const Mesh m = polar_mesh(annulus(1.0, 2.0), 6, 48);
    const DofVector row = boundary_integral_row(m, BoundaryTag::Inner);
    const SymSparse Bi = boundary_mass(m, BoundaryTag::Inner);
    const DofVector ones(m.vertices.size(), 1.0);
    const DofVector bi1 = Bi.multiply(ones);
    for (std::size_t i = 0; i < row.size(); ++i)
        CHECK(row[i] == doctest::Approx(bi1[i]).epsilon(1e-14));
    double total = 0.0;
    for (double x : row) total += x;
    CHECK(total == doctest::Approx(m.boundary_length(BoundaryTag::Inner)).epsilon(1e-13));
}

TEST_CASE("degenerate triangles are rejected") {
    Mesh m;
    m.vertices = {{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
    m.triangles = {{0, 1, 2}};
    CHECK_THROWS(stiffness(m));
}
