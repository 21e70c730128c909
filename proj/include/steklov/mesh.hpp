#pragma once

#include <array>
#include <string>
#include <vector>

#include "steklov/geometry.hpp"

namespace steklov {

enum class BoundaryTag { Inner, Outer };

struct BoundaryEdge {
    int a;
    int b;
    BoundaryTag tag;
};

// Conforming triangle mesh of an annular domain. Triangles are
// counterclockwise; boundary edges form two closed loops (hole and outer
// outline).
struct Mesh {
    std::vector<std::array<double, 2>> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<BoundaryEdge> boundary_edges;

    double max_edge_length() const;
    double area() const;
    double boundary_length(BoundaryTag tag) const;
    // Sorted unique vertex indices on the tagged boundary.
    std::vector<int> tagged_vertices(BoundaryTag tag) const;

    // Positive areas, conformity, and two disjoint boundary loops.
    void validate() const;
};

// Mapped tensor-product mesh of a radial-outline annular domain: n_angular
// spokes, n_radial layers blended between the hole circle and the outline.
Mesh polar_mesh(const AnnularDomain& domain, int n_radial, int n_angular);

// Block-structured mesh of the dumbbell domain: disk lobe, neck rectangle
// and annular lobe stitched with exactly shared interface nodes. h_target
// controls the neck resolution and must not exceed eps^3 (at least two
// element layers across the neck).
Mesh dumbbell_mesh(double eps, double hole_radius, double h_target);

// Red refinement (each triangle into 4). The overload taking the domain
// re-projects new boundary nodes onto the exact hole circle / outline.
Mesh uniform_refine(const Mesh& mesh);
Mesh uniform_refine(const Mesh& mesh, const AnnularDomain& domain);

// (min angle in degrees, max edge length)
std::pair<double, double> mesh_quality(const Mesh& mesh);

// Text format: "annular-mesh v1", then "nv nt ne", nv lines "x y",
// nt lines "i j k" (0-based), ne lines "a b tag" with tag inner|outer.
std::string write_mesh(const Mesh& mesh);
Mesh read_mesh(const std::string& text);

}  // namespace steklov
