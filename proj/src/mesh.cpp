#include "steklov/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace steklov {

using std::numbers::pi;

namespace {

double signed_area(const std::array<double, 2>& a, const std::array<double, 2>& b,
                   const std::array<double, 2>& c) {
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

}  // namespace

double Mesh::max_edge_length() const {
    double h = 0.0;
    for (const auto& t : triangles) {
        for (int e = 0; e < 3; ++e) {
            const auto& a = vertices[t[e]];
            const auto& b = vertices[t[(e + 1) % 3]];
            h = std::max(h, std::hypot(b[0] - a[0], b[1] - a[1]));
        }
    }
    return h;
}

double Mesh::area() const {
    double sum = 0.0;
    for (const auto& t : triangles)
        sum += signed_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
    return sum;
}

double Mesh::boundary_length(BoundaryTag tag) const {
    double sum = 0.0;
    for (const auto& e : boundary_edges) {
        if (e.tag != tag) continue;
        const auto& a = vertices[e.a];
        const auto& b = vertices[e.b];
        sum += std::hypot(b[0] - a[0], b[1] - a[1]);
    }
    return sum;
}

std::vector<int> Mesh::tagged_vertices(BoundaryTag tag) const {
    std::set<int> s;
    for (const auto& e : boundary_edges) {
        if (e.tag != tag) continue;
        s.insert(e.a);
        s.insert(e.b);
    }
    return {s.begin(), s.end()};
}

void Mesh::validate() const {
    for (const auto& t : triangles) {
        if (!(signed_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]) > 0.0))
            throw std::runtime_error("mesh: non-positive triangle area");
    }
    // Conformity: every undirected edge in at most two triangles; edges in
    // exactly one triangle must be listed as boundary edges.
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& t : triangles) {
        for (int e = 0; e < 3; ++e) {
            int a = t[e], b = t[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            ++edge_count[{a, b}];
        }
    }
    std::set<std::pair<int, int>> listed;
    for (const auto& e : boundary_edges) {
        int a = e.a, b = e.b;
        if (a > b) std::swap(a, b);
        listed.insert({a, b});
    }
    for (const auto& [edge, count] : edge_count) {
        if (count > 2) throw std::runtime_error("mesh: edge shared by > 2 triangles");
        if (count == 1 && !listed.count(edge))
            throw std::runtime_error("mesh: untagged boundary edge");
        if (count == 2 && listed.count(edge))
            throw std::runtime_error("mesh: interior edge tagged as boundary");
    }
    // Two disjoint closed loops: every boundary vertex has degree exactly 2.
    std::map<int, int> degree;
    for (const auto& e : boundary_edges) {
        ++degree[e.a];
        ++degree[e.b];
    }
    for (const auto& [v, d] : degree)
        if (d != 2) throw std::runtime_error("mesh: boundary is not a union of closed loops");
}

Mesh polar_mesh(const AnnularDomain& domain, int n_radial, int n_angular) {
    domain.validate();
    const auto& outline = domain.radial();
    if (n_radial < 2 || n_angular < 8)
        throw std::invalid_argument("polar_mesh: need n_radial >= 2 and n_angular >= 8");
    const double r = domain.hole_radius;
    for (int j = 0; j < n_angular; ++j) {
        if (!(outline.rho(2.0 * pi * j / n_angular) > r))
            throw std::invalid_argument("polar_mesh: outline does not enclose the hole");
    }

    Mesh mesh;
    mesh.vertices.reserve(static_cast<std::size_t>(n_radial + 1) * n_angular);
    for (int i = 0; i <= n_radial; ++i) {
        const double t = static_cast<double>(i) / n_radial;
        for (int j = 0; j < n_angular; ++j) {
            const double theta = 2.0 * pi * j / n_angular;
            const double rad = r + (outline.rho(theta) - r) * t;
            mesh.vertices.push_back({rad * std::cos(theta), rad * std::sin(theta)});
        }
    }
    auto idx = [n_angular](int i, int j) { return i * n_angular + (j % n_angular); };
    for (int i = 0; i < n_radial; ++i) {
        for (int j = 0; j < n_angular; ++j) {
            const int a = idx(i, j), b = idx(i + 1, j), c = idx(i + 1, j + 1), d = idx(i, j + 1);
            mesh.triangles.push_back({a, b, c});
            mesh.triangles.push_back({a, c, d});
        }
    }
    for (int j = 0; j < n_angular; ++j) {
        mesh.boundary_edges.push_back({idx(0, j), idx(0, j + 1), BoundaryTag::Inner});
        mesh.boundary_edges.push_back({idx(n_radial, j), idx(n_radial, j + 1), BoundaryTag::Outer});
    }
    return mesh;
}

namespace {

struct MeshBuilder {
    Mesh mesh;

    int add_vertex(double x, double y) {
        mesh.vertices.push_back({x, y});
        return static_cast<int>(mesh.vertices.size()) - 1;
    }
    // Adds a triangle with counterclockwise orientation regardless of the
    // order the caller supplies.
    void add_tri(int a, int b, int c) {
        if (signed_area(mesh.vertices[a], mesh.vertices[b], mesh.vertices[c]) < 0.0)
            std::swap(b, c);
        mesh.triangles.push_back({a, b, c});
    }
    void add_edge(int a, int b, BoundaryTag tag) { mesh.boundary_edges.push_back({a, b, tag}); }
};

// One dumbbell lobe: closed polar rings (disk fan or annulus) whose
// outermost layer is the unit circle with the junction arc replaced by the
// chord x = +-eps/2 carrying the shared neck nodes.
struct LobeChain {
    std::vector<int> chord;  // chord nodes bottom -> top, shared with the neck
};

LobeChain build_lobe(MeshBuilder& mb, double cx, bool junction_on_right, double eps,
                     double hole_radius, int n_r, int n_a, int ny) {
    const double alpha = std::asin(eps * eps * eps / 2.0);
    const bool has_hole = hole_radius > 0.0;
    const double r0 = has_hole ? hole_radius : 0.0;

    // Closed rings at radii strictly inside the circle.
    std::vector<std::vector<int>> rings;
    int center = -1;
    if (!has_hole) center = mb.add_vertex(cx, 0.0);
    const int first_ring = has_hole ? 0 : 1;
    for (int i = first_ring; i < n_r; ++i) {
        const double rad = r0 + (1.0 - r0) * i / n_r;
        std::vector<int> ring(n_a);
        for (int k = 0; k < n_a; ++k) {
            const double phi = 2.0 * pi * k / n_a;
            ring[k] = mb.add_vertex(cx + rad * std::cos(phi), rad * std::sin(phi));
        }
        rings.push_back(std::move(ring));
    }

    // Outer chain on the unit circle: n_a + 1 nodes, CCW. The junction slot
    // (local angle 0 on the right, pi on the left) splits into the two
    // corners at distance alpha; chain[k] partners ring node k up to the
    // slot and ring node k - 1 beyond it.
    const int slot = junction_on_right ? 0 : n_a / 2;
    std::vector<int> chain;
    for (int k = 0; k <= n_a; ++k) {
        double phi;
        if (junction_on_right) {
            if (k == 0) phi = alpha;
            else if (k == n_a) phi = 2.0 * pi - alpha;
            else phi = 2.0 * pi * k / n_a;
        } else {
            if (k == slot) phi = pi - alpha;
            else if (k == slot + 1) phi = pi + alpha;
            else phi = 2.0 * pi * (k <= slot ? k : k - 1) / n_a;
        }
        chain.push_back(mb.add_vertex(cx + std::cos(phi), std::sin(phi)));
    }
    const int up = junction_on_right ? chain.front() : chain[slot];
    const int dn = junction_on_right ? chain.back() : chain[slot + 1];

    // Interior chord nodes, shared with the adjacent neck column (bottom->top).
    const double x_chord =
        cx + (junction_on_right ? 1.0 : -1.0) * std::sqrt(1.0 - std::pow(eps, 6) / 4.0);
    std::vector<int> chord;
    chord.push_back(dn);
    for (int j = 1; j < ny; ++j) {
        const double y = -eps * eps * eps / 2.0 + eps * eps * eps * j / ny;
        chord.push_back(mb.add_vertex(x_chord, y));
    }
    chord.push_back(up);

    // Fan at the disk center.
    if (!has_hole) {
        const auto& ring1 = rings.front();
        for (int k = 0; k < n_a; ++k) mb.add_tri(center, ring1[k], ring1[(k + 1) % n_a]);
    }
    // Bands between closed rings.
    for (std::size_t i = 0; i + 1 < rings.size(); ++i) {
        const auto& lo = rings[i];
        const auto& hi = rings[i + 1];
        for (int k = 0; k < n_a; ++k) {
            const int kn = (k + 1) % n_a;
            mb.add_tri(lo[k], hi[k], hi[kn]);
            mb.add_tri(lo[k], hi[kn], lo[kn]);
        }
    }
    // Band between the last closed ring and the outer chain, skipping the
    // junction-facing cell (filled by the wedge fan below).
    const auto& ring = rings.back();
    auto partner = [&](int k) {
        if (junction_on_right) return chain[k];
        return chain[k <= slot ? k : k + 1];
    };
    const int wedge_cell = junction_on_right ? n_a - 1 : slot;
    for (int k = 0; k < n_a; ++k) {
        if (k == wedge_cell) continue;
        const int kn = (k + 1) % n_a;
        mb.add_tri(ring[k], partner(k), partner(kn));
        mb.add_tri(ring[k], partner(kn), ring[kn]);
    }
    // Wedge: fan from the ring node facing the junction over the short arc
    // piece and the chord nodes.
    if (junction_on_right) {
        // between columns (ring[n_a-1], chain[n_a-1]) and (ring[0], up)
        const int apex = ring[0];
        mb.add_tri(ring[n_a - 1], chain[n_a - 1], apex);
        mb.add_tri(chain[n_a - 1], dn, apex);
        for (std::size_t j = 0; j + 1 < chord.size(); ++j)
            mb.add_tri(apex, chord[j], chord[j + 1]);
    } else {
        // between columns (ring[slot], up) and (ring[slot+1], chain[slot+2])
        const int apex = ring[slot];
        mb.add_tri(ring[slot + 1], chain[slot + 2], apex);
        mb.add_tri(chain[slot + 2], dn, apex);
        for (std::size_t j = 0; j + 1 < chord.size(); ++j)
            mb.add_tri(apex, chord[j], chord[j + 1]);
    }

    // Boundary edges: circle arcs are Outer; the chord is an interior
    // interface; the hole ring, when present, is Inner. For the left-facing
    // junction the direct corner-to-corner chain edge is the interface and is
    // skipped; for the right-facing one the chain already ends at the corners.
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
        if (!junction_on_right && static_cast<int>(k) == slot) continue;
        mb.add_edge(chain[k], chain[k + 1], BoundaryTag::Outer);
    }
    if (!junction_on_right)
        mb.add_edge(chain[n_a], chain[0], BoundaryTag::Outer);  // closing arc through angle 0
    if (has_hole) {
        const auto& hole = rings.front();
        for (int k = 0; k < n_a; ++k)
            mb.add_edge(hole[k], hole[(k + 1) % n_a], BoundaryTag::Inner);
    }
    return {chord};
}

}  // namespace

Mesh dumbbell_mesh(double eps, double hole_radius, double h_target) {
    if (!(eps > 0.0) || eps > 0.5)
        throw std::invalid_argument("dumbbell_mesh: eps must lie in (0, 0.5]");
    if (!(hole_radius > 0.0) || hole_radius >= 1.0)
        throw std::invalid_argument("dumbbell_mesh: hole radius must lie in (0, 1)");
    const double eps3 = eps * eps * eps;
    if (h_target > eps3)
        throw std::invalid_argument(
            "dumbbell_mesh: h_target must not exceed eps^3 (neck needs >= 2 layers)");

    const int ny = std::max(2, static_cast<int>(std::lround(eps3 / h_target)));
    const int nx = std::max(8, static_cast<int>(std::lround(eps / h_target)));
    // Lobe resolution independent of the neck scale.
    const double h_lobe = std::max(h_target, 0.1);
    int n_a = std::max(16, static_cast<int>(std::lround(2.0 * pi / h_lobe)));
    if (n_a % 2) ++n_a;
    const int n_r_disk = std::max(4, static_cast<int>(std::lround(1.0 / h_lobe)));
    const int n_r_ann =
        std::max(4, static_cast<int>(std::lround((1.0 - hole_radius) / h_lobe)));

    Dumbbell db{eps};
    const double cx = db.lobe_center_x();

    MeshBuilder mb;
    // Left lobe: plain disk, junction faces +x (on its right).
    const auto left = build_lobe(mb, -cx, true, eps, 0.0, n_r_disk, n_a, ny);
    // Right lobe: annulus around the hole, junction faces -x.
    const auto right = build_lobe(mb, cx, false, eps, hole_radius, n_r_ann, n_a, ny);

    // Neck rectangle, columns i = 0..nx sharing the lobe chord nodes at the ends.
    std::vector<std::vector<int>> col(nx + 1);
    col[0] = left.chord;
    col[nx] = right.chord;
    for (int i = 1; i < nx; ++i) {
        const double x = -eps / 2.0 + eps * i / nx;
        col[i].resize(ny + 1);
        for (int j = 0; j <= ny; ++j) {
            const double y = -eps3 / 2.0 + eps3 * j / ny;
            col[i][j] = mb.add_vertex(x, y);
        }
    }
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            mb.add_tri(col[i][j], col[i + 1][j], col[i + 1][j + 1]);
            mb.add_tri(col[i][j], col[i + 1][j + 1], col[i][j + 1]);
        }
        mb.add_edge(col[i][0], col[i + 1][0], BoundaryTag::Outer);    // bottom
        mb.add_edge(col[i][ny], col[i + 1][ny], BoundaryTag::Outer);  // top
    }

    mb.mesh.validate();
    return std::move(mb.mesh);
}

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

}  // namespace

Mesh uniform_refine(const Mesh& mesh) {
    Mesh out;
    out.vertices = mesh.vertices;
    std::map<EdgeKey, int> midpoint;
    auto mid = [&](int a, int b) {
        const auto k = key(a, b);
        auto it = midpoint.find(k);
        if (it != midpoint.end()) return it->second;
        const auto& pa = out.vertices[a];
        const auto& pb = out.vertices[b];
        out.vertices.push_back({(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0});
        const int id = static_cast<int>(out.vertices.size()) - 1;
        midpoint.emplace(k, id);
        return id;
    };
    for (const auto& t : mesh.triangles) {
        const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
        out.triangles.push_back({t[0], ab, ca});
        out.triangles.push_back({ab, t[1], bc});
        out.triangles.push_back({ca, bc, t[2]});
        out.triangles.push_back({ab, bc, ca});
    }
    for (const auto& e : mesh.boundary_edges) {
        const int m = mid(e.a, e.b);
        out.boundary_edges.push_back({e.a, m, e.tag});
        out.boundary_edges.push_back({m, e.b, e.tag});
    }
    return out;
}

Mesh uniform_refine(const Mesh& mesh, const AnnularDomain& domain) {
    Mesh out = uniform_refine(mesh);
    const auto center = domain.hole_center();
    const double r = domain.hole_radius;

    // Collect old boundary edges' midpoints: in the refined mesh these are the
    // vertices with index >= old vertex count that sit on boundary edges.
    const int n_old = static_cast<int>(mesh.vertices.size());
    auto project_circle = [&](std::array<double, 2>& p, double ccx, double ccy, double rad) {
        const double dx = p[0] - ccx, dy = p[1] - ccy;
        const double len = std::hypot(dx, dy);
        p = {ccx + rad * dx / len, ccy + rad * dy / len};
    };
    for (const auto& e : out.boundary_edges) {
        for (int v : {e.a, e.b}) {
            if (v < n_old) continue;  // only new midpoints move
            auto& p = out.vertices[v];
            if (e.tag == BoundaryTag::Inner) {
                project_circle(p, center[0], center[1], r);
            } else if (const auto* radial = std::get_if<RadialOutline>(&domain.outline)) {
                const double theta = std::atan2(p[1], p[0]);
                const double rho = radial->rho(theta);
                p = {rho * std::cos(theta), rho * std::sin(theta)};
            } else if (const auto* db = std::get_if<Dumbbell>(&domain.outline)) {
                // Project onto a lobe circle only when the point is near one;
                // neck top/bottom sides stay straight.
                const double cx = db->lobe_center_x();
                if (std::abs(p[0]) > db->eps / 2.0) {
                    const double dl = std::abs(std::hypot(p[0] + cx, p[1]) - 1.0);
                    const double dr = std::abs(std::hypot(p[0] - cx, p[1]) - 1.0);
                    const double sign = dl < dr ? -1.0 : 1.0;
                    if (std::min(dl, dr) < 0.5) project_circle(p, sign * cx, 0.0, 1.0);
                }
            }
        }
    }
    return out;
}

std::pair<double, double> mesh_quality(const Mesh& mesh) {
    double min_angle = 180.0;
    for (const auto& t : mesh.triangles) {
        for (int e = 0; e < 3; ++e) {
            const auto& a = mesh.vertices[t[e]];
            const auto& b = mesh.vertices[t[(e + 1) % 3]];
            const auto& c = mesh.vertices[t[(e + 2) % 3]];
            const double ux = b[0] - a[0], uy = b[1] - a[1];
            const double vx = c[0] - a[0], vy = c[1] - a[1];
            const double cosang = (ux * vx + uy * vy) /
                                  (std::hypot(ux, uy) * std::hypot(vx, vy));
            min_angle = std::min(min_angle,
                                 std::acos(std::clamp(cosang, -1.0, 1.0)) * 180.0 / pi);
        }
    }
    return {min_angle, mesh.max_edge_length()};
}

std::string write_mesh(const Mesh& mesh) {
    std::string out = "annular-mesh v1\n";
    char buf[128];
    std::snprintf(buf, sizeof buf, "%zu %zu %zu\n", mesh.vertices.size(),
                  mesh.triangles.size(), mesh.boundary_edges.size());
    out += buf;
    for (const auto& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v[0], v[1]);
        out += buf;
    }
    for (const auto& t : mesh.triangles) {
        std::snprintf(buf, sizeof buf, "%d %d %d\n", t[0], t[1], t[2]);
        out += buf;
    }
    for (const auto& e : mesh.boundary_edges) {
        std::snprintf(buf, sizeof buf, "%d %d %s\n", e.a, e.b,
                      e.tag == BoundaryTag::Inner ? "inner" : "outer");
        out += buf;
    }
    return out;
}

Mesh read_mesh(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& what) {
        throw std::runtime_error("mesh parse error at line " + std::to_string(lineno) +
                                 ": " + what);
    };
    auto next_line = [&]() {
        if (!std::getline(in, line)) fail("unexpected end of file");
        ++lineno;
    };
    next_line();
    if (line != "annular-mesh v1") fail("bad header");
    next_line();
    std::size_t nv, nt, ne;
    if (std::sscanf(line.c_str(), "%zu %zu %zu", &nv, &nt, &ne) != 3) fail("bad counts");
    Mesh mesh;
    mesh.vertices.resize(nv);
    for (auto& v : mesh.vertices) {
        next_line();
        if (std::sscanf(line.c_str(), "%lg %lg", &v[0], &v[1]) != 2) fail("bad vertex");
    }
    mesh.triangles.resize(nt);
    for (auto& t : mesh.triangles) {
        next_line();
        if (std::sscanf(line.c_str(), "%d %d %d", &t[0], &t[1], &t[2]) != 3)
            fail("bad triangle");
        for (int v : t)
            if (v < 0 || static_cast<std::size_t>(v) >= nv) fail("triangle index out of range");
    }
    mesh.boundary_edges.resize(ne);
    for (auto& e : mesh.boundary_edges) {
        next_line();
        char tag[16];
        if (std::sscanf(line.c_str(), "%d %d %15s", &e.a, &e.b, tag) != 3) fail("bad edge");
        if (std::string(tag) == "inner") e.tag = BoundaryTag::Inner;
        else if (std::string(tag) == "outer") e.tag = BoundaryTag::Outer;
        else fail("unknown edge tag");
    }
    return mesh;
}

}  // namespace steklov
