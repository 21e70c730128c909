// Timing comparison of the OpenMP element-loop assembly against the serial
// reference, plus a bitwise equality check of the assembled matrices.
#include <chrono>
#include <cmath>
#include <cstdio>

#include "steklov/assembly.hpp"
#include "steklov/geometry.hpp"
#include "steklov/mesh.hpp"

using namespace steklov;

namespace {

template <typename F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

bool identical(const SymSparse& a, const SymSparse& b) {
    return a.n == b.n && a.row_ptr == b.row_ptr && a.col_idx == b.col_idx &&
           a.values == b.values;
}

}  // namespace

int main(int argc, char** argv) {
    int refine = argc > 1 ? std::atoi(argv[1]) : 2;
    AnnularDomain domain;
    domain.outline = RadialOutline{2.0, {}, {}};
    domain.hole_radius = 1.0;
    Mesh mesh = polar_mesh(domain, 24, 192);
    for (int i = 0; i < refine; ++i) mesh = uniform_refine(mesh, domain);
    std::printf("mesh: %zu vertices, %zu triangles\n", mesh.vertices.size(),
                mesh.triangles.size());

    const int reps = 5;
    SymSparse kp, ks, mp, ms;
    const double t_kp = time_best_of(reps, [&] { kp = stiffness(mesh); });
    const double t_ks = time_best_of(reps, [&] { ks = stiffness_serial(mesh); });
    const double t_mp = time_best_of(reps, [&] { mp = volume_mass(mesh); });
    const double t_ms = time_best_of(reps, [&] { ms = volume_mass_serial(mesh); });

    std::printf("stiffness   parallel %.4f s   serial %.4f s   speedup %.2fx   %s\n", t_kp, t_ks,
                t_ks / t_kp, identical(kp, ks) ? "bitwise equal" : "MISMATCH");
    std::printf("volume mass parallel %.4f s   serial %.4f s   speedup %.2fx   %s\n", t_mp, t_ms,
                t_ms / t_mp, identical(mp, ms) ? "bitwise equal" : "MISMATCH");
    return (identical(kp, ks) && identical(mp, ms)) ? 0 : 1;
}
