// Minimal library use: the N = 2 and N = 3 Veronese surfaces on a small grid.

#include <cpnsurf/cpnsurf.hpp>

#include <cstdio>

int main()
{
    using namespace cpnsurf;

    GridSpec grid;
    grid.n_re = grid.n_im = 5;

    SurfaceGrid const sphere = build_surface_grid(veronese(2), 0, grid);
    for (auto const& p : sphere.points) {
        std::printf("xi = %+.2f%+.2fi  |x| = %.12f  K = %.10f\n", p.xi.real(), p.xi.imag(), p.x.norm(), p.K);
    }

    SurfaceGrid const level1 = build_surface_grid(veronese(3), 1, grid);
    auto const xs = level1.coordinates();
    std::printf("veronese(3), k = 1: %zu points in R^8, affine span rank %d, K = %.10f\n", xs.size(), span_rank(xs),
                level1.points.front().K);
}
