#include "fraplace/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace frap {

Grid build_grid(double lo, double hi, int n) {
    if (!(hi > lo))
        throw std::invalid_argument("build_grid: hi must exceed lo (got lo=" +
                                    std::to_string(lo) + ", hi=" + std::to_string(hi) + ")");
    if (n < 2)
        throw std::invalid_argument("build_grid: n must be >= 2 (got " + std::to_string(n) + ")");

    Grid g;
    g.lo = lo;
    g.hi = hi;
    g.n = n;
    g.h = (hi - lo) / static_cast<double>(n + 1);
    g.nodes.resize(n);
    g.dist.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = lo + static_cast<double>(i + 1) * g.h;
        g.nodes[i] = x;
        g.dist[i] = std::min(x - lo, hi - x);
    }
    return g;
}

std::vector<double> boundary_power(const Grid& grid, double s) {
    if (!(s > 0.0 && s < 1.0))
        throw std::invalid_argument("boundary_power: s must lie in (0,1) (got " +
                                    std::to_string(s) + ")");
    std::vector<double> out(grid.dist.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::pow(grid.dist[i], s);
    return out;
}

RectGrid build_rect_grid(double lo_x, double hi_x, int nx,
                         double lo_y, double hi_y, int ny) {
    if (!(hi_x > lo_x) || !(hi_y > lo_y))
        throw std::invalid_argument("build_rect_grid: need hi > lo on both axes");
    if (nx < 2 || ny < 2)
        throw std::invalid_argument("build_rect_grid: need nx, ny >= 2");

    RectGrid g;
    g.lo_x = lo_x; g.hi_x = hi_x; g.lo_y = lo_y; g.hi_y = hi_y;
    g.nx = nx; g.ny = ny;
    g.hx = (hi_x - lo_x) / static_cast<double>(nx + 1);
    g.hy = (hi_y - lo_y) / static_cast<double>(ny + 1);
    const int n = nx * ny;
    g.x.resize(n);
    g.y.resize(n);
    g.dist.resize(n);
    for (int iy = 0; iy < ny; ++iy) {
        const double yv = lo_y + static_cast<double>(iy + 1) * g.hy;
        for (int ix = 0; ix < nx; ++ix) {
            const double xv = lo_x + static_cast<double>(ix + 1) * g.hx;
            const int idx = iy * nx + ix;
            g.x[idx] = xv;
            g.y[idx] = yv;
            g.dist[idx] = std::min(std::min(xv - lo_x, hi_x - xv),
                                   std::min(yv - lo_y, hi_y - yv));
        }
    }
    return g;
}

} // namespace frap
