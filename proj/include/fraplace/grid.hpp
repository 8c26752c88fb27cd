#pragma once

#include <vector>

namespace frap {

// Uniform interior grid on the interval (lo, hi). Nodes exclude the
// endpoints, so the distance to the complement is positive everywhere and
// the homogeneous exterior condition enters only through the kernel tail.
struct Grid {
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;                 // interior node count
    double h = 0.0;            // spacing = (hi - lo) / (n + 1)
    std::vector<double> nodes; // x_i = lo + i h, i = 1..n
    std::vector<double> dist;  // d_i = min(x_i - lo, hi - x_i)
};

Grid build_grid(double lo, double hi, int n);

// d_i^s per node, s in (0,1).
std::vector<double> boundary_power(const Grid& grid, double s);

// Product grid on the open rectangle (lo_x,hi_x) x (lo_y,hi_y),
// row-major node indexing: node(ix, iy) = iy * nx + ix.
struct RectGrid {
    double lo_x = 0.0, hi_x = 0.0, lo_y = 0.0, hi_y = 0.0;
    int nx = 0, ny = 0;
    double hx = 0.0, hy = 0.0;
    std::vector<double> x, y;  // flat coordinates, length nx * ny
    std::vector<double> dist;  // distance to the rectangle's complement
};

RectGrid build_rect_grid(double lo_x, double hi_x, int nx,
                         double lo_y, double hi_y, int ny);

} // namespace frap
