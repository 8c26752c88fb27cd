#pragma once

#include <limits>
#include <span>
#include <vector>

#include "fraplace/grid.hpp"

namespace frap {

// Grid function; identified with its 0-extension outside the domain.
using Field = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// |t|^{p-2} t, with j_p(0) = 0 for every p > 1 (limit convention).
double jp(double p, double t);

// |t|^p with fast paths for the half-integer exponents used throughout.
double pow_abs(double t, double p);

// Pairwise interaction weights plus analytic exterior-tail coefficients for
// the discrete Gagliardo energy
//   E(u) = sum_{i != j} |u_i - u_j|^p w_ij + sum_i |u_i|^p kappa_i.
// Carries the geometry digest (node measure, boundary distances) every
// downstream operation needs, so 1D and 2D assemblies share one type.
struct Kernel {
    double s = 0.0;
    double p = 0.0;
    int n = 0;
    double measure = 0.0;        // uniform node measure: h in 1D, hx*hy in 2D
    std::vector<double> weights; // n*n row-major, symmetric, zero diagonal
    std::vector<double> tail;    // kappa_i > 0
    std::vector<double> dist;    // distance to complement per node

    double w(int i, int j) const { return weights[static_cast<std::size_t>(i) * n + j]; }
};

Kernel assemble_kernel(const Grid& grid, double s, double p);
Kernel assemble_kernel(const RectGrid& grid, double s, double p);

double gagliardo_energy(const Kernel& kernel, const Field& u, int workers = 1);

// Gradient of E(u)/p:  g_i = 2 sum_{j != i} j_p(u_i - u_j) w_ij + j_p(u_i) kappa_i.
// Satisfies the duality identity sum_i g_i u_i = E(u).
Field apply_operator(const Kernel& kernel, const Field& u, int workers = 1);

// Slack of the discrete Picone inequality
//   j_p(a-b) (c^p / a^{p-1} - d^p / b^{p-1}) <= |c-d|^p,
// nonnegative for a, b > 0 and c, d >= 0.
double picone_gap(double p, double a, double b, double c, double d);

// (sum_i |u_i|^q h)^{1/q}; q = kInf gives max_i |u_i|.
double lp_norm(const Grid& grid, const Field& u, double q);

// Same norm over an arbitrary uniform measure (shared by 1D and 2D paths).
double lp_norm_measure(double measure, const Field& u, double q);

} // namespace frap
