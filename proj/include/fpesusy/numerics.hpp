#pragma once

// Independent oracles. Nothing here reads analytic jets: fields are only
// sampled through their values.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fpesusy/field.hpp"
#include "fpesusy/grid.hpp"

namespace fpesusy::numerics {

/// Samples f(., t) on the spatial nodes of `grid`.
inline GridFunction sample(const Field& f, const Grid& grid, double t) {
    GridFunction g{grid, t, std::vector<double>(grid.nx)};
    for (std::size_t i = 0; i < grid.nx; ++i) g.values[i] = f.value(grid.x(i), t);
    return g;
}

/// Solves a tridiagonal system in place (Thomas algorithm).
/// a: sub-diagonal (a[0] unused), b: diagonal, c: super-diagonal (c[n-1] unused).
inline void solve_tridiagonal(std::vector<double> a, std::vector<double> b, std::vector<double> c,
                              std::vector<double>& rhs) {
    const std::size_t n = b.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            const double m = a[i] / b[i - 1];
            b[i] -= m * c[i - 1];
            rhs[i] -= m * rhs[i - 1];
        }
        if (!(std::abs(b[i]) > 0.0) || !std::isfinite(b[i])) {
            throw NumericsError("tridiagonal solve hit a zero pivot at row " + std::to_string(i));
        }
    }
    rhs[n - 1] /= b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - c[i] * rhs[i + 1]) / b[i];
}

struct Evolution {
    std::vector<GridFunction> levels;
    std::vector<std::string> warnings;
};

/// Crank-Nicolson evolution of dP/dt = -d/dx (D1 P) + d^2P/dx^2 with
/// homogeneous Dirichlet ends. The drift flux uses centered differences and
/// is evaluated at the half step t + dt/2. Returns every time level of the
/// grid, starting with the initial data.
inline Evolution evolve_fpe(const GridFunction& init, const Field& drift, const Grid& grid) {
    grid.validate();
    init.validate();
    if (init.grid.nx != grid.nx || init.grid.x_min != grid.x_min || init.grid.x_max != grid.x_max) {
        throw Error("initial data lives on a different spatial grid");
    }
    Evolution out;
    if (grid.mesh_ratio() > 10.0) {
        out.warnings.push_back("dt/dx^2 = " + std::to_string(grid.mesh_ratio()) +
                               " exceeds 10; Crank-Nicolson may ring on rough data");
    }
    const std::size_t nx = grid.nx;
    const std::size_t m = nx - 2;  // interior unknowns
    const double h = grid.dx();
    const double dt = grid.dt();
    const double inv_h2 = 1.0 / (h * h);
    const double inv_2h = 0.5 / h;
    const std::vector<double> xs = grid.xs();

    std::vector<double> p = init.values;
    p.front() = 0.0;
    p.back() = 0.0;
    out.levels.push_back({grid, grid.t_start, p});

    std::vector<double> d(nx), lo(m), di(m), up(m), rhs(m);
    for (std::size_t n = 1; n < grid.nt; ++n) {
        const double t_half = grid.t(n - 1) + 0.5 * dt;
        for (std::size_t i = 0; i < nx; ++i) {
            d[i] = drift.value(xs[i], t_half);
            if (!std::isfinite(d[i])) {
                throw NumericsError("drift is not finite at x=" + std::to_string(xs[i]));
            }
        }
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t i = j + 1;
            // L P_i = l P_{i-1} + c P_i + u P_{i+1}
            const double l = d[i - 1] * inv_2h + inv_h2;
            const double c = -2.0 * inv_h2;
            const double u = -d[i + 1] * inv_2h + inv_h2;
            lo[j] = -0.5 * dt * l;
            di[j] = 1.0 - 0.5 * dt * c;
            up[j] = -0.5 * dt * u;
            rhs[j] = p[i] + 0.5 * dt * (l * p[i - 1] + c * p[i] + u * p[i + 1]);
        }
        solve_tridiagonal(lo, di, up, rhs);
        for (std::size_t j = 0; j < m; ++j) p[j + 1] = rhs[j];
        out.levels.push_back({grid, grid.t(n), p});
    }
    return out;
}

/// Composite Simpson rule over uniformly spaced samples; an even sample
/// count closes with Simpson's 3/8 rule on the last three intervals.
inline double simpson(std::span<const double> y, double h) {
    const std::size_t n = y.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * h * (y[0] + y[1]);
    if (n == 4) return 3.0 * h / 8.0 * (y[0] + 3 * y[1] + 3 * y[2] + y[3]);
    std::size_t end = n;
    double tail = 0.0;
    if (n % 2 == 0) {
        end = n - 3;
        tail = 3.0 * h / 8.0 * (y[n - 4] + 3 * y[n - 3] + 3 * y[n - 2] + y[n - 1]);
    }
    double s = y[0] + y[end - 1];
    for (std::size_t i = 1; i + 1 < end; ++i) s += (i % 2 ? 4.0 : 2.0) * y[i];
    return s * h / 3.0 + tail;
}

inline double quadrature(const GridFunction& f) { return simpson(f.values, f.grid.dx()); }

/// Integral of f(., t) over [x_min, x_max] with n Simpson nodes.
inline double quadrature(const Field& f, double t, double x_min, double x_max,
                         std::size_t n = 4001) {
    Grid g{x_min, x_max, n, t, t, 1};
    return quadrature(sample(f, g, t));
}

struct Comparison {
    double fitted_scalar = 0.0;
    double l_inf_rel = 0.0;
    std::size_t masked_points = 0;

    bool passed(double tol) const { return l_inf_rel < tol; }
};

/// Best scalar s minimizing sum (f - s g)^2, and max |f - s g| / max |f|,
/// both over points where |g| > mask_threshold * max |g|.
inline Comparison compare(std::span<const double> f, std::span<const double> g,
                          double mask_threshold = 1e-12) {
    if (f.size() != g.size()) throw Error("compare needs equally sized samples");
    double gmax = 0.0;
    for (double v : g) gmax = std::max(gmax, std::abs(v));
    if (gmax == 0.0) throw NumericsError("compare against an all-zero reference");
    const double cut = mask_threshold * gmax;
    double fg = 0.0, gg = 0.0, fmax = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (std::abs(g[i]) <= cut) continue;
        fg += f[i] * g[i];
        gg += g[i] * g[i];
        fmax = std::max(fmax, std::abs(f[i]));
        ++count;
    }
    Comparison c;
    c.fitted_scalar = fg / gg;
    c.masked_points = count;
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (std::abs(g[i]) <= cut) continue;
        worst = std::max(worst, std::abs(f[i] - c.fitted_scalar * g[i]));
    }
    c.l_inf_rel = fmax > 0.0 ? worst / fmax : worst;
    return c;
}

/// compare() over every node of a space-time grid.
inline Comparison compare(const Field& f, const Field& g, const Grid& grid,
                          double mask_threshold = 1e-12) {
    grid.validate();
    std::vector<double> a, b;
    a.reserve(grid.nx * grid.nt);
    b.reserve(grid.nx * grid.nt);
    for (std::size_t n = 0; n < grid.nt; ++n) {
        for (std::size_t i = 0; i < grid.nx; ++i) {
            a.push_back(f.value(grid.x(i), grid.t(n)));
            b.push_back(g.value(grid.x(i), grid.t(n)));
        }
    }
    return compare(a, b, mask_threshold);
}

/// Relative spread (max - min) / |mean| of f/g over nodes with |g| > mask_abs.
inline double ratio_spread(const Field& f, const Field& g, const Grid& grid,
                           double mask_abs = 1e-12) {
    double lo = INFINITY, hi = -INFINITY, sum = 0.0;
    std::size_t count = 0;
    for (std::size_t n = 0; n < grid.nt; ++n) {
        for (std::size_t i = 0; i < grid.nx; ++i) {
            const double gv = g.value(grid.x(i), grid.t(n));
            if (std::abs(gv) <= mask_abs) continue;
            const double r = f.value(grid.x(i), grid.t(n)) / gv;
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            sum += r;
            ++count;
        }
    }
    if (count == 0) throw NumericsError("ratio_spread: every node is masked");
    return (hi - lo) / std::abs(sum / static_cast<double>(count));
}

/// Max-norm distance between a grid function and a field at its time level.
inline double max_error(const GridFunction& f, const Field& exact) {
    double e = 0.0;
    for (std::size_t i = 0; i < f.grid.nx; ++i) {
        e = std::max(e, std::abs(f.values[i] - exact.value(f.grid.x(i), f.time)));
    }
    return e;
}

/// Gauss-Hermite rule for weight e^{-xi^2} (Golub-Welsch).
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussRule gauss_hermite(std::size_t n) {
    if (n == 0) throw NumericsError("Gauss-Hermite rule needs at least one node");
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                   static_cast<Eigen::Index>(n));
    for (std::size_t k = 1; k < n; ++k) {
        const double b = std::sqrt(0.5 * static_cast<double>(k));
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    if (es.info() != Eigen::Success) throw NumericsError("Gauss-Hermite eigensolve failed");
    // Eigenvector weights lose relative accuracy at the outer nodes; polish
    // each node with Newton on h_n and take w = 1 / sum_k h_k(x)^2.
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    std::vector<double> h(n + 1);
    auto eval = [&](double x) {
        h[0] = std::pow(std::numbers::pi, -0.25);
        h[1] = std::sqrt(2.0) * x * h[0];
        for (std::size_t k = 1; k < n; ++k) {
            const double kk = static_cast<double>(k);
            h[k + 1] = std::sqrt(2.0 / (kk + 1.0)) * x * h[k] - std::sqrt(kk / (kk + 1.0)) * h[k - 1];
        }
    };
    for (std::size_t i = 0; i < n; ++i) {
        double x = es.eigenvalues()(static_cast<Eigen::Index>(i));
        for (int it = 0; it < 3; ++it) {
            eval(x);
            const double d = std::sqrt(2.0 * static_cast<double>(n)) * h[n - 1];
            if (d == 0.0) break;
            x -= h[n] / d;
        }
        eval(x);
        double sum = 0.0;
        for (std::size_t k = 0; k < n; ++k) sum += h[k] * h[k];
        r.nodes[i] = x;
        r.weights[i] = 1.0 / sum;
    }
    return r;
}

}  // namespace fpesusy::numerics
