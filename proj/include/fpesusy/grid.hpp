#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "fpesusy/error.hpp"

namespace fpesusy {

/// Uniform tensor grid. `nx` and `nt` count nodes, so a grid with nt = 1
/// has a single time level at t_start and an evolution over it takes nt - 1
/// steps.
struct Grid {
    double x_min = -4.0;
    double x_max = 4.0;
    std::size_t nx = 161;
    double t_start = 0.25;
    double t_end = 2.0;
    std::size_t nt = 15;

    void validate() const {
        if (nx < 3) throw Error("grid needs nx >= 3");
        if (nt < 1) throw Error("grid needs nt >= 1");
        if (!(x_max > x_min)) throw Error("grid needs x_max > x_min");
        if (nt > 1 && !(t_end > t_start)) throw Error("grid needs t_end > t_start");
        if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(t_start) ||
            !std::isfinite(t_end)) {
            throw Error("grid bounds must be finite");
        }
    }

    double dx() const { return (x_max - x_min) / static_cast<double>(nx - 1); }
    double dt() const { return nt > 1 ? (t_end - t_start) / static_cast<double>(nt - 1) : 0.0; }
    double x(std::size_t i) const { return i + 1 == nx ? x_max : x_min + dx() * i; }
    double t(std::size_t n) const { return n + 1 == nt && nt > 1 ? t_end : t_start + dt() * n; }

    /// Diffusion number dt/dx^2 of the grid.
    double mesh_ratio() const { return dt() / (dx() * dx()); }

    std::vector<double> xs() const {
        std::vector<double> v(nx);
        for (std::size_t i = 0; i < nx; ++i) v[i] = x(i);
        return v;
    }
};

/// Node values at one time level.
struct GridFunction {
    Grid grid;
    double time = 0.0;
    std::vector<double> values;

    void validate() const {
        if (values.size() != grid.nx) throw Error("grid function length differs from nx");
        for (double v : values) {
            if (!std::isfinite(v)) throw NumericsError("grid function holds a non-finite value");
        }
    }
};

}  // namespace fpesusy
