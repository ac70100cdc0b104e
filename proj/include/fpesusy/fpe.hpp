#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "fpesusy/field.hpp"
#include "fpesusy/grid.hpp"
#include "fpesusy/report.hpp"

namespace fpesusy {

/// Drift D1 = -2 W' of a prepotential.
inline Field drift_from_prepotential(const Field& w) {
    return scale(dx(w), -2.0).renamed("-2 d/dx " + w.name());
}

/// Fokker-Planck problem  dP/dt = -d/dx (D1 P) + d^2P/dx^2  with unit diffusion.
struct FpeProblem {
    Field prepotential;
    Field drift;
    std::string drift_label;

    static FpeProblem from_prepotential(const Field& w, std::string label = {}) {
        return {w, drift_from_prepotential(w), label.empty() ? "-2W' with W=" + w.name() : label};
    }

    static constexpr double diffusion = 1.0;

    const Domain& domain() const { return prepotential.domain(); }
};

enum class PotentialConvention {
    minus,       ///< W'^2 - W'' - dW/dt (FPE-associated)
    plus,        ///< W'^2 + W'' + dW/dt (Darboux partner of an auxiliary)
    transformed  ///< V - 2 (ln psi0)'' built from another potential
};

inline const char* to_string(PotentialConvention c) {
    switch (c) {
        case PotentialConvention::minus: return "minus";
        case PotentialConvention::plus: return "plus";
        case PotentialConvention::transformed: return "transformed";
    }
    return "?";
}

/// Potential of  alpha dpsi/dt = -psi'' + V psi.
struct SchrodingerPotential {
    Field V;
    PotentialConvention convention;
    double alpha = -1.0;
    std::optional<Field> source;  ///< prepotential V was built from, if any
};

namespace detail {

inline Field potential(const Field& w, double sign) {
    return Field(
        [w, sign](double x, double t) {
            const Jet j = w(x, t);
            const double v = j.x() * j.x() + sign * (j.xx() + j.t());
            return Jet(v, 0, 0, 0, 0, 0, JetDepth{0, false, false});
        },
        w.domain(), (sign < 0 ? "V-[" : "V+[") + w.name() + "]", JetDepth{0, false, false});
}

}  // namespace detail

/// V = W'^2 - W'' - dW/dt.
inline SchrodingerPotential potential_minus(const Field& w) {
    if (w.depth().x < 2 || !w.depth().t) {
        throw JetDepthError("potential needs W'' and dW/dt of '" + w.name() + "'");
    }
    return {detail::potential(w, -1.0), PotentialConvention::minus, -1.0, w};
}

/// V = W'^2 + W'' + dW/dt.
inline SchrodingerPotential potential_plus(const Field& w) {
    if (w.depth().x < 2 || !w.depth().t) {
        throw JetDepthError("potential needs W'' and dW/dt of '" + w.name() + "'");
    }
    return {detail::potential(w, +1.0), PotentialConvention::plus, -1.0, w};
}

/// psi = e^{W} P.
inline Field gauge_to_schrodinger(const Field& p, const Field& w) {
    return mul(exp(w), p).renamed("e^{W}" + p.name());
}

/// P = e^{-W} psi.
inline Field gauge_from_schrodinger(const Field& psi, const Field& w) {
    return mul(exp_neg(w), psi).renamed("e^{-W}" + psi.name());
}

enum class ResidualMode {
    analytic,  ///< from the jets the field carries
    stencil    ///< fourth-order central differences of the values alone
};

namespace detail {

inline void require_inside(const Domain& d, const Grid& g, const std::string& what) {
    const double t_last = g.t(g.nt - 1);
    if (!d.contains(g.x_min, g.t_start) || !d.contains(g.x_max, t_last)) {
        throw DomainError("grid leaves the domain of " + what);
    }
}

/// Fourth-order central first and second derivatives from five samples.
struct Stencil {
    double d1, d2;
};

inline Stencil stencil5(double fm2, double fm1, double f0, double fp1, double fp2, double h) {
    return {(fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h),
            (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h)};
}

inline double stencil_step(double at) { return 1e-3 * std::max(1.0, std::abs(at)); }

template <class PointFn>
ResidualReport sweep(const Grid& g, PointFn fn) {
    g.validate();
    ResidualAccumulator acc;
    for (std::size_t n = 0; n < g.nt; ++n) {
        const double t = g.t(n);
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double x = g.x(i);
            acc.add(fn(x, t), x, t);
        }
    }
    return acc.finish(g.nx, g.nt);
}

}  // namespace detail

/// Residual r = dP/dt + d/dx (D1 P) - d^2P/dx^2 over the grid.
inline ResidualReport fpe_residual(const Field& p, const FpeProblem& prob, const Grid& grid,
                                   ResidualMode mode = ResidualMode::analytic) {
    detail::require_inside(p.domain(), grid, p.name());
    detail::require_inside(prob.drift.domain(), grid, prob.drift.name());
    const Field& drift = prob.drift;
    if (mode == ResidualMode::analytic) {
        if (p.depth().x < 2 || !p.depth().t) {
            throw JetDepthError("fpe_residual needs P_xx and P_t of '" + p.name() + "'");
        }
        if (drift.depth().x < 1) throw JetDepthError("fpe_residual needs the drift's x-derivative");
        return detail::sweep(grid, [&](double x, double t) {
            const Jet pj = p(x, t);
            const Jet dj = drift(x, t);
            return pj.t() + dj.x() * pj.v() + dj.v() * pj.x() - pj.xx();
        });
    }
    return detail::sweep(grid, [&](double x, double t) {
        const double h = detail::stencil_step(x);
        const double k = detail::stencil_step(t);
        double pv[5], flux[5];
        for (int s = -2; s <= 2; ++s) {
            const double xs = x + s * h;
            pv[s + 2] = p.value(xs, t);
            flux[s + 2] = drift.value(xs, t) * pv[s + 2];
        }
        const auto px = detail::stencil5(pv[0], pv[1], pv[2], pv[3], pv[4], h);
        const auto fx = detail::stencil5(flux[0], flux[1], flux[2], flux[3], flux[4], h);
        const auto pt = detail::stencil5(p.value(x, t - 2 * k), p.value(x, t - k), pv[2],
                                         p.value(x, t + k), p.value(x, t + 2 * k), k);
        return pt.d1 + fx.d1 - px.d2;
    });
}

/// Residual r = alpha dpsi/dt + psi'' - V psi over the grid.
inline ResidualReport schrodinger_residual(const Field& psi, const SchrodingerPotential& pot,
                                           const Grid& grid,
                                           ResidualMode mode = ResidualMode::analytic) {
    detail::require_inside(psi.domain(), grid, psi.name());
    detail::require_inside(pot.V.domain(), grid, pot.V.name());
    const double alpha = pot.alpha;
    if (mode == ResidualMode::analytic) {
        if (psi.depth().x < 2 || !psi.depth().t) {
            throw JetDepthError("schrodinger_residual needs psi_xx and psi_t of '" + psi.name() +
                                "'");
        }
        return detail::sweep(grid, [&](double x, double t) {
            const Jet j = psi(x, t);
            return alpha * j.t() + j.xx() - pot.V.value(x, t) * j.v();
        });
    }
    return detail::sweep(grid, [&](double x, double t) {
        const double h = detail::stencil_step(x);
        const double k = detail::stencil_step(t);
        const double f0 = psi.value(x, t);
        const auto sx = detail::stencil5(psi.value(x - 2 * h, t), psi.value(x - h, t), f0,
                                         psi.value(x + h, t), psi.value(x + 2 * h, t), h);
        const auto st = detail::stencil5(psi.value(x, t - 2 * k), psi.value(x, t - k), f0,
                                         psi.value(x, t + k), psi.value(x, t + 2 * k), k);
        return alpha * st.d1 + sx.d2 - pot.V.value(x, t) * f0;
    });
}

/// Pointwise difference of two fields over the grid, as a residual report.
inline ResidualReport field_difference(const Field& f, const Field& g, const Grid& grid) {
    detail::require_inside(f.domain(), grid, f.name());
    detail::require_inside(g.domain(), grid, g.name());
    return detail::sweep(grid, [&](double x, double t) { return f.value(x, t) - g.value(x, t); });
}

/// Checks drift == -2 W' on the grid (invariant of FpeProblem).
inline ResidualReport drift_consistency(const FpeProblem& prob, const Grid& grid) {
    return detail::sweep(grid, [&](double x, double t) {
        return prob.drift.value(x, t) + 2.0 * prob.prepotential(x, t).x();
    });
}

/// Recomputes V from its recorded prepotential and reports the mismatch.
inline ResidualReport potential_consistency(const SchrodingerPotential& pot, const Grid& grid) {
    if (!pot.source) throw Error("potential carries no source prepotential");
    const SchrodingerPotential again = pot.convention == PotentialConvention::minus
                                           ? potential_minus(*pot.source)
                                           : potential_plus(*pot.source);
    return field_difference(pot.V, again.V, grid);
}

}  // namespace fpesusy
