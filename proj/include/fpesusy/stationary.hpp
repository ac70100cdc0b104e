#pragma once

// Eigenfunction expansions for the constant-gamma oscillator drift.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fpesusy/field.hpp"
#include "fpesusy/fpe.hpp"
#include "fpesusy/numerics.hpp"

namespace fpesusy {

namespace detail {

/// Normalized Hermite polynomials h_n(xi) = H_n(xi) / sqrt(2^n n! sqrt(pi)),
/// n = 0..n_max. h_n(xi) e^{-xi^2/2} is orthonormal on the real line.
inline std::vector<double> hermite_polys(double xi, std::size_t n_max) {
    std::vector<double> h(n_max + 1);
    h[0] = std::pow(std::numbers::pi, -0.25);
    if (n_max >= 1) h[1] = std::sqrt(2.0) * xi * h[0];
    for (std::size_t n = 1; n < n_max; ++n) {
        const double nn = static_cast<double>(n);
        h[n + 1] = std::sqrt(2.0 / (nn + 1.0)) * xi * h[n] - std::sqrt(nn / (nn + 1.0)) * h[n - 1];
    }
    return h;
}

/// Hermite functions and their first three xi-derivatives, n = 0..n_max.
struct HermiteJets {
    std::vector<double> f, d1, d2, d3;
};

inline HermiteJets hermite_jets(double xi, std::size_t n_max) {
    std::vector<double> h = hermite_polys(xi, n_max + 1);
    const double g = std::exp(-0.5 * xi * xi);
    for (double& v : h) v *= g;
    HermiteJets j;
    j.f.assign(h.begin(), h.begin() + static_cast<std::ptrdiff_t>(n_max + 1));
    j.d1.resize(n_max + 1);
    j.d2.resize(n_max + 1);
    j.d3.resize(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        const double nn = static_cast<double>(n);
        const double lower = n > 0 ? std::sqrt(0.5 * nn) * h[n - 1] : 0.0;
        j.d1[n] = lower - std::sqrt(0.5 * (nn + 1.0)) * h[n + 1];
        const double q = xi * xi - 2.0 * nn - 1.0;
        j.d2[n] = q * h[n];
        j.d3[n] = 2.0 * xi * h[n] + q * j.d1[n];
    }
    return j;
}

}  // namespace detail

/// Spectrum of the oscillator FPE operator with drift -gamma x:
/// lambda_n = n gamma, phi_n = (gamma/2)^{1/4} h_n(xi) e^{-xi^2/2},
/// xi = sqrt(gamma/2) x, and phi_0 = e^{-W} with W normalized.
struct EigenSystem {
    double gamma = 1.0;
    std::size_t levels = 0;  // n = 0 .. levels-1
    Field prepotential = constant(0.0);  // gamma x^2/4 - (1/4) ln(gamma / 2 pi)
    Field partner_prepotential = constant(0.0);
    double shift = 0.0;  // R0 = gamma
    std::vector<double> eigenvalues;
    std::vector<double> norms;  // int phi_n^2 dx, by quadrature

    double xi_scale() const { return std::sqrt(0.5 * gamma); }
    double amplitude() const { return std::pow(0.5 * gamma, 0.25); }

    /// phi_n as a field of x with full x-jets.
    Field eigenfunction(std::size_t n) const {
        if (n >= levels) throw Error("eigenfunction index " + std::to_string(n) + " out of range");
        const double s = xi_scale(), k = amplitude();
        return Field(
            [n, s, k](double x, double) {
                const auto j = detail::hermite_jets(s * x, n);
                return Jet(k * j.f[n], k * s * j.d1[n], k * s * s * j.d2[n],
                           k * s * s * s * j.d3[n], 0.0, 0.0);
            },
            Domain::everywhere(), "phi_" + std::to_string(n));
    }

    /// Schrodinger potential W'^2 - W'' of the stationary operator.
    SchrodingerPotential potential() const { return potential_minus(prepotential); }
};

inline EigenSystem uo_eigensystem(double gamma, std::size_t n_max) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("eigensystem needs gamma > 0");
    if (n_max > 200) throw DomainError("eigensystem truncation is capped at N = 200");
    EigenSystem e;
    e.gamma = gamma;
    e.levels = n_max + 1;
    e.prepotential = add(scale(mul(x_field(), x_field()), 0.25 * gamma),
                         constant(-0.25 * std::log(gamma / (2.0 * std::numbers::pi))))
                         .renamed("gamma x^2/4 + c");
    e.partner_prepotential = e.prepotential;
    e.shift = gamma;
    for (std::size_t n = 0; n <= n_max; ++n) e.eigenvalues.push_back(gamma * static_cast<double>(n));
    // int phi_n^2 dx = int h_n^2 e^{-xi^2} dxi, exact with n_max + 2 nodes.
    const auto rule = numerics::gauss_hermite(n_max + 2);
    e.norms.assign(n_max + 1, 0.0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const auto h = detail::hermite_polys(rule.nodes[i], n_max);
        for (std::size_t n = 0; n <= n_max; ++n) e.norms[n] += rule.weights[i] * h[n] * h[n];
    }
    return e;
}

/// Residual H phi - lambda phi, H = -d^2/dx^2 + V, sampled on [x_min, x_max].
inline ResidualReport eigen_residual(const Field& phi, const SchrodingerPotential& pot,
                                     double lambda, double x_min, double x_max,
                                     std::size_t nx = 241) {
    Grid g{x_min, x_max, nx, 0.0, 0.0, 1};
    return detail::sweep(g, [&](double x, double t) {
        const Jet p = phi(x, t);
        return -p.xx() + pot.V.value(x, t) * p.v() - lambda * p.v();
    });
}

struct ExpansionCoefficients {
    std::vector<double> c;
    std::string source;
};

struct DeltaStart {
    double x0 = 0.0;
};

/// Initial profile P(x, t0) of an arbitrary field.
struct ProfileStart {
    Field profile;
    double t0 = 0.0;
};

namespace detail {

inline const std::vector<numerics::GaussRule>& doubling_rules() {
    static const std::vector<numerics::GaussRule> rules = [] {
        std::vector<numerics::GaussRule> r;
        for (std::size_t n = 16; n <= 256; n *= 2) r.push_back(numerics::gauss_hermite(n));
        return r;
    }();
    return rules;
}

/// int f(x) dx for f ~ e^{-xi^2}: Gauss-Hermite in xi with doubling node
/// counts; `f_scaled(xi)` must return f(x) e^{xi^2} / s.
template <class F>
inline std::optional<double> gauss_hermite_doubling(F&& f_scaled, double tol) {
    double prev = NAN;
    for (const auto& rule : doubling_rules()) {
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            sum += rule.weights[i] * f_scaled(rule.nodes[i]);
        }
        if (!std::isfinite(sum)) return std::nullopt;
        if (std::isfinite(prev) && std::abs(sum - prev) < tol * std::max(1.0, std::abs(sum))) {
            return sum;
        }
        prev = sum;
    }
    return std::nullopt;
}

}  // namespace detail

/// c_n = int phi_n phi_0^{-1} P(x) dx for n = 0..levels-1.
inline ExpansionCoefficients expand_initial(const std::variant<DeltaStart, ProfileStart>& start,
                                            const EigenSystem& eig) {
    const std::size_t nmax = eig.levels - 1;
    const double s = eig.xi_scale();
    ExpansionCoefficients out;
    if (const auto* d = std::get_if<DeltaStart>(&start)) {
        if (!std::isfinite(d->x0)) throw DomainError("delta start needs a finite x0");
        const auto h = detail::hermite_polys(s * d->x0, nmax);
        for (std::size_t n = 0; n <= nmax; ++n) out.c.push_back(h[n] / h[0]);
        out.source = "delta(x - " + std::to_string(d->x0) + ")";
        return out;
    }
    const auto& ps = std::get<ProfileStart>(start);
    const Field& p = ps.profile;
    const double t0 = ps.t0;
    const double h0 = std::pow(std::numbers::pi, -0.25);
    out.c.assign(nmax + 1, 0.0);
    for (std::size_t n = 0; n <= nmax; ++n) {
        // phi_n / phi_0 = h_n(xi) / h_0
        auto integrand = [&](double xi) {
            const auto h = detail::hermite_polys(xi, n);
            return h[n] / h0 * p.value(xi / s, t0) * std::exp(xi * xi) / s;
        };
        std::optional<double> v;
        try {
            v = detail::gauss_hermite_doubling(integrand, 1e-10);
        } catch (const Error&) {
            v.reset();
        }
        if (!v) {
            // Simpson on a window wide enough for any integrable profile.
            double prev = NAN;
            const double half = 40.0 / s;
            const auto edge = detail::hermite_polys(s * half, n);
            const double edge_weight = std::abs(edge[n] / h0) * half *
                                       std::max(std::abs(p.value(-half, t0)),
                                                std::abs(p.value(half, t0)));
            if (!(edge_weight < 1e-12)) {
                throw NumericsError("profile '" + p.name() + "' does not decay fast enough for phi_" +
                                    std::to_string(n) + "/phi_0");
            }
            for (std::size_t pts = 4001; pts <= 64001; pts = 2 * pts - 1) {
                Grid g{-half, half, pts, t0, t0, 1};
                std::vector<double> y(pts);
                for (std::size_t i = 0; i < pts; ++i) {
                    const double x = g.x(i);
                    const auto h = detail::hermite_polys(s * x, n);
                    y[i] = h[n] / h0 * p.value(x, t0);
                }
                const double sum = numerics::simpson(y, g.dx());
                if (!std::isfinite(sum)) break;
                if (std::isfinite(prev) && std::abs(sum - prev) < 1e-10 * std::max(1.0, std::abs(sum))) {
                    v = sum;
                    break;
                }
                prev = sum;
            }
        }
        if (!v) {
            throw NumericsError("profile '" + p.name() + "' is not integrable against phi_" +
                                std::to_string(n) + "/phi_0");
        }
        out.c[n] = *v;
    }
    out.source = p.name();
    return out;
}

/// |phi_n(x)| <= amplitude * 1.0865 pi^{-1/4} for every n and x.
inline double eigenfunction_bound(const EigenSystem& eig) {
    return eig.amplitude() * 1.0865 * std::pow(std::numbers::pi, -0.25);
}

/// Bound on sum_{n >= from} |c_n| |phi_0 phi_n| e^{-lambda_n t} using the
/// available coefficients.
inline double tail_bound(const ExpansionCoefficients& c, const EigenSystem& eig, double t,
                         std::size_t from) {
    const double b = eigenfunction_bound(eig);
    double sum = 0.0;
    for (std::size_t n = from; n < c.c.size() && n < eig.levels; ++n) {
        sum += std::abs(c.c[n]) * b * b * std::exp(-eig.eigenvalues[n] * t);
    }
    return sum;
}

/// Smallest number of terms whose neglected tail is below tol at time t.
/// A series of one term is exact only if it is the whole series.
inline std::size_t choose_truncation(const ExpansionCoefficients& c, const EigenSystem& eig,
                                     double t, double tol = 1e-12) {
    const std::size_t avail = std::min(c.c.size(), eig.levels);
    // The last stored term stands in for the unknown remainder, so it must
    // always be part of the measured tail.
    for (std::size_t n = 1; n < avail; ++n) {
        if (tail_bound(c, eig, t, n) < tol) return n;
    }
    if (avail == 1 || (avail > 0 && tail_bound(c, eig, t, avail - 1) == 0.0)) return avail;
    throw NumericsError("expansion tail does not decay below " + std::to_string(tol) +
                        " at t=" + std::to_string(t) + " with " + std::to_string(avail) + " terms");
}

/// P(x, t) = phi_0(x) sum_n c_n phi_n(x) e^{-lambda_n t} as a field of x at
/// fixed t. Below t_cutoff the tail must already be resolved.
inline Field evolve_expansion(const ExpansionCoefficients& c, const EigenSystem& eig, double t,
                              double t_cutoff = 0.1, double tol = 1e-12) {
    if (!(t >= 0.0)) throw DomainError("expansion time must be non-negative");
    std::size_t terms = std::min(c.c.size(), eig.levels);
    try {
        terms = choose_truncation(c, eig, t, tol);
    } catch (const NumericsError&) {
        if (t < t_cutoff) throw;
    }
    std::vector<double> w(terms);
    for (std::size_t n = 0; n < terms; ++n) w[n] = c.c[n] * std::exp(-eig.eigenvalues[n] * t);
    const double s = eig.xi_scale(), k = eig.amplitude();
    return Field(
        [w, s, k](double x, double) {
            const std::size_t nmax = w.size() - 1;
            const auto j = detail::hermite_jets(s * x, nmax);
            double r[4] = {0, 0, 0, 0};
            for (std::size_t n = 0; n <= nmax; ++n) {
                r[0] += w[n] * j.f[n];
                r[1] += w[n] * j.d1[n] * s;
                r[2] += w[n] * j.d2[n] * s * s;
                r[3] += w[n] * j.d3[n] * s * s * s;
            }
            const Jet sum(r[0], r[1], r[2], r[3], 0.0, 0.0);
            const Jet phi0(j.f[0], j.d1[0] * s, j.d2[0] * s * s, j.d3[0] * s * s * s, 0.0, 0.0);
            return (k * k) * (phi0 * sum);
        },
        Domain::everywhere(), "series(t=" + std::to_string(t) + ")");
}

/// FPE residual of the series solution at time t: x-derivatives from the
/// series jets, dP/dt by central difference across the slices t +- ht.
inline ResidualReport series_fpe_residual(const ExpansionCoefficients& c, const EigenSystem& eig,
                                          double t, double x_min, double x_max,
                                          std::size_t nx = 161, double ht = 1e-4) {
    if (!(t - ht >= 0.0)) throw DomainError("series residual needs t >= ht");
    const Field now = evolve_expansion(c, eig, t, 0.0);
    const Field later = evolve_expansion(c, eig, t + ht, 0.0);
    const Field earlier = evolve_expansion(c, eig, t - ht, 0.0);
    const double g = eig.gamma;
    Grid grid{x_min, x_max, nx, t, t, 1};
    return detail::sweep(grid, [&](double x, double) {
        const Jet p = now(x, 0.0);
        const double pt = (later.value(x, 0.0) - earlier.value(x, 0.0)) / (2.0 * ht);
        return pt - g * p.v() - g * x * p.x() - p.xx();
    });
}

/// Result of applying A0 = d/dx + W' to an expansion: coefficients shift
/// down by one level, the spectrum by R0.
struct PartnerExpansion {
    std::vector<double> coefficients;  // c_1, c_2, ...
    std::vector<double> eigenvalues;   // lambda_{n+1} - R0
    double shift = 0.0;
    Field prepotential = constant(0.0);
    std::vector<Field> states;  // A0 phi_{n+1}, unnormalized

    /// Overall time prefactor e^{-R0 t}.
    double prefactor(double t) const { return std::exp(-shift * t); }
};

inline PartnerExpansion apply_A0(const ExpansionCoefficients& c, const EigenSystem& eig) {
    const std::size_t avail = std::min(c.c.size(), eig.levels);
    if (avail < 2) throw Error("partner expansion needs at least two levels");
    PartnerExpansion pe;
    pe.shift = eig.shift;
    pe.prepotential = eig.partner_prepotential;
    const Field wx = dx(eig.prepotential);
    for (std::size_t n = 0; n + 1 < avail; ++n) {
        pe.coefficients.push_back(c.c[n + 1]);
        pe.eigenvalues.push_back(eig.eigenvalues[n + 1] - eig.shift);
        pe.states.push_back(first_order_apply(wx, eig.eigenfunction(n + 1))
                                .renamed("A0 phi_" + std::to_string(n + 1)));
    }
    return pe;
}

/// Partner density e^{-W1} sum c_{n+1} (A0 phi_{n+1}) e^{-lbar_n t} at fixed t.
inline Field partner_series(const PartnerExpansion& pe, double t) {
    Field sum = constant(0.0);
    for (std::size_t n = 0; n < pe.states.size(); ++n) {
        const double w = pe.coefficients[n] * std::exp(-pe.eigenvalues[n] * t);
        if (w == 0.0) continue;
        sum = add(sum, scale(pe.states[n], w));
    }
    return mul(exp_neg(pe.prepotential), sum).renamed("partner series(t=" + std::to_string(t) + ")");
}

}  // namespace fpesusy
