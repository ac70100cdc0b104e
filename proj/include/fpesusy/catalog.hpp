#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "fpesusy/darboux.hpp"
#include "fpesusy/field.hpp"
#include "fpesusy/grid.hpp"
#include "fpesusy/hierarchy.hpp"

namespace fpesusy {

enum class Provenance { catalog, darboux, hierarchy, evolved, series };

inline const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::catalog: return "catalog";
        case Provenance::darboux: return "darboux";
        case Provenance::hierarchy: return "hierarchy";
        case Provenance::evolved: return "evolved";
        case Provenance::series: return "series";
    }
    return "?";
}

/// A field P tagged with the FPE (through its prepotential) it claims to solve.
struct SolutionField {
    std::string name;
    Field P;
    Field prepotential;
    std::string drift_formula;
    Provenance provenance = Provenance::catalog;

    FpeProblem problem() const { return FpeProblem::from_prepotential(prepotential, drift_formula); }
};

namespace catalog {

using Params = std::map<std::string, double>;

namespace detail {

inline double param(const Params& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) throw Error("missing model parameter '" + key + "'");
    return it->second;
}

/// t > 0 and t + C > 0.
inline Domain guo_domain(double c) {
    Domain d = Domain::positive_time();
    if (c < 0) d.t_min = std::nextafter(-c, Domain::inf);
    return d;
}

inline Field x2() { return mul(x_field(), x_field()); }

}  // namespace detail

// ---- generalized Uhlenbeck-Ornstein (time-dependent gamma) -----------------

/// gamma(t) = -1/(t + C), the solution of gamma^2 - dgamma/dt = 0.
inline Field guo_gamma(double c) {
    Domain d;
    d.t_min = std::nextafter(-c, Domain::inf);
    return time_field(
        "gamma_C",
        [c](double t) {
            const double s = t + c;
            return std::pair{-1.0 / s, 1.0 / (s * s)};
        },
        d);
}

/// W0 = gamma(t) x^2 / 4.
inline Field guo_prepotential(const Field& gamma) {
    return mul(gamma, scale(detail::x2(), 0.25)).renamed("gamma x^2/4");
}

/// Self-similar heat kernel (4 pi t)^{-1/2} e^{-x^2/4t}.
inline Field heat_self_similar() {
    const Domain d = Domain::positive_time();
    const Field t = t_field(d);
    const Field amp = pow(scale(t, 4.0 * std::numbers::pi), -0.5);
    const Field expo = scale(mul(detail::x2(), reciprocal(t)), -0.25);
    return mul(amp, exp(expo)).restricted(d).renamed("heat_kernel");
}

/// e^{a^2 t + a x}.
inline Field heat_exponential(double a) {
    return exp(add(scale(t_field(), a * a), scale(x_field(), a)))
        .renamed("exp(a^2 t + a x)");
}

/// Eq. P0 = (4 pi t (t+C))^{-1/2} exp(-C x^2 / (4 t (t+C))); solves the FPE
/// with drift x/(t+C).
inline SolutionField guo_seed_P0(double c) {
    const Domain d = detail::guo_domain(c);
    const Field t = t_field(d);
    const Field tt = mul(t, t + c);
    const Field amp = pow(scale(tt, 4.0 * std::numbers::pi), -0.5);
    const Field expo = scale(mul(detail::x2(), reciprocal(tt)), -0.25 * c);
    Field p = mul(amp, exp(expo)).restricted(d).renamed("guo_P0");
    return {"guo_P0", p, guo_prepotential(guo_gamma(c)), "x/(t+C)", Provenance::catalog};
}

/// Wt0 = (1/2) ln(t+C) - a^2 t - a x.
inline Field guo_auxiliary_field(double a, double c) {
    Domain d;
    d.t_min = std::nextafter(-c, Domain::inf);
    const Field t = t_field(d);
    return sub(scale(log(t + c), 0.5), add(scale(t, a * a), scale(x_field(), a)))
        .restricted(d)
        .renamed("Wt0");
}

/// Verified auxiliary (R1 gate on `grid`).
inline AuxiliaryPrepotential guo_auxiliary(double a, double c, const Grid& grid) {
    return make_auxiliary(guo_prepotential(guo_gamma(c)), guo_auxiliary_field(a, c), grid);
}

/// Partner solution (x + 2at) / (4 sqrt(pi) t^{3/2}) e^{-(x+2at)^2/4t}; solves
/// the FPE with constant drift -2a.
inline SolutionField guo_partner_P1(double a, double c) {
    const Domain d = detail::guo_domain(c);
    const Field t = t_field(d);
    const Field y = add(x_field(), scale(t, 2.0 * a));
    const Field amp = scale(pow(t, -1.5), 0.25 / std::sqrt(std::numbers::pi));
    const Field expo = scale(mul(mul(y, y), reciprocal(t)), -0.25);
    Field p = mul(mul(y, amp), exp(expo)).restricted(d).renamed("guo_partner_P1");
    return {"guo_partner_P1", p, scale(guo_auxiliary_field(a, c), -1.0), "-2a",
            Provenance::catalog};
}

/// Closed-form hierarchy members P1, P2 for gamma = -1/(t+C); every member
/// solves the FPE with drift x/(t+C).
inline SolutionField guo_hierarchy_closed(int k, double c) {
    const Domain d = detail::guo_domain(c);
    const Field t = t_field(d);
    const Field x = x_field();
    const Field tt = mul(t, t + c);
    const Field gauss = exp(scale(mul(detail::x2(), reciprocal(tt)), -0.25 * c));
    const Field root = pow(scale(tt, std::numbers::pi), -0.5);  // 1/sqrt(pi t (t+C))
    Field p = [&]() -> Field {
        switch (k) {
            case 1:
                return mul(mul(scale(mul(x, reciprocal(t)), 0.25 * c), root), gauss);
            case 2: {
                // C (C x^2 - 2 C t - 2 t^2) / (8 t^2)
                const Field poly = sub(scale(detail::x2(), c),
                                       add(scale(t, 2.0 * c), scale(mul(t, t), 2.0)));
                return mul(mul(scale(mul(poly, pow(t, -2.0)), c / 8.0), root), gauss);
            }
            default:
                throw Error("guo_hierarchy_closed supports k = 1, 2");
        }
    }();
    const std::string name = "guo_P" + std::to_string(k);
    return {name, p.restricted(d).renamed(name), guo_prepotential(guo_gamma(c)), "x/(t+C)",
            Provenance::catalog};
}

// ---- stationary Uhlenbeck-Ornstein ----------------------------------------

inline Field uo_prepotential(double gamma) {
    return scale(detail::x2(), 0.25 * gamma).renamed("gamma x^2/4");
}

namespace detail {

/// 1 - e^{-2 gamma t}
inline Field uo_variance(double g) {
    return time_field(
        "1-e^{-2gt}",
        [g](double t) {
            const double e = std::exp(-2.0 * g * t);
            return std::pair{-std::expm1(-2.0 * g * t), 2.0 * g * e};
        },
        Domain::positive_time());
}

/// e^{2 gamma t} - 1
inline Field uo_growth(double g) {
    return time_field(
        "e^{2gt}-1",
        [g](double t) { return std::pair{std::expm1(2.0 * g * t), 2.0 * g * std::exp(2.0 * g * t)}; },
        Domain::positive_time());
}

inline Field exp_time(double rate) {
    return time_field("e^{rt}", [rate](double t) {
        const double e = std::exp(rate * t);
        return std::pair{e, rate * e};
    });
}

}  // namespace detail

/// Transition density from delta(x) at t = 0 under drift -gamma x.
inline SolutionField uo_seed_P0(double gamma) {
    if (!(gamma > 0)) throw DomainError("uo_seed_P0 needs gamma > 0");
    const Field s = detail::uo_variance(gamma);
    const Field amp = scale(pow(s, -0.5), std::sqrt(gamma / (2.0 * std::numbers::pi)));
    const Field expo = scale(mul(detail::x2(), reciprocal(s)), -0.5 * gamma);
    Field p = mul(amp, exp(expo)).restricted(Domain::positive_time()).renamed("uo_P0");
    return {"uo_P0", p, uo_prepotential(gamma), "-gamma x", Provenance::catalog};
}

/// Stationary density sqrt(gamma/2pi) e^{-gamma x^2/2} = e^{-2W} normalized.
inline SolutionField uo_stationary(double gamma) {
    if (!(gamma > 0)) throw DomainError("uo_stationary needs gamma > 0");
    Field p = scale(exp(scale(detail::x2(), -0.5 * gamma)),
                    std::sqrt(gamma / (2.0 * std::numbers::pi)))
                  .renamed("uo_stationary");
    return {"uo_stationary", p, uo_prepotential(gamma), "-gamma x", Provenance::catalog};
}

/// Closed forms of the forward (k > 0) and backward (k < 0) hierarchy
/// members, |k| <= 2; k = 0 is uo_seed_P0.
inline SolutionField uo_hierarchy_closed(int k, double gamma) {
    if (k == 0) return uo_seed_P0(gamma);
    const SolutionField seed = uo_seed_P0(gamma);
    const Field& p0 = seed.P;
    const Field x = x_field();
    const Field growth = detail::uo_growth(gamma);  // E - 1
    const Field inv = reciprocal(growth);
    const Field inv2 = mul(inv, inv);
    const Field e2 = detail::exp_time(2.0 * gamma);  // E
    Field p = [&]() -> Field {
        switch (k) {
            case 1:
            case -1:
                return mul(mul(scale(mul(x, inv), gamma), p0), detail::exp_time(gamma));
            case 2:
                // gamma (1 + gamma x^2 - E) / (E-1)^2 * E
                return mul(mul(scale(mul(sub(scale(detail::x2(), gamma) + 1.0, e2), inv2), gamma),
                               p0),
                           e2);
            case -2:
                // gamma (1 + (gamma x^2 - 1) E) / (E-1)^2
                return mul(scale(mul(add(constant(1.0),
                                         mul(sub(scale(detail::x2(), gamma), constant(1.0)), e2)),
                                     inv2),
                                 gamma),
                           p0);
            default:
                throw Error("uo_hierarchy_closed supports |k| <= 2");
        }
    }();
    const std::string name = (k > 0 ? "uo_P+" : "uo_P-") + std::to_string(std::abs(k));
    return {name, p.restricted(Domain::positive_time()).renamed(name), uo_prepotential(gamma),
            "-gamma x", Provenance::catalog};
}

// ---- shape-invariant families ---------------------------------------------

/// A family plus the constants and reference data its gate tests use.
struct SiStub {
    std::shared_ptr<const ShapeInvariantFamily> family;
    double default_a = 1.0;
    Grid reference_grid;
};

inline std::vector<std::string> si_family_names() {
    return {"oscillator-1d", "oscillator-3d", "morse", "scarf-1", "scarf-2", "poschl-teller"};
}

/// Prepotential stubs following the usual SUSY-QM superpotential tables
/// (W' is the superpotential, ground state e^{-W}).
inline SiStub si_family_stub(const std::string& name) {
    auto fam = std::make_shared<ShapeInvariantFamily>();
    fam->name = name;
    const Field x = x_field();
    SiStub stub;
    Grid g;
    g.nx = 161;
    g.nt = 15;
    g.t_start = 0.25;
    g.t_end = 2.0;
    if (name == "oscillator-1d") {
        // W = a x^2/4, a = angular frequency
        fam->prepotential = [](const Field& a) {
            return mul(a, scale(detail::x2(), 0.25)).renamed("a x^2/4");
        };
        fam->shift = [](const Field& a) { return a; };
        fam->step = 0.0;
        fam->rule = "a_{n+1} = a_n";
        fam->drift_formula = "-a x";
        stub.default_a = 1.0;
        g.x_min = -4.0;
        g.x_max = 4.0;
    } else if (name == "oscillator-3d") {
        // W = w r^2/4 - (l+1) ln r, a = l, w = 1
        constexpr double w = 1.0;
        Domain d;
        d.x_min = std::numeric_limits<double>::min();
        fam->x_domain = d;
        fam->prepotential = [d](const Field& a) {
            const Field r = x_field(d);
            return sub(scale(mul(r, r), 0.25 * w), mul(a + 1.0, log(r)))
                .restricted(d)
                .renamed("w r^2/4 - (l+1) ln r");
        };
        fam->shift = [](const Field&) { return constant(2.0 * w).renamed("2w"); };
        fam->step = 1.0;
        fam->rule = "a_{n+1} = a_n + 1";
        fam->valid = [](double l) { return l >= 0.0; };
        fam->drift_formula = "-(w r - 2(l+1)/r)";
        stub.default_a = 1.0;
        g.x_min = 0.2;
        g.x_max = 6.0;
    } else if (name == "morse") {
        // W = A x + (B/alpha) e^{-alpha x}, a = A
        constexpr double b = 1.0, alpha = 1.0;
        fam->prepotential = [](const Field& a) {
            return add(mul(a, x_field()), scale(exp(scale(x_field(), -alpha)), b / alpha))
                .renamed("A x + (B/alpha) e^{-alpha x}");
        };
        fam->shift = [](const Field& a) {
            return sub(mul(a, a), mul(a - alpha, a - alpha));
        };
        fam->step = -alpha;
        fam->rule = "a_{n+1} = a_n - alpha";
        fam->valid = [](double A) { return A > 0.0; };
        fam->drift_formula = "-2(A - B e^{-alpha x})";
        stub.default_a = 2.0;
        g.x_min = -2.0;
        g.x_max = 8.0;
    } else if (name == "scarf-1") {
        // W' = A tan(alpha x) - B sec(alpha x), a = A
        constexpr double b = 1.0, alpha = 1.0;
        Domain d;
        d.x_min = std::nextafter(-0.5 * std::numbers::pi / alpha, Domain::inf);
        d.x_max = std::nextafter(0.5 * std::numbers::pi / alpha, -Domain::inf);
        fam->x_domain = d;
        fam->prepotential = [d](const Field& a) {
            const Field ax = scale(x_field(d), alpha);
            const Field lncos = log(cos(ax));
            const Field lnsectan = sub(log(sin(ax) + 1.0), lncos);
            return sub(scale(mul(a, lncos), -1.0 / alpha), scale(lnsectan, b / alpha))
                .restricted(d)
                .renamed("-(A/alpha) ln cos - (B/alpha) ln(sec + tan)");
        };
        fam->shift = [](const Field& a) {
            return sub(mul(a + alpha, a + alpha), mul(a, a));
        };
        fam->step = alpha;
        fam->rule = "a_{n+1} = a_n + alpha";
        fam->valid = [](double A) { return A > b; };
        fam->drift_formula = "-2(A tan(alpha x) - B sec(alpha x))";
        stub.default_a = 3.0;
        g.x_min = -1.4;
        g.x_max = 1.4;
    } else if (name == "scarf-2") {
        // W' = A tanh(alpha x) + B sech(alpha x), a = A
        constexpr double b = 1.0, alpha = 1.0;
        fam->prepotential = [](const Field& a) {
            const Field ax = scale(x_field(), alpha);
            return add(scale(mul(a, log(cosh(ax))), 1.0 / alpha),
                       scale(atan(exp(ax)), 2.0 * b / alpha))
                .renamed("(A/alpha) ln cosh + (2B/alpha) atan e^{alpha x}");
        };
        fam->shift = [](const Field& a) {
            return sub(mul(a, a), mul(a - alpha, a - alpha));
        };
        fam->step = -alpha;
        fam->rule = "a_{n+1} = a_n - alpha";
        fam->valid = [](double A) { return A > 0.0; };
        fam->drift_formula = "-2(A tanh(alpha x) + B sech(alpha x))";
        stub.default_a = 3.0;
        g.x_min = -6.0;
        g.x_max = 6.0;
    } else if (name == "poschl-teller") {
        // W' = A coth(alpha r) - B csch(alpha r), a = A, 0 < A < B
        constexpr double b = 4.0, alpha = 1.0;
        Domain d;
        d.x_min = std::numeric_limits<double>::min();
        fam->x_domain = d;
        fam->prepotential = [d](const Field& a) {
            const Field ar = scale(x_field(d), alpha);
            const Field half = scale(ar, 0.5);
            const Field lntanh = sub(log(sinh(half)), log(cosh(half)));
            return sub(scale(mul(a, log(sinh(ar))), 1.0 / alpha), scale(lntanh, b / alpha))
                .restricted(d)
                .renamed("(A/alpha) ln sinh - (B/alpha) ln tanh(alpha r/2)");
        };
        fam->shift = [](const Field& a) {
            return sub(mul(a, a), mul(a - alpha, a - alpha));
        };
        fam->step = -alpha;
        fam->rule = "a_{n+1} = a_n - alpha";
        fam->valid = [](double A) { return A > 0.0 && A < b; };
        fam->drift_formula = "-2(A coth(alpha r) - B csch(alpha r))";
        stub.default_a = 3.0;
        g.x_min = 0.2;
        g.x_max = 6.0;
    } else {
        throw Error("unknown shape-invariant family '" + name + "'");
    }
    stub.family = fam;
    stub.reference_grid = g;
    return stub;
}

/// Oscillator parameter sequence with a_n = gamma(t) = -1/(t+C) for all n
/// and the closed-form antiderivative of R = gamma.
inline ParameterSequence guo_sequence(double c) {
    auto stub = si_family_stub("oscillator-1d");
    ParameterSequence seq(stub.family, guo_gamma(c), 0);
    seq.with_shift_antiderivative([c](int, double t) { return -std::log(t + c); });
    return seq;
}

/// Oscillator parameter sequence with constant gamma.
inline ParameterSequence uo_sequence(double gamma) {
    auto stub = si_family_stub("oscillator-1d");
    ParameterSequence seq(stub.family, constant(gamma), 0);
    seq.with_shift_antiderivative([gamma](int, double t) { return gamma * t; });
    return seq;
}

// ---- registry --------------------------------------------------------------

inline Grid reference_grid(double half_width, double t_start = 0.25, double t_end = 2.0) {
    return Grid{-half_width, half_width, 161, t_start, t_end, 15};
}

/// Catalog entry: a drift, its known solutions, and the grid they are gated on.
struct ModelEntry {
    std::string name;
    std::string drift_formula;
    Params defaults;
    std::string validity;
    std::function<std::vector<SolutionField>(const Params&)> solutions;
    std::function<Grid(const Params&)> grid;
    std::size_t known_solution_count = 0;
};

inline std::vector<ModelEntry> entries() {
    std::vector<ModelEntry> out;
    out.push_back(
        {"heat",
         "0",
         {{"a", 1.0}},
         "t > 0",
         [](const Params& p) {
             const Field zero = constant(0.0).renamed("0");
             return std::vector<SolutionField>{
                 {"heat_kernel", heat_self_similar(), zero, "0", Provenance::catalog},
                 {"heat_exponential", heat_exponential(detail::param(p, "a")), zero, "0",
                  Provenance::catalog}};
         },
         [](const Params&) { return reference_grid(8.0); },
         2});
    out.push_back({"guo",
                   "x/(t+C)",
                   {{"C", 1.0}},
                   "t > 0, t + C > 0",
                   [](const Params& p) {
                       const double c = detail::param(p, "C");
                       return std::vector<SolutionField>{
                           guo_seed_P0(c), guo_hierarchy_closed(1, c), guo_hierarchy_closed(2, c)};
                   },
                   [](const Params& p) {
                       const double c = detail::param(p, "C");
                       return reference_grid(4.0 * std::sqrt(2.0 * 2.0 * (2.0 + c) / c));
                   },
                   3});
    out.push_back({"guo-partner",
                   "-2a",
                   {{"a", 1.0}, {"C", 1.0}},
                   "t > 0, t + C > 0",
                   [](const Params& p) {
                       return std::vector<SolutionField>{
                           guo_partner_P1(detail::param(p, "a"), detail::param(p, "C"))};
                   },
                   [](const Params& p) {
                       return reference_grid(8.0 + 4.0 * std::abs(detail::param(p, "a")));
                   },
                   1});
    out.push_back({"uo",
                   "-gamma x",
                   {{"gamma", 1.0}},
                   "gamma > 0, t > 0",
                   [](const Params& p) {
                       const double g = detail::param(p, "gamma");
                       std::vector<SolutionField> v;
                       for (int k : {0, 1, -1, 2, -2}) v.push_back(uo_hierarchy_closed(k, g));
                       v.push_back(uo_stationary(g));
                       return v;
                   },
                   [](const Params& p) {
                       const double g = detail::param(p, "gamma");
                       return reference_grid(4.0 * std::sqrt(-std::expm1(-4.0 * g) / g));
                   },
                   6});
    for (const auto& name : si_family_names()) {
        const SiStub stub = si_family_stub(name);
        out.push_back({name,
                       stub.family->drift_formula,
                       {{"a", stub.default_a}},
                       stub.family->rule,
                       [stub](const Params& p) {
                           const Field w = stub.family->prepotential(constant(detail::param(p, "a")));
                           Field st = exp(scale(w, -2.0)).renamed(stub.family->name + "_stationary");
                           return std::vector<SolutionField>{{stub.family->name + "_stationary", st, w,
                                                              stub.family->drift_formula,
                                                              Provenance::catalog}};
                       },
                       [stub](const Params&) { return stub.reference_grid; },
                       1});
    }
    return out;
}

inline const ModelEntry& find(const std::vector<ModelEntry>& all, const std::string& name) {
    for (const auto& e : all) {
        if (e.name == name) return e;
    }
    throw Error("unknown model '" + name + "'");
}

const ModelEntry& find(const std::vector<ModelEntry>&&, const std::string&) = delete;

/// Copy of the named entry.
inline ModelEntry entry(const std::string& name) {
    const auto all = entries();
    return find(all, name);
}

}  // namespace catalog
}  // namespace fpesusy
