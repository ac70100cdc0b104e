#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fpesusy/error.hpp"
#include "fpesusy/jet.hpp"

namespace fpesusy {

/// Closed rectangle [x_min, x_max] x [t_min, t_max]; infinite bounds allowed.
struct Domain {
    static constexpr double inf = std::numeric_limits<double>::infinity();

    double x_min = -inf;
    double x_max = inf;
    double t_min = -inf;
    double t_max = inf;

    static constexpr Domain everywhere() { return {}; }

    /// Fields singular at t = 0 (heat kernels, transition densities).
    static constexpr Domain positive_time() {
        return {-inf, inf, std::numeric_limits<double>::min(), inf};
    }

    bool empty() const { return !(x_min <= x_max && t_min <= t_max); }

    bool contains(double x, double t) const {
        return x >= x_min && x <= x_max && t >= t_min && t <= t_max;
    }

    Domain intersect(const Domain& o) const {
        return {std::max(x_min, o.x_min), std::min(x_max, o.x_max), std::max(t_min, o.t_min),
                std::min(t_max, o.t_max)};
    }

    friend bool operator==(const Domain&, const Domain&) = default;
};

/// Immutable scalar field over (x, t) evaluated as a Jet.
///
/// Copies share the evaluator. `depth()` is the structural jet depth: the
/// entries every evaluation is guaranteed to carry.
class Field {
public:
    using Evaluator = std::function<Jet(double, double)>;

    Field(Evaluator eval, Domain domain, std::string name, JetDepth depth = JetDepth::full())
        : impl_(std::make_shared<const Impl>(
              Impl{std::move(eval), domain, std::move(name), depth})) {
        if (domain.empty()) throw DomainError("field '" + impl_->name + "' has an empty domain");
    }

    Jet operator()(double x, double t) const {
        if (!impl_->domain.contains(x, t)) {
            throw DomainError("field '" + impl_->name + "' evaluated outside its domain at (x=" +
                              std::to_string(x) + ", t=" + std::to_string(t) + ")");
        }
        return impl_->eval(x, t);
    }

    double value(double x, double t) const { return (*this)(x, t).v(); }

    const Domain& domain() const noexcept { return impl_->domain; }
    const std::string& name() const noexcept { return impl_->name; }
    const JetDepth& depth() const noexcept { return impl_->depth; }

    /// Same evaluator, new label.
    Field renamed(std::string name) const {
        return Field(impl_->eval, impl_->domain, std::move(name), impl_->depth);
    }

    /// Same evaluator restricted to a sub-domain.
    Field restricted(const Domain& d) const {
        return Field(impl_->eval, impl_->domain.intersect(d), impl_->name, impl_->depth);
    }

private:
    struct Impl {
        Evaluator eval;
        Domain domain;
        std::string name;
        JetDepth depth;
    };

    std::shared_ptr<const Impl> impl_;
};

namespace detail {

inline Domain shared_domain(const Field& f, const Field& g) {
    Domain d = f.domain().intersect(g.domain());
    if (d.empty()) {
        throw DomainError("fields '" + f.name() + "' and '" + g.name() +
                          "' have disjoint domains");
    }
    return d;
}

template <class JetFn>
Field unary(const Field& f, std::string op, JetFn fn) {
    std::string name = op + "(" + f.name() + ")";
    return Field(
        [f, fn, op](double x, double t) {
            Jet r = fn(f(x, t));
            if (!std::isfinite(r.v())) throw RangeError(op + " produced a non-finite value", x, t);
            return r;
        },
        f.domain(), std::move(name), f.depth());
}

}  // namespace detail

// ---- constructors ---------------------------------------------------------

inline Field constant(double c, Domain d = Domain::everywhere()) {
    return Field([c](double, double) { return Jet::constant(c); }, d,
                 std::to_string(c));
}

/// The coordinate field (x, t) -> x.
inline Field x_field(Domain d = Domain::everywhere()) {
    return Field([](double x, double) { return Jet(x, 1, 0, 0, 0, 0); }, d, "x");
}

/// The coordinate field (x, t) -> t.
inline Field t_field(Domain d = Domain::everywhere()) {
    return Field([](double, double t) { return Jet::time_only(t, 1); }, d, "t");
}

/// Field of t alone from a callable returning {f(t), f'(t)}.
inline Field time_field(std::string name, std::function<std::pair<double, double>(double)> f,
                        Domain d = Domain::everywhere()) {
    return Field(
        [f = std::move(f)](double, double t) {
            auto [v, vdot] = f(t);
            return Jet::time_only(v, vdot);
        },
        d, std::move(name));
}

/// Field of x alone from a callable returning {f, f', f'', f'''}.
inline Field space_field(std::string name, std::function<std::array<double, 4>(double)> f,
                         Domain d = Domain::everywhere()) {
    return Field(
        [f = std::move(f)](double x, double) {
            auto [v, d1, d2, d3] = f(x);
            return Jet(v, d1, d2, d3, 0, 0);
        },
        d, std::move(name));
}

// ---- algebra --------------------------------------------------------------

inline Field add(const Field& f, const Field& g) {
    return Field([f, g](double x, double t) { return f(x, t) + g(x, t); },
                 detail::shared_domain(f, g), "(" + f.name() + " + " + g.name() + ")",
                 meet(f.depth(), g.depth()));
}

inline Field sub(const Field& f, const Field& g) {
    return Field([f, g](double x, double t) { return f(x, t) - g(x, t); },
                 detail::shared_domain(f, g), "(" + f.name() + " - " + g.name() + ")",
                 meet(f.depth(), g.depth()));
}

inline Field scale(const Field& f, double c) {
    return Field([f, c](double x, double t) { return c * f(x, t); }, f.domain(),
                 std::to_string(c) + "*" + f.name(), f.depth());
}

inline Field mul(const Field& f, const Field& g) {
    return Field([f, g](double x, double t) { return f(x, t) * g(x, t); },
                 detail::shared_domain(f, g), f.name() + "*" + g.name(),
                 meet(f.depth(), g.depth()));
}

inline Field exp(const Field& f) {
    return detail::unary(f, "exp", [](const Jet& j) { return fpesusy::exp(j); });
}

/// e^{-W} with its full jet.
inline Field exp_neg(const Field& w) {
    return detail::unary(w, "exp_neg", [](const Jet& j) { return fpesusy::exp(-j); });
}

inline Field log(const Field& f) {
    return detail::unary(f, "log", [](const Jet& j) { return fpesusy::log(j); });
}

inline Field pow(const Field& f, double p) {
    return detail::unary(f, "pow" + std::to_string(p),
                         [p](const Jet& j) { return fpesusy::pow(j, p); });
}

inline Field sqrt(const Field& f) {
    return detail::unary(f, "sqrt", [](const Jet& j) { return fpesusy::pow(j, 0.5); });
}

inline Field reciprocal(const Field& f) {
    return detail::unary(f, "recip", [](const Jet& j) { return fpesusy::reciprocal(j); });
}

inline Field div(const Field& f, const Field& g) { return mul(f, reciprocal(g)); }

inline Field sin(const Field& f) {
    return detail::unary(f, "sin", [](const Jet& j) { return fpesusy::sin(j); });
}
inline Field cos(const Field& f) {
    return detail::unary(f, "cos", [](const Jet& j) { return fpesusy::cos(j); });
}
inline Field sinh(const Field& f) {
    return detail::unary(f, "sinh", [](const Jet& j) { return fpesusy::sinh(j); });
}
inline Field cosh(const Field& f) {
    return detail::unary(f, "cosh", [](const Jet& j) { return fpesusy::cosh(j); });
}
inline Field atan(const Field& f) {
    return detail::unary(f, "atan", [](const Jet& j) { return fpesusy::atan(j); });
}

/// Spatial derivative as a field; loses one x-order and the mixed entry.
inline Field dx(const Field& f) {
    if (f.depth().x < 1) {
        throw JetDepthError("field '" + f.name() + "' carries no spatial derivative");
    }
    JetDepth d{f.depth().x - 1, f.depth().tx, false};
    return Field([f](double x, double t) { return dx(f(x, t)); }, f.domain(),
                 "d/dx " + f.name(), d);
}

/// (d/dx + g) psi. The result carries one spatial order fewer than psi.
inline Field first_order_apply(const Field& g, const Field& psi) {
    return add(dx(psi), mul(g, psi)).renamed("(d/dx + " + g.name() + ")" + psi.name());
}

inline Field operator+(const Field& f, const Field& g) { return add(f, g); }
inline Field operator-(const Field& f, const Field& g) { return sub(f, g); }
inline Field operator-(const Field& f) { return scale(f, -1.0); }
inline Field operator*(const Field& f, const Field& g) { return mul(f, g); }
inline Field operator*(double c, const Field& f) { return scale(f, c); }
inline Field operator*(const Field& f, double c) { return scale(f, c); }
inline Field operator/(const Field& f, const Field& g) { return div(f, g); }
inline Field operator+(const Field& f, double c) { return add(f, constant(c)); }
inline Field operator+(double c, const Field& f) { return add(constant(c), f); }
inline Field operator-(const Field& f, double c) { return add(f, constant(-c)); }

// ---- finite-difference cross-check ---------------------------------------

/// Point and jet entry where a finite-difference check deviated most.
struct FdReport {
    double max_deviation = 0.0;
    JetEntry worst_entry = JetEntry::v;
    double worst_x = 0.0;
    double worst_t = 0.0;
    std::size_t checked = 0;

    bool passed(double tol) const { return max_deviation <= tol; }
};

/// Default spatial step for finite-difference fallbacks.
inline double default_fd_step(double at) { return 1e-4 * std::max(1.0, std::abs(at)); }

/// Compares every carried jet entry with the central difference of the entry
/// one order below. Deviation is |jet - fd| / max(1, |jet|). A non-positive
/// `h` selects default_fd_step per sample.
inline FdReport fd_check(const Field& f, std::span<const std::pair<double, double>> samples,
                         double h) {
    FdReport rep;
    const JetDepth d = f.depth();
    for (const auto& [x, t] : samples) {
        const double hx = h > 0 ? h : default_fd_step(x);
        const double ht = h > 0 ? h : default_fd_step(t);
        const Domain& dom = f.domain();
        const bool need_t = d.t;
        if (!dom.contains(x - hx, t) || !dom.contains(x + hx, t) ||
            (need_t && (!dom.contains(x, t - ht) || !dom.contains(x, t + ht)))) {
            throw DomainError("fd_check sample (" + std::to_string(x) + ", " +
                              std::to_string(t) + ") is not interior to the domain by h");
        }
        const Jet c = f(x, t);
        const Jet xp = f(x + hx, t), xm = f(x - hx, t);
        auto check = [&](JetEntry e, double exact, double fd) {
            const double dev = std::abs(exact - fd) / std::max(1.0, std::abs(exact));
            ++rep.checked;
            if (!(dev <= rep.max_deviation)) {
                rep.max_deviation = std::isnan(dev) ? std::numeric_limits<double>::infinity()
                                                    : dev;
                rep.worst_entry = e;
                rep.worst_x = x;
                rep.worst_t = t;
            }
        };
        const auto& r = c.raw();
        const auto& p = xp.raw();
        const auto& m = xm.raw();
        for (int k = 1; k <= d.x; ++k) {
            check(static_cast<JetEntry>(k), r[k], (p[k - 1] - m[k - 1]) / (2 * hx));
        }
        if (need_t) {
            const Jet tp = f(x, t + ht), tm = f(x, t - ht);
            check(JetEntry::t, r[4], (tp.v() - tm.v()) / (2 * ht));
            if (d.tx) check(JetEntry::tx, r[5], (tp.raw()[1] - tm.raw()[1]) / (2 * ht));
        }
    }
    return rep;
}

}  // namespace fpesusy
