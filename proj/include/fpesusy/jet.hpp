#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "fpesusy/error.hpp"

namespace fpesusy {

/// Which jet entries a field actually carries.
///
/// `x` is the highest spatial order available (0..3). `t` flags the first
/// time derivative and `tx` the mixed one. Operations that lose derivative
/// information (spatial differentiation, first-order operators) lower the
/// depth instead of refilling it numerically.
struct JetDepth {
    int x = 3;
    bool t = true;
    bool tx = true;

    static constexpr JetDepth full() { return {3, true, true}; }

    friend constexpr bool operator==(const JetDepth&, const JetDepth&) = default;

    /// Elementwise minimum; tx additionally needs x >= 1 and t.
    friend constexpr JetDepth meet(const JetDepth& a, const JetDepth& b) {
        JetDepth d{std::min(a.x, b.x), a.t && b.t, a.tx && b.tx};
        d.tx = d.tx && d.t && d.x >= 1;
        return d;
    }
};

enum class JetEntry { v, x, xx, xxx, t, tx };

inline const char* to_string(JetEntry e) {
    switch (e) {
        case JetEntry::v: return "v";
        case JetEntry::x: return "v_x";
        case JetEntry::xx: return "v_xx";
        case JetEntry::xxx: return "v_xxx";
        case JetEntry::t: return "v_t";
        case JetEntry::tx: return "v_tx";
    }
    return "?";
}

inline bool carries(const JetDepth& d, JetEntry e) {
    switch (e) {
        case JetEntry::v: return true;
        case JetEntry::x: return d.x >= 1;
        case JetEntry::xx: return d.x >= 2;
        case JetEntry::xxx: return d.x >= 3;
        case JetEntry::t: return d.t;
        case JetEntry::tx: return d.tx;
    }
    return false;
}

/// Value of a scalar field and its partial derivatives at one point:
/// v, v_x, v_xx, v_xxx, v_t, v_tx.
///
/// Entries outside `depth()` are stored as NaN; the checked accessors throw
/// JetDepthError when asked for them.
class Jet {
public:
    static constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    constexpr Jet() = default;

    constexpr Jet(double v, double vx, double vxx, double vxxx, double vt, double vtx,
                  JetDepth depth = JetDepth::full())
        : e_{v, vx, vxx, vxxx, vt, vtx}, depth_(depth) {
        mask();
    }

    static constexpr Jet constant(double c) { return {c, 0, 0, 0, 0, 0}; }

    /// Jet of a function of t alone.
    static constexpr Jet time_only(double f, double fdot) { return {f, 0, 0, 0, fdot, 0}; }

    double v() const { return e_[0]; }
    double x() const { return get(JetEntry::x); }
    double xx() const { return get(JetEntry::xx); }
    double xxx() const { return get(JetEntry::xxx); }
    double t() const { return get(JetEntry::t); }
    double tx() const { return get(JetEntry::tx); }

    double get(JetEntry e) const {
        if (!carries(depth_, e)) {
            throw JetDepthError(std::string("jet entry ") + to_string(e) +
                                " not carried at this depth");
        }
        return e_[static_cast<std::size_t>(e)];
    }

    bool has(JetEntry e) const { return carries(depth_, e); }

    const JetDepth& depth() const noexcept { return depth_; }

    /// Raw storage; unavailable entries are NaN.
    const std::array<double, 6>& raw() const noexcept { return e_; }

    bool all_finite() const {
        for (auto e : {JetEntry::v, JetEntry::x, JetEntry::xx, JetEntry::xxx, JetEntry::t,
                       JetEntry::tx}) {
            if (has(e) && !std::isfinite(e_[static_cast<std::size_t>(e)])) return false;
        }
        return true;
    }

    friend Jet operator+(const Jet& a, const Jet& b) {
        const auto& p = a.e_;
        const auto& q = b.e_;
        return {p[0] + q[0], p[1] + q[1], p[2] + q[2], p[3] + q[3],
                p[4] + q[4], p[5] + q[5], meet(a.depth_, b.depth_)};
    }

    friend Jet operator-(const Jet& a) {
        const auto& p = a.e_;
        return {-p[0], -p[1], -p[2], -p[3], -p[4], -p[5], a.depth_};
    }

    friend Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }

    friend Jet operator*(double c, const Jet& a) {
        const auto& p = a.e_;
        return {c * p[0], c * p[1], c * p[2], c * p[3], c * p[4], c * p[5], a.depth_};
    }

    /// Leibniz rule through every stored order.
    friend Jet operator*(const Jet& a, const Jet& b) {
        const auto& [f, fx, fxx, fxxx, ft, ftx] = a.e_;
        const auto& [g, gx, gxx, gxxx, gt, gtx] = b.e_;
        return {f * g,
                fx * g + f * gx,
                fxx * g + 2.0 * fx * gx + f * gxx,
                fxxx * g + 3.0 * fxx * gx + 3.0 * fx * gxx + f * gxxx,
                ft * g + f * gt,
                ftx * g + ft * gx + fx * gt + f * gtx,
                meet(a.depth_, b.depth_)};
    }

    /// Spatial derivative: shifts x-orders down by one; v_tx becomes the new v_t.
    friend Jet dx(const Jet& a) {
        if (a.depth_.x < 1) throw JetDepthError("cannot differentiate a depth-0 jet in x");
        const auto& p = a.e_;
        JetDepth d{a.depth_.x - 1, a.depth_.tx, false};
        return {p[1], p[2], p[3], nan, p[5], nan, d};
    }

private:
    constexpr void mask() {
        if (depth_.x < 1) e_[1] = nan;
        if (depth_.x < 2) e_[2] = nan;
        if (depth_.x < 3) e_[3] = nan;
        if (!depth_.t) e_[4] = nan;
        if (!depth_.tx) e_[5] = nan;
    }

    std::array<double, 6> e_{0, 0, 0, 0, 0, 0};
    JetDepth depth_{};
};

/// Derivatives g(u), g'(u), g''(u), g'''(u) of an outer scalar function.
struct OuterDerivatives {
    double g0, g1, g2, g3;
};

/// Chain rule (Faa di Bruno through third order) for h = g(f).
inline Jet compose(const Jet& f, const OuterDerivatives& g) {
    const auto& [u, ux, uxx, uxxx, ut, utx] = f.raw();
    return {g.g0,
            g.g1 * ux,
            g.g2 * ux * ux + g.g1 * uxx,
            g.g3 * ux * ux * ux + 3.0 * g.g2 * ux * uxx + g.g1 * uxxx,
            g.g1 * ut,
            g.g2 * ut * ux + g.g1 * utx,
            f.depth()};
}

inline Jet exp(const Jet& f) {
    const double e = std::exp(f.v());
    return compose(f, {e, e, e, e});
}

inline Jet log(const Jet& f) {
    const double u = f.v();
    return compose(f, {std::log(u), 1.0 / u, -1.0 / (u * u), 2.0 / (u * u * u)});
}

inline Jet pow(const Jet& f, double p) {
    const double u = f.v();
    const double a = std::pow(u, p - 3.0);
    return compose(f, {a * u * u * u, p * a * u * u, p * (p - 1.0) * a * u,
                       p * (p - 1.0) * (p - 2.0) * a});
}

inline Jet reciprocal(const Jet& f) {
    const double r = 1.0 / f.v();
    return compose(f, {r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r});
}

inline Jet sin(const Jet& f) {
    const double s = std::sin(f.v()), c = std::cos(f.v());
    return compose(f, {s, c, -s, -c});
}

inline Jet cos(const Jet& f) {
    const double s = std::sin(f.v()), c = std::cos(f.v());
    return compose(f, {c, -s, -c, s});
}

inline Jet sinh(const Jet& f) {
    const double s = std::sinh(f.v()), c = std::cosh(f.v());
    return compose(f, {s, c, s, c});
}

inline Jet cosh(const Jet& f) {
    const double s = std::sinh(f.v()), c = std::cosh(f.v());
    return compose(f, {c, s, c, s});
}

inline Jet atan(const Jet& f) {
    const double u = f.v();
    const double q = 1.0 / (1.0 + u * u);
    return compose(f, {std::atan(u), q, -2.0 * u * q * q, (6.0 * u * u - 2.0) * q * q * q});
}

}  // namespace fpesusy
