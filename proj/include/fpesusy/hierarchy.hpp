#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <nlohmann/json.hpp>

#include "fpesusy/darboux.hpp"
#include "fpesusy/fpe.hpp"

namespace fpesusy {

/// Shape-invariant prepotential family W0(x; a) with parameter rule
/// a_{n+1} = a_n + step and x-independent shift R(a).
///
/// Parameters enter as fields of t, so a time-dependent a_n(t) carries its
/// own derivative into dW0/dt.
struct ShapeInvariantFamily {
    std::string name;
    std::function<Field(const Field& a)> prepotential;
    std::function<Field(const Field& a)> shift;
    double step = 0.0;
    std::string rule;
    std::function<bool(double)> valid = [](double) { return true; };
    Domain x_domain = Domain::everywhere();
    std::string drift_formula;
};

/// Indexed parameters a_m(t) anchored at a_n(t) = top.
class ParameterSequence {
public:
    ParameterSequence(std::shared_ptr<const ShapeInvariantFamily> family, Field top, int n,
                      std::optional<int> n_min = std::nullopt)
        : family_(std::move(family)), top_(std::move(top)), n_(n), n_min_(n_min) {}

    /// Closed-form antiderivative F_m(t) of R(a_m(t)); otherwise the
    /// accumulated shift is integrated numerically.
    ParameterSequence& with_shift_antiderivative(std::function<double(int, double)> f) {
        antiderivative_ = std::move(f);
        return *this;
    }

    const ShapeInvariantFamily& family() const { return *family_; }
    std::shared_ptr<const ShapeInvariantFamily> family_ptr() const { return family_; }
    int top_index() const { return n_; }
    std::optional<int> n_min() const { return n_min_; }
    const std::function<double(int, double)>& shift_antiderivative() const {
        return antiderivative_;
    }

    /// a_m(t); throws HierarchyError below n_min.
    Field a(int m) const {
        if (n_min_ && m < *n_min_) {
            throw HierarchyError("parameter index " + std::to_string(m) + " is below n_min=" +
                                 std::to_string(*n_min_) + " for family " + family_->name);
        }
        const double offset = (m - n_) * family_->step;
        if (offset == 0.0) return top_;
        return add(top_, constant(offset)).renamed("a_" + std::to_string(m));
    }

    Field W(int m) const { return family_->prepotential(a(m)); }
    Field R(int m) const { return family_->shift(a(m)); }

    /// Throws HierarchyError unless a_m(t) is inside the family's validity
    /// domain at every listed time.
    void require_valid(int m, const std::vector<double>& times) const {
        const Field am = a(m);
        for (double t : times) {
            const double v = am.value(0.0, t);
            if (!family_->valid(v)) {
                throw HierarchyError("parameter a_" + std::to_string(m) + "=" + std::to_string(v) +
                                     " leaves the validity domain of " + family_->name);
            }
        }
    }

private:
    std::shared_ptr<const ShapeInvariantFamily> family_;
    Field top_;
    int n_;
    std::optional<int> n_min_;
    std::function<double(int, double)> antiderivative_;
};

/// W_k = W0(x; a_{n-k}(t)) + integral_{t_ref}^{t} sum_{s=n-k}^{n-1} R(a_s) dt.
class HierarchyPrepotential {
public:
    HierarchyPrepotential(ParameterSequence seq, int k, double t_ref)
        : seq_(std::move(seq)), k_(k), t_ref_(t_ref) {
        if (k < 0) throw HierarchyError("hierarchy index k must be non-negative");
        if (!std::isfinite(t_ref)) throw HierarchyError("reference time must be finite");
    }

    int k() const { return k_; }
    double t_ref() const { return t_ref_; }
    const ParameterSequence& sequence() const { return seq_; }
    int parameter_index() const { return seq_.top_index() - k_; }

    /// Accumulated shift as a field of t alone, zero at t_ref.
    Field accumulated_shift() const {
        const int n = seq_.top_index();
        std::vector<Field> shifts;
        std::vector<int> idx;
        for (int s = n - k_; s <= n - 1; ++s) {
            shifts.push_back(seq_.R(s));
            idx.push_back(s);
        }
        const double t0 = t_ref_;
        auto anti = seq_.shift_antiderivative();
        Domain dom = Domain::everywhere();
        for (const auto& r : shifts) dom = dom.intersect(r.domain());
        return Field(
            [shifts, idx, t0, anti](double, double t) {
                double rate = 0.0, integral = 0.0;
                for (std::size_t i = 0; i < shifts.size(); ++i) {
                    const Field& r = shifts[i];
                    rate += r.value(0.0, t);
                    if (anti) {
                        integral += anti(idx[i], t) - anti(idx[i], t0);
                    } else if (t != t0) {
                        integral += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                            [&r](double tau) { return r.value(0.0, tau); }, t0, t, 15, 1e-14);
                    }
                }
                return Jet::time_only(integral, rate);
            },
            dom, "S_" + std::to_string(k_));
    }

    Field field() const {
        const Field base = seq_.W(parameter_index());
        if (k_ == 0) return base.renamed("W_0");
        return add(base, accumulated_shift()).renamed("W_" + std::to_string(k_));
    }

    FpeProblem problem() const {
        return FpeProblem::from_prepotential(field(), seq_.family().drift_formula + " at a_" +
                                                          std::to_string(parameter_index()));
    }

private:
    ParameterSequence seq_;
    int k_;
    double t_ref_;
};

/// Residual of the shape-invariance condition
/// [W'(a_n)^2 + W''(a_n)] - [W'(a_next)^2 - W''(a_next) + R(a_n)].
inline ResidualReport shape_invariance_residual(const ShapeInvariantFamily& family,
                                                const Field& a_n, const Field& a_next,
                                                const Field& shift, const Grid& grid) {
    const Field w0 = family.prepotential(a_n);
    const Field w1 = family.prepotential(a_next);
    detail::require_inside(w0.domain(), grid, w0.name());
    detail::require_inside(w1.domain(), grid, w1.name());
    return detail::sweep(grid, [&](double x, double t) {
        const Jet p = w0(x, t);
        const Jet q = w1(x, t);
        return (p.x() * p.x() + p.xx()) - (q.x() * q.x() - q.xx() + shift.value(x, t));
    });
}

/// Outcome of the check dW0(x; a_prev)/dt == dW0(x; a_n)/dt.
struct ConditionReport {
    bool passed = false;
    double tolerance = 1e-10;
    ResidualReport residual;
};

inline ConditionReport multiplicative_condition_check(const ShapeInvariantFamily& family,
                                                      const Field& a_prev, const Field& a_n,
                                                      const Grid& grid, double tol = 1e-10) {
    const Field w_prev = family.prepotential(a_prev);
    const Field w_n = family.prepotential(a_n);
    detail::require_inside(w_prev.domain(), grid, w_prev.name());
    detail::require_inside(w_n.domain(), grid, w_n.name());
    ConditionReport rep;
    rep.tolerance = tol;
    rep.residual = detail::sweep(
        grid, [&](double x, double t) { return w_prev(x, t).t() - w_n(x, t).t(); });
    rep.passed = rep.residual.l_inf < tol;
    return rep;
}

/// R(a) must not depend on x.
inline ResidualReport shift_x_dependence(const Field& shift, const Grid& grid) {
    return detail::sweep(grid, [&](double x, double t) {
        const Jet j = shift(x, t);
        return std::abs(j.x()) + std::abs(j.xx());
    });
}

namespace detail {

inline std::vector<double> grid_times(const Grid& g) {
    std::vector<double> ts;
    for (std::size_t n = 0; n < g.nt; ++n) ts.push_back(g.t(n));
    return ts;
}

}  // namespace detail

/// One step of the time-dependent hierarchy:
/// P_k = e^{-W_k} (d/dx - W_k') (e^{W_{k-1}} P_{k-1}).
///
/// Refuses the step with HierarchyError when condition (W0) fails on
/// `check_grid` for the parameter pair (a_{n-k}, a_{n-k+1}).
inline Field hierarchy_step_td(const Field& p_prev, const HierarchyPrepotential& w_prev,
                               const HierarchyPrepotential& w_k, const Grid& check_grid) {
    if (w_k.k() != w_prev.k() + 1) {
        throw HierarchyError("hierarchy step needs consecutive indices, got " +
                             std::to_string(w_prev.k()) + " -> " + std::to_string(w_k.k()));
    }
    if (p_prev.depth().x < 1) {
        throw JetDepthError("hierarchy step needs the x-derivative of '" + p_prev.name() + "'");
    }
    const ParameterSequence& seq = w_k.sequence();
    const int m = w_k.parameter_index();
    seq.require_valid(m, detail::grid_times(check_grid));
    const ConditionReport cond =
        multiplicative_condition_check(seq.family(), seq.a(m), seq.a(m + 1), check_grid);
    if (!cond.passed) {
        throw HierarchyError("condition dW0(a_" + std::to_string(m) + ")/dt = dW0(a_" +
                             std::to_string(m + 1) + ")/dt fails: l_inf=" +
                             std::to_string(cond.residual.l_inf));
    }
    const Field wk = w_k.field();
    const Field psi = gauge_to_schrodinger(p_prev, w_prev.field());
    const Field moved = first_order_apply(scale(dx(wk), -1.0), psi);
    return gauge_from_schrodinger(moved, wk).renamed("P_" + std::to_string(w_k.k()));
}

namespace detail {

inline void require_stationary(const ParameterSequence& seq, int m) {
    const Jet a = seq.a(m)(0.0, 0.0);
    const Jet r = seq.R(m)(0.0, 0.0);
    if (a.t() != 0.0 || r.t() != 0.0) {
        throw HierarchyError("stationary hierarchy step needs time-independent parameters");
    }
}

}  // namespace detail

/// Backward step (parameter index decreasing):
/// P_k = e^{-W0(a_{n-k}) - R(a_{n-k}) t} (d/dx - W0'(a_{n-k})) (e^{W0(a_{n-k+1})} P_{k-1}).
inline Field backward_step_stationary(const Field& p_prev, const ParameterSequence& seq, int k) {
    if (k < 1) throw HierarchyError("backward step index must be >= 1");
    const int m = seq.top_index() - k;
    seq.require_valid(m, {0.0});
    detail::require_stationary(seq, m);
    detail::require_stationary(seq, m + 1);
    const Field w_low = seq.W(m);
    const Field psi = gauge_to_schrodinger(p_prev, seq.W(m + 1));
    const Field moved = first_order_apply(scale(dx(w_low), -1.0), psi);
    const Field exponent = add(w_low, mul(seq.R(m), t_field()));
    return gauge_from_schrodinger(moved, exponent).renamed("P_-" + std::to_string(k));
}

/// Forward step (parameter index increasing):
/// P_k = e^{-(W0(a_{n+k}) - R(a_{n+k-1}) t)} (d/dx + W0'(a_{n+k-1})) (e^{W0(a_{n+k-1})} P_{k-1}).
inline Field forward_step_stationary(const Field& p_prev, const ParameterSequence& seq, int k) {
    if (k < 1) throw HierarchyError("forward step index must be >= 1");
    const int m = seq.top_index() + k;
    seq.require_valid(m, {0.0});
    detail::require_stationary(seq, m);
    detail::require_stationary(seq, m - 1);
    const Field w_from = seq.W(m - 1);
    const Field psi = gauge_to_schrodinger(p_prev, w_from);
    const Field moved = first_order_apply(dx(w_from), psi);
    const Field exponent = sub(seq.W(m), mul(seq.R(m - 1), t_field()));
    return gauge_from_schrodinger(moved, exponent).renamed("P_+" + std::to_string(k));
}

/// One entry of a serialized hierarchy run.
struct HierarchyRecord {
    int k = 0;
    std::string drift;
    ResidualReport residual;
    std::string residual_mode;
    std::optional<double> comparison_scalar;
    std::optional<double> comparison_l_inf_rel;
};

inline nlohmann::json to_json(const HierarchyRecord& r) {
    nlohmann::json j = {{"k", r.k},
                        {"drift", r.drift},
                        {"residual", to_json(r.residual)},
                        {"residual_mode", r.residual_mode}};
    j["comparison_scalar"] =
        r.comparison_scalar ? nlohmann::json(*r.comparison_scalar) : nlohmann::json(nullptr);
    j["comparison_l_inf_rel"] =
        r.comparison_l_inf_rel ? nlohmann::json(*r.comparison_l_inf_rel) : nlohmann::json(nullptr);
    return j;
}

}  // namespace fpesusy
