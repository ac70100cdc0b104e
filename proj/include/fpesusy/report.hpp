#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include <nlohmann/json.hpp>

namespace fpesusy {

/// Summary of a pointwise residual over a grid.
///
/// `l2` is the root-mean-square of the residual over all nodes, so it is
/// comparable with `l_inf` regardless of grid size.
struct ResidualReport {
    double l_inf = 0.0;
    double l2 = 0.0;
    double argmax_x = std::numeric_limits<double>::quiet_NaN();
    double argmax_t = std::numeric_limits<double>::quiet_NaN();
    std::size_t nx = 0;
    std::size_t nt = 0;

    bool passed(double tol) const { return l_inf < tol; }
};

/// Accumulates residual samples in a fixed iteration order; the first
/// location attaining the maximum wins ties.
class ResidualAccumulator {
public:
    void add(double r, double x, double t) {
        const double a = std::abs(r);
        ++count_;
        sum_sq_ += a * a;
        if (std::isnan(a)) {
            rep_.l_inf = std::numeric_limits<double>::infinity();
            rep_.argmax_x = x;
            rep_.argmax_t = t;
            nan_ = true;
        } else if (!nan_ && (a > rep_.l_inf || count_ == 1)) {
            rep_.l_inf = a;
            rep_.argmax_x = x;
            rep_.argmax_t = t;
        }
    }

    ResidualReport finish(std::size_t nx, std::size_t nt) const {
        ResidualReport r = rep_;
        r.l2 = count_ ? std::sqrt(sum_sq_ / static_cast<double>(count_)) : 0.0;
        if (nan_) r.l2 = std::numeric_limits<double>::infinity();
        r.nx = nx;
        r.nt = nt;
        return r;
    }

private:
    ResidualReport rep_{};
    double sum_sq_ = 0.0;
    std::size_t count_ = 0;
    bool nan_ = false;
};

inline nlohmann::json to_json(const ResidualReport& r) {
    auto num = [](double v) -> nlohmann::json {
        if (std::isfinite(v)) return v;
        return nullptr;
    };
    return {{"l_inf", num(r.l_inf)},
            {"l2", num(r.l2)},
            {"argmax_x", num(r.argmax_x)},
            {"argmax_t", num(r.argmax_t)},
            {"grid_shape", {r.nx, r.nt}}};
}

}  // namespace fpesusy
