#pragma once

#include <string>

#include "fpesusy/fpe.hpp"

namespace fpesusy {

namespace detail {

/// ln psi0 with a positivity guard on every evaluation.
inline Field log_seed(const Field& psi0) {
    return Field(
        [psi0](double x, double t) {
            const Jet j = psi0(x, t);
            if (!(j.v() > 0.0)) {
                throw ZeroCrossingError("Darboux seed '" + psi0.name() +
                                        "' is not positive at (x=" + std::to_string(x) +
                                        ", t=" + std::to_string(t) + ")");
            }
            return fpesusy::log(j);
        },
        psi0.domain(), "ln " + psi0.name(), psi0.depth());
}

inline double riccati_side(const Jet& w, double curvature_sign, double time_sign) {
    return w.x() * w.x() + curvature_sign * w.xx() + time_sign * w.t();
}

}  // namespace detail

/// Darboux-transformed potential  V - 2 (ln psi0)''.
inline SchrodingerPotential darboux_potential(const SchrodingerPotential& pot, const Field& psi0) {
    if (psi0.depth().x < 2) throw JetDepthError("darboux_potential needs psi0''");
    const Field lg = detail::log_seed(psi0);
    const Field& v = pot.V;
    Field vt(
        [v, lg](double x, double t) {
            return Jet::constant(v.value(x, t) - 2.0 * lg(x, t).xx());
        },
        detail::shared_domain(v, lg), "V~[" + v.name() + "; " + psi0.name() + "]",
        JetDepth{0, false, false});
    return {std::move(vt), PotentialConvention::transformed, pot.alpha, std::nullopt};
}

/// Darboux-transformed solution  (d/dx - (ln psi0)') psi.
inline Field darboux_solution(const Field& psi, const Field& psi0) {
    const Field g = scale(dx(detail::log_seed(psi0)), -1.0);
    return first_order_apply(g, psi).renamed("A[" + psi0.name() + "]" + psi.name());
}

/// Residual of the first generalized Riccati equation:
/// (W0'^2 - W0'' - dW0/dt) - (Wt'^2 - Wt'' + dWt/dt).
inline ResidualReport riccati_residual_R1(const Field& w0, const Field& wtil0, const Grid& grid) {
    detail::require_inside(w0.domain(), grid, w0.name());
    detail::require_inside(wtil0.domain(), grid, wtil0.name());
    return detail::sweep(grid, [&](double x, double t) {
        return detail::riccati_side(w0(x, t), -1.0, -1.0) -
               detail::riccati_side(wtil0(x, t), -1.0, +1.0);
    });
}

/// Residual of the second generalized Riccati equation:
/// (Wt'^2 + Wt'' + dWt/dt) - (W1'^2 - W1'' - dW1/dt).
inline ResidualReport riccati_residual_R2(const Field& wtil0, const Field& w1, const Grid& grid) {
    detail::require_inside(wtil0.domain(), grid, wtil0.name());
    detail::require_inside(w1.domain(), grid, w1.name());
    return detail::sweep(grid, [&](double x, double t) {
        return detail::riccati_side(wtil0(x, t), +1.0, +1.0) -
               detail::riccati_side(w1(x, t), -1.0, -1.0);
    });
}

/// Auxiliary prepotential Wt with e^{-Wt} solving the Schrodinger-like
/// equation of W0. Only obtainable through make_auxiliary, which verifies
/// the first Riccati equation.
class AuxiliaryPrepotential {
public:
    const Field& source() const { return w0_; }
    const Field& wtil0() const { return wtil0_; }
    /// psi0 = e^{-Wt}; positive by construction.
    Field seed() const { return exp_neg(wtil0_).renamed("e^{-" + wtil0_.name() + "}"); }
    const ResidualReport& r1() const { return r1_; }

    friend AuxiliaryPrepotential make_auxiliary(const Field& w0, const Field& wtil0,
                                                const Grid& grid, double tol);

private:
    AuxiliaryPrepotential(Field w0, Field wt, ResidualReport r1)
        : w0_(std::move(w0)), wtil0_(std::move(wt)), r1_(r1) {}

    Field w0_;
    Field wtil0_;
    ResidualReport r1_;
};

inline AuxiliaryPrepotential make_auxiliary(const Field& w0, const Field& wtil0, const Grid& grid,
                                            double tol = 1e-8) {
    const ResidualReport r1 = riccati_residual_R1(w0, wtil0, grid);
    if (!r1.passed(tol)) {
        throw VerificationError("auxiliary '" + wtil0.name() + "' fails R1 for '" + w0.name() +
                                "': l_inf=" + std::to_string(r1.l_inf));
    }
    return {w0, wtil0, r1};
}

/// Original and partner prepotentials linked through an auxiliary.
struct PartnerPair {
    Field w0;
    Field w1;
    AuxiliaryPrepotential aux;
    Field drift0;
    Field drift1;
    ResidualReport r2;

    FpeProblem original() const { return {w0, drift0, "-2W0'"}; }
    FpeProblem partner() const { return {w1, drift1, "-2W1'"}; }
};

/// Partner with an externally supplied W1, accepted only if it passes R2.
inline PartnerPair make_partner(const AuxiliaryPrepotential& aux, const Field& w1, const Grid& grid,
                                double tol = 1e-8) {
    const ResidualReport r2 = riccati_residual_R2(aux.wtil0(), w1, grid);
    if (!r2.passed(tol)) {
        throw VerificationError("W1 '" + w1.name() + "' fails R2: l_inf=" +
                                std::to_string(r2.l_inf));
    }
    return {aux.source(), w1, aux, drift_from_prepotential(aux.source()),
            drift_from_prepotential(w1), r2};
}

/// Partner on the branch W1 = -Wt.
inline PartnerPair trivial_partner(const AuxiliaryPrepotential& aux, const Grid& grid) {
    return make_partner(aux, scale(aux.wtil0(), -1.0).renamed("-(" + aux.wtil0().name() + ")"),
                        grid);
}

/// Partner solution  P1 = e^{-W1} (d/dx + Wt') (e^{W0} P0).
/// Positivity and normalization of P1 are not implied.
inline Field partner_solution(const Field& p0, const PartnerPair& pair) {
    const Field psi = gauge_to_schrodinger(p0, pair.w0);
    const Field psi1 = first_order_apply(dx(pair.aux.wtil0()), psi);
    return gauge_from_schrodinger(psi1, pair.w1).renamed("partner[" + p0.name() + "]");
}

}  // namespace fpesusy
