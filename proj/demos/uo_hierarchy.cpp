// Forward and backward hierarchy members of the Uhlenbeck-Ornstein process,
// plus the same first member rebuilt from the eigenfunction series.

#include <iostream>

#include "fpesusy/catalog.hpp"
#include "fpesusy/hierarchy.hpp"
#include "fpesusy/numerics.hpp"
#include "fpesusy/stationary.hpp"

int main() {
    using namespace fpesusy;
    const double gamma = 1.0;
    const Grid grid = catalog::reference_grid(4.0);
    const auto seq = catalog::uo_sequence(gamma);
    const Field p0 = catalog::uo_seed_P0(gamma).P;

    Field fwd = p0, bwd = p0;
    for (int k = 1; k <= 2; ++k) {
        fwd = forward_step_stationary(fwd, seq, k);
        bwd = backward_step_stationary(bwd, seq, k);
        const auto cf = numerics::compare(fwd, catalog::uo_hierarchy_closed(k, gamma).P, grid);
        const auto cb = numerics::compare(bwd, catalog::uo_hierarchy_closed(-k, gamma).P, grid);
        std::cout << "P+" << k << " vs closed form: " << cf.l_inf_rel << "  (s=" << cf.fitted_scalar
                  << ")\n";
        std::cout << "P-" << k << " vs closed form: " << cb.l_inf_rel << "  (s=" << cb.fitted_scalar
                  << ")\n";
    }

    const auto eig = uo_eigensystem(gamma, 80);
    const auto pe = apply_A0(expand_initial(DeltaStart{0.0}, eig), eig);
    const Field series = partner_series(pe, 1.0);
    const Field p1 = forward_step_stationary(p0, seq, 1);
    std::cout << "series P1 at x=0.5, t=1: " << series.value(0.5, 0.0)
              << "  hierarchy: " << p1.value(0.5, 1.0) << "\n";
}
