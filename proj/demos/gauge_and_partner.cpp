// Partner of the time-dependent oscillator seed through the exponential
// auxiliary, compared with its closed form.

#include <iostream>

#include "fpesusy/catalog.hpp"
#include "fpesusy/darboux.hpp"
#include "fpesusy/numerics.hpp"

int main() {
    using namespace fpesusy;
    const double a = 1.0, c = 1.0;
    const Grid grid = catalog::reference_grid(12.0);

    const auto p0 = catalog::guo_seed_P0(c);
    const auto aux = catalog::guo_auxiliary(a, c, grid);
    const auto pair = trivial_partner(aux, grid);
    const Field p1 = partner_solution(p0.P, pair);

    std::cout << "R1 l_inf            " << aux.r1().l_inf << "\n";
    std::cout << "R2 l_inf            " << pair.r2.l_inf << "\n";
    std::cout << "partner residual    " << fpe_residual(p1, pair.partner(), grid).l_inf << "\n";

    const auto cmp = numerics::compare(p1, catalog::guo_partner_P1(a, c).P, grid);
    std::cout << "fitted scalar       " << cmp.fitted_scalar << "\n";
    std::cout << "masked rel. l_inf   " << cmp.l_inf_rel << "\n";
    std::cout << "mass of P1 at t=1   " << numerics::quadrature(p1, 1.0, -20.0, 20.0) << "\n";
}
