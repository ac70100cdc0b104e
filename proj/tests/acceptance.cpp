// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fpesusy/catalog.hpp"
#include "fpesusy/darboux.hpp"
#include "fpesusy/hierarchy.hpp"
#include "fpesusy/numerics.hpp"
#include "fpesusy/stationary.hpp"

using namespace fpesusy;

namespace {

struct Outcome {
    bool passed = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) passed = false;
        detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [x]");
    }
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.check(false, std::string("exception: ") + e.what());
    }
    std::printf("%s  %d  %-36s %s  (%.2f s)\n", o.passed ? "PASS" : "FAIL", id, title.c_str(),
                o.detail.str().c_str(), seconds_since(t0));
    std::fflush(stdout);
    return o.passed ? 0 : 1;
}

std::shared_ptr<ShapeInvariantFamily> nonlinear_family() {
    auto f = std::make_shared<ShapeInvariantFamily>();
    f->name = "sin(a x)";
    f->prepotential = [](const Field& a) { return sin(mul(a, x_field())); };
    f->shift = [](const Field&) { return constant(0.0); };
    f->step = 1.0;
    return f;
}

void exact_solutions(Outcome& o) {
    double worst = 0.0;
    double slowest = 0.0;
    std::size_t count = 0;
    for (const auto& entry : catalog::entries()) {
        const Grid g = entry.grid(entry.defaults);
        for (const auto& sol : entry.solutions(entry.defaults)) {
            const auto t0 = std::chrono::steady_clock::now();
            const double r = fpe_residual(sol.P, sol.problem(), g).l_inf;
            slowest = std::max(slowest, seconds_since(t0));
            if (!(r < 1e-6)) o.check(false, entry.name + "/" + sol.name + " residual " + sci(r));
            worst = std::max(worst, r);
            ++count;
        }
    }
    o.check(worst < 1e-6, std::to_string(count) + " solutions, max residual " + sci(worst) + " < 1e-06");
    o.check(slowest < 5.0, "slowest " + sci(slowest) + " s < 5 s");
}

void constructions(Outcome& o) {
    const double a = 1.0, c = 1.0;
    const Grid gp = catalog::reference_grid(12.0);
    const auto pair = trivial_partner(catalog::guo_auxiliary(a, c, gp), gp);
    const Field p1 = partner_solution(catalog::guo_seed_P0(c).P, pair);
    const auto cp = numerics::compare(p1, catalog::guo_partner_P1(a, c).P, gp);
    o.check(cp.l_inf_rel < 1e-8, "darboux P1 rel " + sci(cp.l_inf_rel) + " (s=" + sci(cp.fitted_scalar) + ")");

    const auto entry = catalog::entry("guo");
    const Grid g = entry.grid({{"C", c}});
    const auto seq = catalog::guo_sequence(c);
    const HierarchyPrepotential w0(seq, 0, g.t_start), w1(seq, 1, g.t_start), w2(seq, 2, g.t_start);
    const Field h1 = hierarchy_step_td(catalog::guo_seed_P0(c).P, w0, w1, g);
    const Field h2 = hierarchy_step_td(h1, w1, w2, g);
    const auto c1 = numerics::compare(h1, catalog::guo_hierarchy_closed(1, c).P, g);
    const auto c2 = numerics::compare(h2, catalog::guo_hierarchy_closed(2, c).P, g);
    o.check(c1.l_inf_rel < 1e-8, "hierarchy P1 rel " + sci(c1.l_inf_rel));
    o.check(c2.l_inf_rel < 1e-8, "hierarchy P2 rel " + sci(c2.l_inf_rel));
}

void riccati(Outcome& o) {
    const Grid g = catalog::reference_grid(4.0);
    const Field w0 = catalog::guo_prepotential(catalog::guo_gamma(1.0));
    const Field wt = catalog::guo_auxiliary_field(1.0, 1.0);
    const double r1 = riccati_residual_R1(w0, wt, g).l_inf;
    const double r2 = riccati_residual_R2(wt, scale(wt, -1.0), g).l_inf;
    o.check(r1 < 1e-10, "R1 " + sci(r1) + " < 1e-10");
    o.check(r2 < 1e-12, "R2 " + sci(r2) + " < 1e-12");

    const auto stub = catalog::si_family_stub("oscillator-1d");
    const Field gamma = catalog::guo_gamma(1.0);
    const Field w = stub.family->prepotential(gamma);
    const Field r = stub.family->shift(gamma);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(-6.0, 6.0), ut(0.01, 5.0);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double x = ux(rng), t = ut(rng);
        const Jet p = w(x, t);
        worst = std::max(worst, std::abs((p.x() * p.x() + p.xx()) -
                                         (p.x() * p.x() - p.xx() + r.value(x, t))));
    }
    o.check(worst < 1e-12, "SI at 1e4 random points " + sci(worst) + " < 1e-12");
}

void forward_backward(Outcome& o) {
    const double gamma = 1.0;
    const auto entry = catalog::entry("uo");
    const Grid g = entry.grid({{"gamma", gamma}});
    const auto seq = catalog::uo_sequence(gamma);
    const Field p0 = catalog::uo_seed_P0(gamma).P;
    const Field fwd = forward_step_stationary(p0, seq, 1);
    const Field bwd = backward_step_stationary(p0, seq, 1);
    const auto cmp = numerics::compare(fwd, bwd, g);
    o.check(cmp.l_inf_rel < 1e-8, "P+1 vs P-1 rel " + sci(cmp.l_inf_rel) + " (s=" + sci(cmp.fitted_scalar) + ")");
}

void crank_nicolson(Outcome& o) {
    const auto p0 = catalog::guo_seed_P0(1.0);
    const Field drift = p0.problem().drift;
    auto error = [&](const Grid& g) {
        const auto ev = numerics::evolve_fpe(numerics::sample(p0.P, g, g.t_start), drift, g);
        return numerics::max_error(ev.levels.back(), p0.P);
    };
    const auto t0 = std::chrono::steady_clock::now();
    const double fine = error(Grid{-10.0, 10.0, 401, 0.25, 1.0, 151});
    const double coarse = error(Grid{-10.0, 10.0, 201, 0.25, 1.0, 76});
    const double elapsed = seconds_since(t0);
    const double ratio = coarse / fine;
    o.check(fine < 1e-3, "L_inf " + sci(fine) + " at dx=0.05 dt=0.005");
    o.check(ratio >= 3.0 && ratio <= 5.0, "halving ratio " + sci(ratio) + " in [3,5]");
    o.check(elapsed < 30.0, "runtime " + sci(elapsed) + " s < 30 s");
}

void series(Outcome& o) {
    const double gamma = 1.0;
    const auto eig = uo_eigensystem(gamma, 100);
    const auto c = expand_initial(DeltaStart{0.0}, eig);
    const Field exact = catalog::uo_seed_P0(gamma).P;
    for (double t : {0.5, 1.0}) {
        const std::size_t n = choose_truncation(c, eig, t);
        const Field p = evolve_expansion(c, eig, t);
        double worst = 0.0;
        for (int i = 0; i <= 240; ++i) {
            const double x = -6.0 + 12.0 * i / 240;
            worst = std::max(worst, std::abs(p.value(x, 0.0) - exact.value(x, t)));
        }
        o.check(n <= 100 && worst < 1e-8,
                "t=" + std::string(t == 0.5 ? "0.5" : "1") + " N=" + std::to_string(n) + " L_inf " + sci(worst));
    }
    const auto pe = apply_A0(c, eig);
    const SchrodingerPotential vbar = potential_minus(pe.prepotential);
    double worst = 0.0;
    for (std::size_t n = 0; n <= 10; ++n) {
        worst = std::max(worst, eigen_residual(pe.states[n], vbar, pe.eigenvalues[n], -6, 6).l_inf);
    }
    o.check(worst < 1e-7, "partner spectrum n<=10 residual " + sci(worst));
}

void negative_controls(Outcome& o) {
    const Grid g = catalog::reference_grid(4.0);
    const Field w0 = catalog::guo_prepotential(catalog::guo_gamma(1.0));
    const Field wt = catalog::guo_auxiliary_field(1.0, 1.0);
    const std::vector<std::pair<std::string, Field>> perturbed{
        {"+0.1x^2", add(wt, scale(mul(x_field(), x_field()), 0.1))},
        {"+0.1 sin x", add(wt, scale(sin(x_field()), 0.1))},
        {"*1.1", scale(wt, 1.1)}};
    for (const auto& [label, w] : perturbed) {
        const double r = riccati_residual_R1(w0, w, g).l_inf;
        o.check(r > 1e-2, "R1(" + label + ") " + sci(r) + " > 1e-2");
    }

    const double mass = numerics::quadrature(catalog::uo_hierarchy_closed(1, 1.0).P, 1.0, -12.0, 12.0);
    o.check(std::abs(mass) < 1e-8, "mass of P1(UO) " + sci(mass));

    ParameterSequence seq(nonlinear_family(), t_field() + 1.0, 2);
    const HierarchyPrepotential h0(seq, 0, 0.25), h1(seq, 1, 0.25);
    bool refused = false;
    try {
        hierarchy_step_td(exp_neg(h0.field()), h0, h1, g);
    } catch (const HierarchyError&) {
        refused = true;
    }
    o.check(refused, std::string("condition failure ") + (refused ? "refused" : "accepted"));
}

}  // namespace

int main() {
    int failures = 0;
    failures += run(1, "exact-solution residuals", exact_solutions);
    failures += run(2, "darboux and hierarchy constructions", constructions);
    failures += run(3, "riccati and shape invariance", riccati);
    failures += run(4, "forward/backward coincidence", forward_backward);
    failures += run(5, "crank-nicolson oracle", crank_nicolson);
    failures += run(6, "eigenfunction series", series);
    failures += run(7, "negative controls", negative_controls);
    std::printf("%d of 7 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
