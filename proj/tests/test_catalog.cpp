#include <gtest/gtest.h>

#include <boost/math/quadrature/sinh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "fpesusy/catalog.hpp"

using namespace fpesusy;

namespace {

double integrate_line(const Field& f, double t) {
    boost::math::quadrature::sinh_sinh<double> q;
    return q.integrate([&](double x) { return f.value(x, t); });
}

}  // namespace

TEST(Gamma, SolvesRiccatiInTime) {
    const Field g = catalog::guo_gamma(1.5);
    for (double t : {0.1, 1.0, 3.0}) {
        const Jet j = g(0.0, t);
        EXPECT_NEAR(j.v() * j.v() - j.t(), 0.0, 1e-15);
    }
}

TEST(Gamma, ConstantGivesStationaryOscillator) {
    const Field w = catalog::guo_prepotential(constant(2.0));
    EXPECT_NEAR(drift_from_prepotential(w).value(1.5, 0.3), -3.0, 1e-15);
    EXPECT_EQ(w(1.0, 1.0).t(), 0.0);
}

TEST(Gamma, ZeroGivesZeroDrift) {
    EXPECT_EQ(drift_from_prepotential(catalog::guo_prepotential(constant(0.0))).value(2.0, 1.0),
              0.0);
}

TEST(Heat, SelfSimilarAtOrigin) {
    const Field h = catalog::heat_self_similar();
    for (double t : {1.0 / (4 * std::numbers::pi), 1.0, 2.0}) {
        EXPECT_NEAR(h.value(0.0, t), 1.0 / std::sqrt(4 * std::numbers::pi * t), 1e-15);
    }
    EXPECT_THROW(h.value(0.0, 0.0), DomainError);
}

TEST(Heat, Exponential) {
    EXPECT_EQ(catalog::heat_exponential(0.0).value(3.0, 2.0), 1.0);
    EXPECT_NEAR(catalog::heat_exponential(1.0).value(1.0, 1.0), std::exp(2.0), 1e-14);
}

TEST(GuoSeed, CenterValue) {
    // 1/sqrt(8 pi)
    EXPECT_NEAR(catalog::guo_seed_P0(1.0).P.value(0.0, 1.0), 0.19947114020071635, 1e-16);
}

TEST(GuoSeed, MassIsInverseRootC) {
    for (double c : {1.0, 2.0, 0.5}) {
        const auto p0 = catalog::guo_seed_P0(c);
        EXPECT_NEAR(integrate_line(p0.P, 0.7), 1.0 / std::sqrt(c), 1e-12) << c;
    }
}

TEST(GuoSeed, DomainRespectsNegativeC) {
    const auto p0 = catalog::guo_seed_P0(-0.5);
    EXPECT_THROW(p0.P.value(0.0, 0.4), DomainError);
    EXPECT_NO_THROW(p0.P.value(0.0, 0.6));
}

TEST(GuoPartner, ZeroShiftIsHeatDerivative) {
    const Field p1 = catalog::guo_partner_P1(0.0, 1.0).P;
    const Field hx = dx(catalog::heat_self_similar());
    for (double x : {-1.0, 0.5, 2.0}) {
        EXPECT_NEAR(p1.value(x, 0.8), -hx.value(x, 0.8), 1e-15);
        EXPECT_NEAR(p1.value(x, 0.8), -p1.value(-x, 0.8), 1e-15);
    }
}

TEST(GuoPartner, DriftConstant) {
    const auto s = catalog::guo_partner_P1(1.3, 1.0);
    EXPECT_NEAR(s.problem().drift.value(-2.0, 1.0), -2.6, 1e-15);
}

TEST(GuoClosed, FirstMemberOdd) {
    const Field p1 = catalog::guo_hierarchy_closed(1, 1.0).P;
    for (double t : {0.3, 1.0, 2.0}) EXPECT_EQ(p1.value(0.0, t), 0.0);
}

TEST(GuoClosed, SecondMemberZeroCrossings) {
    const double c = 1.0;
    const Field p2 = catalog::guo_hierarchy_closed(2, c).P;
    for (double t : {0.5, 1.5}) {
        const double root = std::sqrt(2.0 * t * (t + c) / c);
        EXPECT_NEAR(p2.value(root, t), 0.0, 1e-15);
        EXPECT_NEAR(p2.value(-root, t), 0.0, 1e-15);
        EXPECT_LT(p2.value(0.0, t), 0.0);
    }
}

TEST(GuoClosed, UnsupportedIndex) { EXPECT_THROW(catalog::guo_hierarchy_closed(3, 1.0), Error); }

TEST(Uo, LongTimeLimitIsStationary) {
    const double g = 1.2;
    const Field p0 = catalog::uo_seed_P0(g).P;
    const Field st = catalog::uo_stationary(g).P;
    for (double x : {-1.0, 0.0, 2.0}) EXPECT_NEAR(p0.value(x, 30.0), st.value(x, 0.0), 1e-14);
}

TEST(Uo, UnitMass) {
    const Field p0 = catalog::uo_seed_P0(1.0).P;
    for (double t : {0.25, 1.0, 2.0}) EXPECT_NEAR(integrate_line(p0, t), 1.0, 1e-12);
}

TEST(Uo, FirstMembersProportional) {
    const Field a = catalog::uo_hierarchy_closed(1, 1.0).P;
    const Field b = catalog::uo_hierarchy_closed(-1, 1.0).P;
    for (double x : {-2.0, 0.7}) EXPECT_NEAR(a.value(x, 1.0) / b.value(x, 1.0), 1.0, 1e-14);
}

TEST(Uo, RejectsBadParameters) {
    EXPECT_THROW(catalog::uo_seed_P0(0.0), DomainError);
    EXPECT_THROW(catalog::uo_hierarchy_closed(3, 1.0), Error);
}

TEST(Parity, SeedsEvenFirstMembersOdd) {
    const std::vector<Field> even{catalog::guo_seed_P0(1.0).P, catalog::uo_seed_P0(1.0).P,
                                  catalog::uo_hierarchy_closed(2, 1.0).P,
                                  catalog::guo_hierarchy_closed(2, 1.0).P};
    const std::vector<Field> odd{catalog::guo_hierarchy_closed(1, 1.0).P,
                                 catalog::uo_hierarchy_closed(1, 1.0).P,
                                 catalog::uo_hierarchy_closed(-1, 1.0).P};
    for (double x : {0.3, 1.1, 2.9}) {
        for (double t : {0.5, 1.7}) {
            for (const auto& f : even) EXPECT_NEAR(f.value(x, t), f.value(-x, t), 1e-12);
            for (const auto& f : odd) EXPECT_NEAR(f.value(x, t), -f.value(-x, t), 1e-12);
        }
    }
}

TEST(Registry, SelfConsistency) {
    for (const auto& e : catalog::entries()) {
        const Grid g = e.grid(e.defaults);
        const auto sols = e.solutions(e.defaults);
        EXPECT_EQ(sols.size(), e.known_solution_count) << e.name;
        for (const auto& s : sols) {
            EXPECT_LT(fpe_residual(s.P, s.problem(), g).l_inf, 1e-8) << s.name;
        }
    }
}

TEST(Registry, ReferenceGridBoundaryDecay) {
    for (const std::string name : {"guo", "uo"}) {
        const auto e = catalog::entry(name);
        const Grid g = e.grid(e.defaults);
        const Field p0 = e.solutions(e.defaults).front().P;
        EXPECT_LT(std::abs(p0.value(g.x_max, g.t_end)) / p0.value(0.0, g.t_end), 1e-3) << name;
    }
}

TEST(Registry, AtLeastSixEntries) {
    const auto all = catalog::entries();
    EXPECT_GE(all.size(), 6u);
    EXPECT_THROW(catalog::find(all, "nope"), Error);
}

TEST(Registry, AuxiliaryPassesR1) {
    const Grid g = catalog::reference_grid(4.0);
    for (double a : {-1.0, 0.0, 1.0}) EXPECT_LT(catalog::guo_auxiliary(a, 1.0, g).r1().l_inf, 1e-8);
}
