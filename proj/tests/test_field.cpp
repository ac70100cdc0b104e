#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fpesusy/catalog.hpp"
#include "fpesusy/field.hpp"

using namespace fpesusy;

namespace {

void expect_jet_near(const Jet& a, const Jet& b, double tol) {
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(a.raw()[i], b.raw()[i], tol) << "entry " << i;
}

std::vector<std::pair<double, double>> sample_points(double x0, double x1, double t0, double t1,
                                                     int n) {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            pts.emplace_back(x0 + (x1 - x0) * i / (n - 1), t0 + (t1 - t0) * j / (n - 1));
        }
    }
    return pts;
}

}  // namespace

TEST(Jet, AdditiveInverseIsZero) {
    const Field f = exp(mul(x_field(), t_field()));
    const Jet j = add(f, scale(f, -1.0))(0.7, 1.3);
    expect_jet_near(j, Jet::constant(0.0), 0.0);
}

TEST(Jet, MultiplicativeIdentity) {
    const Field f = sin(mul(x_field(), x_field()) + t_field());
    expect_jet_near(mul(constant(1.0), f)(0.4, 2.0), f(0.4, 2.0), 0.0);
}

TEST(Jet, SquareOfXHasSecondDerivativeTwo) {
    const Field x2 = mul(x_field(), x_field());
    for (double x : {-3.0, 0.0, 1.5}) {
        for (double t : {0.0, 5.0}) {
            EXPECT_EQ(x2(x, t).xx(), 2.0);
            EXPECT_EQ(x2(x, t).xxx(), 0.0);
        }
    }
}

TEST(Jet, ExpNegOfZeroIsOne) {
    const Jet j = exp_neg(constant(0.0))(1.0, 1.0);
    expect_jet_near(j, Jet::constant(1.0), 0.0);
}

TEST(Jet, ExpNegQuarterSquare) {
    const Field w = scale(mul(x_field(), x_field()), 0.25);
    const Jet j = exp_neg(w)(2.0, 0.3);
    EXPECT_NEAR(j.v(), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(j.x(), -std::exp(-1.0), 1e-15);
}

TEST(Jet, ExpNegOfAuxiliarySlice) {
    // W = ln(t+1)/2 - x
    const Field w = sub(scale(log(t_field() + 1.0), 0.5), x_field());
    const Jet j = exp_neg(w)(0.0, 0.0);
    EXPECT_NEAR(j.v(), 1.0, 1e-15);
    EXPECT_NEAR(j.t(), -0.5, 1e-15);
}

TEST(Jet, LeibnizAgainstHandExpansion) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
        // f = a x^2 + b x t,  g = c x^3 + d t
        const Field x = x_field(), t = t_field();
        const Field f = add(scale(mul(x, x), a), scale(mul(x, t), b));
        const Field g = add(scale(mul(mul(x, x), x), c), scale(t, d));
        const double X = u(rng), T = u(rng);
        // p = f g = a c x^5 + a d x^2 t + b c x^4 t + b d x t^2
        const double v = a * c * std::pow(X, 5) + a * d * X * X * T + b * c * std::pow(X, 4) * T +
                         b * d * X * T * T;
        const double px = 5 * a * c * std::pow(X, 4) + 2 * a * d * X * T +
                          4 * b * c * std::pow(X, 3) * T + b * d * T * T;
        const double pxx = 20 * a * c * std::pow(X, 3) + 2 * a * d * T + 12 * b * c * X * X * T;
        const double pxxx = 60 * a * c * X * X + 24 * b * c * X * T;
        const double pt = a * d * X * X + b * c * std::pow(X, 4) + 2 * b * d * X * T;
        const double ptx = 2 * a * d * X + 4 * b * c * std::pow(X, 3) + 2 * b * d * T;
        const Jet j = mul(f, g)(X, T);
        const double tol = 1e-12 * std::max(1.0, std::abs(v) + std::abs(pxxx));
        EXPECT_NEAR(j.v(), v, tol);
        EXPECT_NEAR(j.x(), px, tol);
        EXPECT_NEAR(j.xx(), pxx, tol);
        EXPECT_NEAR(j.xxx(), pxxx, tol);
        EXPECT_NEAR(j.t(), pt, tol);
        EXPECT_NEAR(j.tx(), ptx, tol);
    }
}

TEST(Jet, ChainRuleIdentityForExpNeg) {
    const Field w = add(sin(mul(x_field(), t_field())), scale(mul(x_field(), x_field()), 0.3));
    const Field e = exp_neg(w);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng), t = u(rng);
        EXPECT_NEAR(e(x, t).x() + e(x, t).v() * w(x, t).x(), 0.0, 1e-12);
    }
}

TEST(Field, FirstOrderApplyWithZeroIsDerivative) {
    const Field h = catalog::heat_self_similar();
    const Field d = first_order_apply(constant(0.0), h);
    for (double x : {-1.0, 0.3, 2.0}) EXPECT_DOUBLE_EQ(d.value(x, 0.7), h(x, 0.7).x());
}

TEST(Field, FirstOrderApplyAnnihilatesSeed) {
    const Field wt = catalog::guo_auxiliary_field(1.0, 1.0);
    const Field psi0 = exp_neg(wt);
    const Field out = first_order_apply(scale(dx(wt), 1.0), psi0);
    for (double x : {-2.0, 0.0, 1.0}) EXPECT_NEAR(out.value(x, 0.5), 0.0, 1e-14);
}

TEST(Field, FirstOrderApplyOfOne) {
    const double g = 1.7;
    const Field out = first_order_apply(scale(x_field(), g / 2), constant(1.0));
    EXPECT_NEAR(out.value(1.2, 0.0), g * 1.2 / 2, 1e-15);
}

TEST(Field, FirstOrderApplyLowersDepth) {
    const Field out = first_order_apply(x_field(), exp(x_field()));
    EXPECT_EQ(out.depth().x, 2);
    EXPECT_THROW(out(0.0, 0.0).xxx(), JetDepthError);
    EXPECT_NO_THROW(out(0.0, 0.0).t());
    const Field twice = first_order_apply(x_field(), out);
    EXPECT_EQ(twice.depth().x, 1);
    EXPECT_FALSE(twice.depth().t);
    EXPECT_THROW(twice(0.0, 0.0).t(), JetDepthError);
}

TEST(Field, DisjointDomainsThrow) {
    Domain left, right;
    left.x_max = -1.0;
    right.x_min = 1.0;
    EXPECT_THROW(add(x_field(left), x_field(right)), DomainError);
}

TEST(Field, EvaluationOutsideDomainThrows) {
    const Field h = catalog::heat_self_similar();
    EXPECT_THROW(h(0.0, -1.0), DomainError);
    EXPECT_THROW(h(0.0, 0.0), DomainError);
}

TEST(Field, ExpOverflowReportsLocation) {
    const Field big = exp_neg(scale(mul(x_field(), x_field()), -1.0));
    try {
        big(40.0, 0.5);
        FAIL() << "expected RangeError";
    } catch (const RangeError& e) {
        EXPECT_EQ(e.x(), 40.0);
        EXPECT_EQ(e.t(), 0.5);
    }
}

TEST(FdCheck, SquareField) {
    const Field x2 = mul(x_field(), x_field());
    const auto pts = sample_points(-3, 3, 0, 1, 5);
    EXPECT_LE(fd_check(x2, pts, 1e-4).max_deviation, 1e-7);
}

TEST(FdCheck, ConstantIsExact) {
    const auto pts = sample_points(-3, 3, 0, 1, 4);
    EXPECT_EQ(fd_check(constant(2.5), pts, 1e-4).max_deviation, 0.0);
}

TEST(FdCheck, GuoSeed) {
    const auto pts = sample_points(-3, 3, 0.5, 2.0, 9);
    EXPECT_LE(fd_check(catalog::guo_seed_P0(1.0).P, pts, 1e-4).max_deviation, 1e-6);
}

TEST(FdCheck, SampleTooCloseToBoundary) {
    const std::vector<std::pair<double, double>> pts{{0.0, 5e-5}};
    EXPECT_THROW(fd_check(catalog::heat_self_similar(), pts, 1e-4), DomainError);
}

TEST(FdCheck, EveryCatalogField) {
    for (const auto& entry : catalog::entries()) {
        const Grid g = entry.grid(entry.defaults);
        const auto pts = sample_points(g.x_min + 0.05 * (g.x_max - g.x_min),
                                       g.x_max - 0.05 * (g.x_max - g.x_min), 0.5, 1.9, 6);
        for (const auto& s : entry.solutions(entry.defaults)) {
            EXPECT_LE(fd_check(s.P, pts, 1e-4).max_deviation, 1e-5) << s.name;
        }
    }
}
