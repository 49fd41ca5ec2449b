#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "thetalift/identities.hpp"

using namespace thetalift;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// r_3(n^2) by direct count, for n <= nmax
std::map<Rat, cplx> r3_squares(long nmax) {
    std::map<Rat, cplx> out;
    for (long n = 1; n <= nmax; ++n) {
        long m = n * n, count = 0;
        for (long x = -n; x <= n; ++x)
            for (long y = -n; y <= n; ++y) {
                long r = m - x * x - y * y;
                if (r < 0) continue;
                long z = std::lround(std::sqrt(double(r)));
                if (z * z == r) count += z == 0 ? 1 : 2;
            }
        out[Rat(m)] = double(count);
    }
    return out;
}

}  // namespace

TEST_CASE("lift constants") {
    auto p4 = DirichletCharacter::principal(4);
    CHECK(std::abs(lift_constants(1, 1, 1, p4).C + 0.5) < 1e-15);
    CHECK(std::abs(lift_constants(0, 1, 1, p4).C - 4.0) < 1e-15);
    CHECK(std::abs(lift_constants(2, 2, 1, p4).C - std::pow(2.0, -11.0 / 4)) < 1e-15);
    // lambda = 1, D = 3: chi_D = (-1/.)(3/.) = (-3/.)
    auto c = lift_constants(1, 3, 3, DirichletCharacter::principal(12));
    for (long n = 1; n < 24; ++n) {
        long expect = std::gcd(n, 12L) == 1 ? kronecker(-3, n) : 0;
        CHECK(std::abs(c.chi_D(n) - double(expect)) < 1e-15);
    }
    CHECK_THROWS_AS(lift_constants(-1, 1, 1, p4), Error);
    CHECK_THROWS_AS(lift_constants(1, 4, 1, p4), Error);
}

TEST_CASE("constant term formula") {
    auto p4 = DirichletCharacter::principal(4);
    auto m4 = DirichletCharacter::kronecker(-1, 4);
    CHECK(constant_term_formula(3, 0.0, lift_constants(1, 1, 1, p4), p4) == 0.0);
    CHECK(std::abs(constant_term_formula(1, 1.0, lift_constants(0, 1, 1, m4), m4) - pi) < 1e-10);
    // L(0, chi_{-4}) = 1/2
    CHECK(std::abs(constant_term_formula(3, 2.0, lift_constants(1, 1, 1, p4), p4) + 0.25) < 1e-10);
    CHECK_THROWS_AS(constant_term_formula(1, 1.0, lift_constants(0, 1, 1, p4), p4), Error);
    CHECK_THROWS_AS(constant_term_formula(2, 1.0, lift_constants(0, 1, 1, p4), p4), Error);
}

TEST_CASE("extra-term kernel") {
    for (double s : {0.5, 1.0, 2.0, 3.7}) CHECK(std::fabs(extra_term_kernel(s, 0) - std::tgamma(s)) < 1e-10 * std::tgamma(s));
    // k = 2, s = 1: int (e^{-x/2} - e^{-x}) / x dx = log 2
    double k2 = extra_term_kernel(1.0, 2);
    CHECK(std::fabs(k2 - std::log(2.0)) < 1e-10);
    // the same by 2-D quadrature, x = 2y + t
    boost::math::quadrature::exp_sinh<double> es;
    double two_d = es.integrate([&](double y) {
        return es.integrate([&](double t) { return std::exp(-y - t) / (2 * y + t); }, 0.0,
                            std::numeric_limits<double>::infinity(), 1e-12);
    }, 0.0, std::numeric_limits<double>::infinity(), 1e-10);
    CHECK(std::fabs(k2 - two_d) < 1e-7);
    // k = 3, s = 2, outer integral in x: int_0^{x/2} y e^y dy = (x/2 - 1) e^{x/2} + 1
    double swapped = es.integrate([](double x) {
        if (x > 700) return 0.0;
        return std::pow(x, -1.5) * std::exp(-x) * (std::expm1(x / 2) * (x / 2 - 1) + x / 2);
    }, 0.0, std::numeric_limits<double>::infinity(), 1e-12);
    CHECK(std::fabs(extra_term_kernel(2.0, 3) - swapped) < 1e-9);
    CHECK_THROWS_AS(extra_term_kernel(0.5, 4), Error);
    CHECK_THROWS_AS(extra_term_kernel(-1.0, 0), Error);
}

TEST_CASE("Mellin right side") {
    auto p4 = DirichletCharacter::principal(4);
    auto c = lift_constants(1, 1, 1, p4);
    CHECK(mellin_rhs(c, 3, 2.5, {}).value == 0.0);
    std::map<Rat, cplx> zeros{{Rat(1), 0.0}, {Rat(4), 0.0}};
    CHECK(mellin_rhs(c, 3, 2.5, zeros).value == 0.0);
    std::map<Rat, cplx> one{{Rat(1), 1.0}};
    double s = 2.5;
    cplx expect = c.C * std::pow(2 * pi, -s) * std::tgamma(s) * dirichlet_L(s, c.chi_D).value;
    CHECK(rel(mellin_rhs(c, 3, s, one).value, expect) < 1e-13);
    CHECK_THROWS_AS(mellin_rhs(c, 5, s, one), Error);
    // theta-like data at s = 2: finite, with a tail bound
    auto th = theta_model(1, 1);
    auto r = mellin_rhs(lift_constants(0, 1, 1, p4), 1, 2.0, th.a_plus);
    CHECK(std::isfinite(r.value.real()));
    CHECK(r.tail_bound < 0.1 * std::abs(r.value));
}

TEST_CASE("Dirichlet relation bookkeeping") {
    auto p4 = DirichletCharacter::principal(4);
    auto c = lift_constants(1, 1, 1, p4);
    auto z = dirichlet_relation_check({}, {}, {}, c, 3, 2.0, 5);
    CHECK(z.residual == 0.0);
    // A+ built from the convolution itself, A- = 0: the extra term never enters
    auto a = r3_squares(8);
    std::map<long, cplx> Ap;
    for (long n = 1; n <= 8; ++n) {
        cplx b = 0.0;
        for (long d = 1; d <= n; ++d)
            if (n % d == 0) b += c.chi_D(d) * a.at(Rat((n / d) * (n / d)));
        Ap[n] = c.C * b;
    }
    auto r = dirichlet_relation_check(Ap, {}, a, c, 3, 2.0, 8);
    CHECK(r.residual < 1e-14);
    CHECK(r.kernel == 0.0);
    std::map<long, cplx> Am{{-1, 1.0}};
    auto r2 = dirichlet_relation_check(Ap, Am, a, c, 3, 2.0, 8);
    CHECK(std::fabs(r2.kernel - extra_term_kernel(2.0, 3)) < 1e-12);
    CHECK(std::abs(r2.lhs - r.lhs - r2.kernel) < 1e-12);
}

TEST_CASE("proportionality") {
    std::vector<cplx> den{1.0, 2.0, cplx(0, 1), 0.0};
    std::vector<cplx> num{3.0, 6.0, cplx(0, 3), 5.0};
    auto p = proportionality(num, den);
    CHECK(std::abs(p.C - 3.0) < 1e-15);
    CHECK(p.dispersion < 1e-15);
    REQUIRE(p.skipped.size() == 1);
    CHECK(p.skipped[0] == 3);
    auto one = proportionality({2.0}, {7.0});
    CHECK(one.dispersion == 0.0);
    num[1] = 6.6;
    CHECK(std::fabs(proportionality(num, den).dispersion - 0.2 / 3.1) < 1e-12);
    CHECK_THROWS_AS(proportionality({1.0}, {0.0}), Error);
}

TEST_CASE("report rows") {
    auto r = make_row("c1", "s=2;k=3", cplx(1.0, 0.0), cplx(1.0 + 1e-9, 0.0), 1e-8);
    CHECK(r.pass);
    auto f = make_row("c2", "a,b", cplx(1.0, 2.0), cplx(1.0, -2.0), 1e-3);
    CHECK(!f.pass);
    CHECK(format_number(pi) == "3.14159265358979");
    std::string csv = report_csv({r, f});
    CHECK(csv.find("check,parameters,lhs,rhs,relative_residual,budget,status\n") == 0);
    CHECK(csv.find("\"a,b\"") != std::string::npos);
    CHECK(csv.find("1+2i") != std::string::npos);
    CHECK(csv.find("1-2i") != std::string::npos);
    CHECK(csv.find(",pass\n") != std::string::npos);
    CHECK(csv.find(",fail\n") != std::string::npos);
    CHECK(relative_residual(0.0, 0.0) == 0.0);
}

TEST_CASE("limits at the cusp") {
    WeakMaassForm zero;
    zero.level = 4;
    ThetaKernel tk1(1, 1, 0, DirichletCharacter::principal(4));
    CHECK(lift_limit_at_infinity(zero, tk1, 1, 8.0).value == 0.0);

    // k = 3, theta^3: C(1) (1/2) L(0, chi_{-4})
    auto p4 = DirichletCharacter::principal(4);
    ThetaKernel tk3(1, 3, 1, p4);
    auto g3 = theta_cube_model(1);
    auto lim3 = lift_limit_at_infinity(g3, tk3, 1, 8.0);
    CHECK(lim3.converged);
    cplx f3 = constant_term_formula(3, 1.0, lift_constants(1, 1, 1, p4), p4);
    CHECK(rel(lim3.value, f3) < 1e-3);

    // k = 1 with a non-principal character
    auto chi8 = DirichletCharacter::kronecker(2, 8);
    ThetaKernel tk2(2, 1, 0, chi8);
    auto lim1 = lift_limit_at_infinity(theta_model(2, 2), tk2, 1, 8.0);
    cplx f1 = constant_term_formula(1, 1.0, lift_constants(0, 1, 2, chi8), chi8);
    CHECK(rel(lim1.value, f1) < 1e-3);

    // boundedness for the theta^3 lift
    LiftFunction phi(g3, tk3);
    auto b = boundedness_probe(phi, 5.0, 80.0, 4);
    CHECK(b.max_abs < 1.0);
    CHECK(b.spread < 1e-9);
}

TEST_CASE("Mellin transform of the theta^3 lift") {
    auto p4 = DirichletCharacter::principal(4);
    ThetaKernel tk(1, 3, 1, p4);
    auto g = theta_cube_model(1);
    LiftFunction phi(g, tk);
    auto lim = lift_limit_at_infinity(phi, 16.0, 1e-8);
    REQUIRE(lim.converged);
    auto c = lift_constants(1, 1, 1, p4);
    auto a = r3_squares(300);
    for (double s : {3.5, 4.0}) {
        auto m = mellin_lhs(phi, lim.value, s);
        auto r = mellin_rhs(c, 3, s, a);
        MESSAGE("s=" << s << " lhs " << m.value << " rhs " << r.value << " halving change " << m.rel_change);
        CHECK(m.rel_change < 1e-3);
        CHECK(rel(m.value, r.value) < 5e-3);
    }
    CHECK_THROWS_AS(mellin_lhs(phi, lim.value, 1.5), Error);
}

TEST_CASE("coefficients of the theta^3 lift") {
    auto p4 = DirichletCharacter::principal(4);
    ThetaKernel tk(1, 3, 1, p4);
    auto g = theta_cube_model(1);
    LiftFunction phi(g, tk);
    auto ex = extract_lift_coefficients(phi, 1, 3, 0.4, 0.6, 16);
    CHECK(ex.condition < 1e6);
    CHECK(ex.consistency < 1e-6);
    CHECK(std::abs(ex.A_minus.at(0)) < 1e-8);
    CHECK(std::abs(ex.A_plus.at(0) + 0.125) < 1e-8);
    auto r = dirichlet_relation_check(ex.A_plus, ex.A_minus, g.a_plus, lift_constants(1, 1, 1, p4), 3, 2.0, 3);
    CHECK(r.residual < 1e-6);
    CHECK_THROWS_AS(extract_lift_coefficients(phi, 1, 8, 0.4, 0.6, 16), Error);
    CHECK_THROWS_AS(extract_lift_coefficients(phi, 1, 3, 0.4, 0.4, 16), Error);
}
