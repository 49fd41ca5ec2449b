#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cstdio>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "thetalift/forms.hpp"

using namespace thetalift;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

WeakMaassForm constant_form(double weight) {
    WeakMaassForm g;
    g.weight = weight;
    g.level = 4;
    g.a_plus[Rat(0)] = 1.0;
    return g;
}

// holomorphic part plus harmonic tail, weight 1/2
WeakMaassForm harmonic_model() {
    WeakMaassForm g;
    g.weight = 0.5;
    g.level = 4;
    g.tag = GrowthTag::HStar;
    g.a_plus[Rat(-1)] = 1.0;
    g.a_plus[Rat(0)] = 0.3;
    g.a_plus[Rat(3)] = cplx(0.2, -0.1);
    g.a_minus[Rat(-1)] = 0.7;
    g.a_minus[Rat(-5, 4)] = cplx(-0.1, 0.4);
    g.a_minus0 = 0.25;
    return g;
}

}  // namespace

TEST_CASE("evaluating simple models") {
    auto one = constant_form(0.5);
    CHECK(rel(eval_form(one, cplx(0.3, 0.7)), 1.0) < 1e-15);

    WeakMaassForm lin;
    lin.weight = 0.0;
    lin.level = 1;
    lin.character = DirichletCharacter::principal(1);
    lin.tag = GrowthTag::HStar;
    lin.a_minus0 = 1.0;
    CHECK(rel(eval_form(lin, cplx(0.1, 2.5)), 2.5) < 1e-14);

    // sum e^{-pi n^2} = pi^{1/4} / Gamma(3/4); with e(n^2 z) this is the value at z = i/2
    double expect = std::pow(pi, 0.25) / std::tgamma(0.75);
    CHECK(std::abs(jacobi_theta(0.5 * I) - expect) < 1e-14);
    CHECK(std::abs(expect - 1.0864348) < 1e-7);
    auto th = theta_model(1, 1);
    CHECK(std::abs(eval_form(th, 0.5 * I) - expect) < 1e-13);
    // sum e^{-2 pi n^2} = expect * sqrt(2 + sqrt 2) / 2
    CHECK(std::abs(eval_form(th, I) - expect * std::sqrt(2 + std::sqrt(2.0)) / 2) < 1e-14);
    CHECK(rel(eval_form(theta_cube_model(1), cplx(0.2, 0.4)), std::pow(jacobi_theta(cplx(0.2, 0.4)), 3)) < 1e-12);
    CHECK(rel(eval_form(theta_odd_model(4), cplx(0.2, 0.3)), th.evaluator(cplx(0.2, 0.3)) - jacobi_theta(cplx(0.2, 0.3), 4)) <
          1e-12);
}

TEST_CASE("slash operators") {
    Evaluator th = [](cplx z) { return jacobi_theta(z); };
    cplx z(0.17, 0.8);
    CHECK(rel(slash(th, {1, 0, 0, 1}, 0.5)(z), th(z)) < 1e-15);
    CHECK(rel(slash(th, {1, 1, 0, 1}, 0.5)(z), th(z + 1.0)) < 1e-15);
    cplx z0 = cplx(1.0, 1.0 / 3.0);
    CHECK(rel(slash(th, {1, 0, 4, 1}, 0.5)(z0), th(z0)) < 1e-9);

    // group action: (g|a)|b = g|(ab)
    Mat2i a{1, 0, 4, 1}, b{3, 1, 8, 3};
    Mat2i ab{a.a * b.a + a.b * b.c, a.a * b.b + a.b * b.d, a.c * b.a + a.d * b.c, a.c * b.b + a.d * b.d};
    auto twice = slash(slash(th, a, 0.5), b, 0.5);
    CHECK(rel(twice(z), slash(th, ab, 0.5)(z)) < 1e-9);
    Evaluator f = [](cplx t) { return std::exp(I * t) / (t + 2.0 * I); };
    Mat2i s{0, -1, 1, 0}, u{2, 1, 1, 1};
    Mat2i su{s.a * u.a + s.b * u.c, s.a * u.b + s.b * u.d, s.c * u.a + s.d * u.c, s.c * u.b + s.d * u.d};
    CHECK(rel(slash(slash(f, s, 4.0), u, 4.0)(z), slash(f, su, 4.0)(z)) < 1e-12);

    CHECK_THROWS_AS(slash(th, {0, -1, 1, 0}, 0.5), Error);
    CHECK_THROWS_AS(slash(th, {2, 0, 0, 1}, 0.5), Error);
}

TEST_CASE("Maass operators on elementary functions") {
    const double k = 2.5;
    cplx z(0.3, 1.2);
    Evaluator c = [](cplx) { return cplx(2.0); };
    CHECK(std::abs(maass_operator(c, MaassOp::Delta, k, z).value) < 1e-9);
    Evaluator p = [k](cplx t) { return cplx(std::pow(t.imag(), 1 - k)); };
    CHECK(std::abs(maass_operator(p, MaassOp::Delta, k, z).value) < 1e-8);
    // v^a is an eigenfunction with eigenvalue -a(a - 1 + k)
    Evaluator q = [](cplx t) { return cplx(std::pow(t.imag(), 1.7)); };
    CHECK(rel(maass_operator(q, MaassOp::Delta, k, z).value, -1.7 * (0.7 + k) * std::pow(1.2, 1.7)) < 1e-8);

    // Delta_k = L_{k+2} R_k - k on v^2 e(u)
    const double kk = 1.5;
    Evaluator f = [](cplx t) { return t.imag() * t.imag() * e2pi(t.real()); };
    Evaluator rf = [&](cplx t) { return maass_operator(f, MaassOp::R, kk, t, 1e-3).value; };
    cplx lr = maass_operator(rf, MaassOp::L, kk + 2, I, 1e-2).value;
    cplx d = maass_operator(f, MaassOp::Delta, kk, I, 1e-3).value;
    CHECK(std::abs(lr - kk * f(I) - d) < 1e-6 * std::abs(d));
}

TEST_CASE("exact and finite-difference operators agree") {
    auto g = harmonic_model();
    auto ex = g.expansion();
    Evaluator f = [&](cplx t) { return ex.eval(t); };
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uu(-0.5, 0.5), vv(0.8, 1.6);
    for (int i = 0; i < 10; ++i) {
        cplx z(uu(rng), vv(rng));
        auto lap = maass_operator(f, MaassOp::Delta, g.weight, z);
        CHECK(std::abs(lap.value) <= 1e-5 * (1 + std::abs(f(z))));
        CHECK(std::abs(maass_operator_exact(ex, MaassOp::Delta, z)) <= 1e-12 * (1 + std::abs(f(z))));
        for (MaassOp op : {MaassOp::R, MaassOp::L, MaassOp::Xi}) {
            cplx fd = maass_operator(f, op, g.weight, z).value;
            CHECK(std::abs(maass_operator_exact(ex, op, z) - fd) < 1e-6 * (1 + std::abs(fd)));
        }
    }
    // xi kills the holomorphic part exactly
    WeakMaassForm hol = g;
    hol.a_minus.clear();
    hol.a_minus0 = 0.0;
    hol.tag = GrowthTag::WMFStar;
    CHECK(maass_operator_exact(hol.expansion(), MaassOp::Xi, cplx(0.1, 0.9)) == 0.0);
    CHECK(maass_operator_exact(hol.expansion(), MaassOp::L, cplx(0.1, 0.9)) == 0.0);
    // and xi of the full model only sees the a^- data
    cplx z(0.1, 0.9);
    CHECK(maass_operator_exact(ex, MaassOp::Xi, z) == maass_operator_exact(g.expansion(), MaassOp::Xi, z));
    WeakMaassForm minus = g;
    minus.a_plus.clear();
    CHECK(std::abs(maass_operator_exact(ex, MaassOp::Xi, z) - maass_operator_exact(minus.expansion(), MaassOp::Xi, z)) <
          1e-14);
}

TEST_CASE("Whittaker functions") {
    // W_{0,mu}(x) = sqrt(x/pi) K_mu(x/2)
    for (double mu : {0.3, 1.1, 2.25})
        for (double x : {0.2, 1.0, 7.5, 40.0}) {
            double ref = std::sqrt(x / pi) * boost::math::cyl_bessel_k(mu, x / 2);
            CHECK(std::fabs(whittaker_W(0.0, mu, x) - ref) < 1e-11 * std::fabs(ref));
        }
    // Whittaker ODE W'' + (-1/4 + k/x + (1/4 - mu^2)/x^2) W = 0
    for (auto [k, mu] : {std::pair{1.25, 1.7}, std::pair{-1.25, 0.7}, std::pair{0.75, 2.0}}) {
        double x = 3.0, h = 1e-3;
        double w0 = whittaker_W(k, mu, x);
        double w2 = (whittaker_W(k, mu, x + h) - 2 * w0 + whittaker_W(k, mu, x - h)) / (h * h);
        CHECK(std::fabs(w2 + (-0.25 + k / x + (0.25 - mu * mu) / (x * x)) * w0) < 1e-5 * std::fabs(w0));
    }
    CHECK(std::fabs(whittaker_scaled(0.5, 3.0, 1e5) - 1.0) < 1e-3);
}

TEST_CASE("Eisenstein series") {
    const DirichletCharacter chi = DirichletCharacter::principal(4);
    cplx z(0.21, 0.93);
    CHECK(rel(eisenstein_eval(z + 1.0, 1.0, 5, 1, chi), eisenstein_eval(z, 1.0, 5, 1, chi)) < 1e-10);

    EisensteinOptions deep;
    deep.radius = 3000.0;
    cplx a = eisenstein_eval(I, 1.0, 5, 1, chi), b = eisenstein_eval(I, 1.0, 5, 1, chi, deep);
    CHECK(rel(a, b) < 1e-8);

    // leading term v^s
    EisensteinOptions tiny;
    tiny.radius = 1.0;
    CHECK(rel(eisenstein_eval(cplx(0.0, 2.0), 1.0, 5, 1, chi, tiny), std::pow(2.0, 1.0)) < 1e-15);

    // eigenvalue -s(s-1) - ks/2
    const double s = 1.2;
    Evaluator E = [&](cplx t) { return eisenstein_eval(t, s, 5, 1, chi); };
    auto lap = maass_operator(E, MaassOp::Delta, 2.5, I);
    CHECK(rel(lap.value, (-s * (s - 1) - 5 * s / 2) * E(I)) < 1e-4);

    // automorphy on Gamma_0(4)
    Mat2i g{1, 0, 4, 1};
    CHECK(rel(slash(E, g, 2.5)(z), E(z)) < 1e-7);

    // all-coset path agrees with slashing the global evaluator
    CosetSystem cs(4);
    EisensteinOptions mid;
    mid.radius = 600.0;
    auto all = eisenstein_all_cosets(z, s, 5, 1, chi, cs, mid);
    REQUIRE(all.size() == 6);
    for (size_t i = 0; i < cs.size(); ++i) {
        cplx direct = slash_principal(E, cs.reps()[i], 2.5)(z);
        CHECK(rel(all[i], direct) < 1e-5);
    }

    CHECK_THROWS_AS(eisenstein_eval(I, 0.2, 1, 1, chi), Error);
    CHECK_THROWS_AS(eisenstein_eval(I, 1.0, 4, 1, chi), Error);
    CHECK(rel(eisenstein_integral(cplx(0.3, 1.1) + 1.0, 2.0, 4, 4, DirichletCharacter::principal(4)),
              eisenstein_integral(cplx(0.3, 1.1), 2.0, 4, 4, DirichletCharacter::principal(4))) < 1e-10);
}

TEST_CASE("coset representatives") {
    CHECK(CosetSystem(1).size() == 1);
    CHECK(CosetSystem(4).size() == 6);
    CHECK(CosetSystem(6).size() == 12);
    CHECK(CosetSystem::index_formula(16) == 24);
    for (long M : {1L, 4L, 6L, 8L, 12L}) {
        CosetSystem cs(M);
        CHECK(long(cs.size()) == CosetSystem::index_formula(M));
        const auto& r = cs.reps();
        CHECK((r[0].a == 1 && r[0].b == 0 && r[0].c == 0 && r[0].d == 1));
        for (size_t i = 0; i < r.size(); ++i) {
            CHECK(r[i].det() == 1);
            CHECK(cs.index_of(r[i]) == i);
            // left multiplication by Gamma_0(M) keeps the coset
            Mat2i h{1, 1, M, M + 1};
            Mat2i hr{h.a * r[i].a + h.b * r[i].c, h.a * r[i].b + h.b * r[i].d, h.c * r[i].a + h.d * r[i].c,
                     h.c * r[i].b + h.d * r[i].d};
            CHECK(cs.index_of(hr) == i);
        }
    }
}

TEST_CASE("dilation") {
    auto th = theta_model(1, 1);
    auto same = dilate(th, 1);
    CHECK(same.level == th.level);
    CHECK(same.a_plus == th.a_plus);

    auto d2 = dilate(th, 2);
    CHECK(d2.level == 8);
    for (long n = 0; n < 30; ++n) {
        auto it = th.a_plus.find(Rat(n));
        cplx old = it == th.a_plus.end() ? 0.0 : it->second;
        auto jt = d2.a_plus.find(Rat(2 * n));
        cplx now = jt == d2.a_plus.end() ? 0.0 : jt->second;
        CHECK(old == now);
        CHECK(d2.a_plus.count(Rat(2 * n + 1)) == 0);
    }
    CHECK(rel(eval_form(d2, cplx(0.1, 0.4)), jacobi_theta(cplx(0.2, 0.8))) < 1e-12);

    // character of g(3z) on residues mod 12 against the Kronecker symbol
    auto d3 = dilate(th, 3);
    CHECK(d3.level == 12);
    for (long n = 0; n < 12; ++n) {
        long expect = std::gcd(n, 12L) == 1 ? kronecker(3, n) : 0;
        CHECK(std::abs(d3.character(n) - double(expect)) < 1e-15);
    }
    // and the character is the one the function actually transforms with
    Evaluator f3 = d3.evaluator;
    cplx z(0.05, 0.3);
    for (Mat2i g : {Mat2i{1, 0, 12, 1}, Mat2i{5, 1, 24, 5}, Mat2i{7, 3, 12, 5}, Mat2i{-1, 0, 12, -1}}) {
        if (g.det() != 1) continue;
        CHECK(rel(slash(f3, g, 0.5)(z), d3.character(g.d) * f3(z)) < 1e-9);
    }

    CHECK_THROWS_AS(dilate(th, 4), Error);
    CHECK_THROWS_AS(dilate(th, 0), Error);
}

TEST_CASE("growth classification") {
    auto th = theta_model(1, 1);
    std::vector<double> grid;
    for (int i = 0; i < 12; ++i) grid.push_back(1.0 + 0.5 * i);
    CHECK(growth_classify(th, grid).tag == GrowthTag::WMFStar);

    std::vector<std::vector<double>> quad(1);
    for (double v : grid) quad[0].push_back(v * v);
    auto r = growth_classify_samples(grid, quad);
    CHECK(r.tag == GrowthTag::WMFStar);
    CHECK(std::fabs(r.max_slope - 2.0) < 1e-10);

    std::vector<std::vector<double>> expo(1);
    for (double v : grid) expo[0].push_back(std::exp(2 * v));
    CHECK(growth_classify_samples(grid, expo).tag == GrowthTag::WMF);

    auto h = harmonic_model();
    auto rh = growth_classify(h, grid);
    CHECK(rh.tag != GrowthTag::HPlus);
    h.tag = GrowthTag::HPlus;
    CHECK_THROWS_AS(check_tag_invariants(h), Error);
    h.a_minus0 = 0.0;
    CHECK_NOTHROW(check_tag_invariants(h));

    std::vector<std::vector<double>> bad(1, std::vector<double>(grid.size(), -1.0));
    CHECK(!growth_classify_samples(grid, bad).conclusive);
}

TEST_CASE("coset expansions from a global evaluator") {
    auto th = theta_model(1, 1);
    th.a_plus.clear();
    attach_coset_expansions(th);
    REQUIRE(th.cosets.size() == 6);
    auto c1 = th.cosets[0].at(Rat(1));
    REQUIRE(c1.size() == 1);
    CHECK(std::abs(c1[0]->coef - 2.0) < 1e-10);
    CHECK(std::abs(th.a_plus.at(Rat(4)) - 2.0) < 1e-6);
    CHECK(th.a_plus.count(Rat(2)) == 0);
    // the S-coset: theta|S = sqrt(-iz)/sqrt(z) theta(z/4)/... has frequencies in (1/4) Z
    CosetSystem cs(4);
    size_t iS = cs.index_of_row(1, 0);
    CHECK(std::abs(th.cosets[iS].eval(cplx(0.31, 1.2)) - slash_principal(th.evaluator, cs.reps()[iS], 0.5)(cplx(0.31, 1.2))) <
          1e-9);

    // Eisenstein cosets: Whittaker and power profiles
    EisensteinOptions eo;
    eo.radius = 400.0;
    auto E = eisenstein_form(1.2, 5, 1, DirichletCharacter::principal(4), eo);
    attach_coset_expansions(E);
    REQUIRE(E.cosets.size() == 6);
    auto c0 = E.cosets[0].at(Rat(0));
    bool has_vs = false;
    for (auto* t : c0)
        if (t->kind == Profile::Power && std::fabs(t->param - 1.2) < 1e-12) has_vs = std::abs(t->coef - 1.0) < 1e-6;
    CHECK(has_vs);
    cplx z(0.13, 1.4);
    cplx exact = maass_operator_exact(E.cosets[0], MaassOp::Delta, z, 1.2);
    CHECK(rel(exact, (-1.2 * 0.2 - 2.5 * 1.2) * E.cosets[0].eval(z)) < 1e-8);
}

TEST_CASE("q-expansion files round trip") {
    auto dir = std::filesystem::temp_directory_path();
    auto path = (dir / "thetalift_forms_roundtrip.txt").string();
    auto h = harmonic_model();
    h.eigen_s = 0.0;
    write_q_expansion(h, path);
    auto back = read_q_expansion(path);
    CHECK(back.weight == h.weight);
    CHECK(back.level == h.level);
    CHECK(back.tag == h.tag);
    CHECK(back.a_plus.size() == h.a_plus.size());
    for (const auto& [n, c] : h.a_plus) CHECK(std::abs(back.a_plus.at(n) - c) < 1e-15);
    for (const auto& [n, c] : h.a_minus) CHECK(std::abs(back.a_minus.at(n) - c) < 1e-15);
    CHECK(std::abs(back.a_minus0 - h.a_minus0) < 1e-15);
    for (long n = 0; n < 4; ++n) CHECK(back.character(n) == h.character(n));

    auto d = dilate(theta_model(1, 1), 2);
    d.a_plus.erase(d.a_plus.upper_bound(Rat(50)), d.a_plus.end());
    write_q_expansion(d, path);
    auto db = read_q_expansion(path);
    for (long n = 0; n < 8; ++n) CHECK(db.character(n) == d.character(n));
    CHECK(rel(eval_form(db, cplx(0.1, 0.5)), eval_form(d, cplx(0.1, 0.5))) < 1e-14);
    std::filesystem::remove(path);

    CHECK_THROWS_AS(read_q_expansion((dir / "does_not_exist_thetalift.txt").string()), Error);
}
