#include <random>

#include "doctest.h"
#include "thetalift/checks.hpp"

using namespace thetalift;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

DirichletCharacter trivial4() { return DirichletCharacter::principal(4); }
DirichletCharacter chi8() { return DirichletCharacter::kronecker(8, 8); }

const std::vector<Mat2i> gamma0_4 = {{1, 1, 0, 1}, {1, 0, 4, 1}, {3, 1, 8, 3}, {5, 2, 12, 5}, {1, 0, -4, 1}};
const std::vector<Mat2i> gamma0_8 = {{1, 1, 0, 1}, {1, 0, 8, 1}, {3, 1, 8, 3}, {5, 2, 32, 13}, {7, 2, -32, -9}};

struct RandomPoints {
    std::mt19937_64 rng{12345};
    std::uniform_real_distribution<double> u{-0.5, 0.5}, v{0.8, 1.6};
    cplx operator()() { return {u(rng), v(rng)}; }
};

}  // namespace

TEST_CASE("ellipsoid enumeration matches a box scan") {
    Eigen::Matrix3d A;
    A << 2.0, 0.3, -0.4, 0.3, 1.0, 0.1, -0.4, 0.1, 3.0;
    EllipsoidEnumerator en(A, 20.3);
    size_t a = 0, b = 0;
    for (long i2 : en.outer_values()) en.for_each_in_slice(i2, [&](long, long, long, double q) { a += q <= 20.3; });
    for (long i = -10; i <= 10; ++i)
        for (long j = -10; j <= 10; ++j)
            for (long l = -10; l <= 10; ++l) {
                Eigen::Vector3d x(i, j, l);
                b += x.dot(A * x) <= 20.3;
            }
    CHECK(a == b);
    Eigen::Matrix3d bad = -A;
    CHECK_THROWS_AS(EllipsoidEnumerator(bad, 1.0), Error);
}

TEST_CASE("lambda form and Heegner points") {
    CHECK(std::abs(lambda_form({0, 0, 0}, I, 1)) == 0.0);
    CHECK(std::abs(lambda_form({1, 0, 0}, cplx(0.3, 1.0), 1) - 0.25) < 1e-15);
    CHECK(std::abs(lambda_form({0, 1, 0}, I, 1) + I) < 1e-15);
    auto hs = find_singularities(1, 0.5 * I, 2);
    bool found = false;
    for (const auto& h : hs) {
        CHECK(!(h.a == 0 && h.b == 0 && h.c == 0));
        if (h.a == 1 && h.b == 0 && h.c == 1) {
            found = true;
            CHECK(std::abs(h.w - 0.5 * I) < 1e-12);
        }
    }
    CHECK(found);
    CHECK(find_singularities(1, 2.0 * I, 5).empty());
}

TEST_CASE("fricke slash examples") {
    auto one = [](cplx) { return cplx(1.0); };
    cplx z(1.0, 1.0);
    CHECK(rel(fricke_slash(one, 3, 4, z), std::pow(3.0, -2.0) * std::pow(z, -4)) < 1e-14);
    auto f = [](cplx t) { return std::exp(I * t) + t * t; };
    auto once = [&](cplx t) { return fricke_slash(f, 5, 2, t); };
    CHECK(rel(fricke_slash(once, 5, 2, z), f(z)) < 1e-12);
    CHECK(rel(fricke_slash(one, 4, 0.5, I), cplx(std::pow(4.0, -0.25))) < 1e-14);
}

TEST_CASE("parallel kernel agrees with the serial box scan") {
    ThetaKernel tk(1, 3, 1, trivial4());
    ThetaKernel tk2(2, 1, 0, chi8());
    for (auto [z, w] : {std::pair{I, cplx(1.0, 2.0)}, std::pair{cplx(0.2, 0.9), cplx(-0.3, 1.1)}}) {
        auto a = tk.eval(z, w), b = tk.eval_serial_reference(z, w);
        CHECK(a.terms == b.terms);
        CHECK(rel(a.value, b.value) < 1e-12);
        auto c = tk2.eval(z, w), d = tk2.eval_serial_reference(z, w);
        CHECK(rel(c.value, d.value) < 1e-12);
    }
    // bitwise reproducible across runs
    CHECK(tk.eval(I, I).value == tk.eval(I, I).value);
}

TEST_CASE("doubling the cutoff leaves the kernel unchanged") {
    ThetaKernel tk(1, 3, 1, trivial4());
    ThetaOptions wide;
    wide.cutoff = 100.0;
    auto a = tk.eval(I, I), b = tk.eval(I, I, wide);
    CHECK(rel(a.value, b.value) < 1e-12);
    CHECK(a.tail < 1e-12 * std::abs(a.value));
}

TEST_CASE("Fourier form agrees with the direct sum") {
    ThetaKernel tk(1, 3, 1, trivial4());
    CHECK(rel(tk.fourier_form_eval(I, cplx(1.0, 2.0)), tk.eval(I, cplx(1.0, 2.0)).value) < 1e-9);
    RandomPoints rp;
    for (int i = 0; i < 10; ++i) {
        cplx z = rp(), w = rp();
        CHECK(rel(tk.fourier_form_eval(z, w), tk.eval(z, w).value) < 1e-9);
    }
    // chi1 nonprincipal kills the x = 0 term; for the trivial character mod 4 chi(0) = 0 as well
    CHECK(std::abs(tk.weight(0)) < 1e-14);
    ThetaKernel tk2(2, 1, 0, chi8());
    CHECK(std::abs(tk2.weight(0)) < 1e-14);
}

TEST_CASE("constant Fourier coefficient is the u-average") {
    ThetaKernel tk(1, 3, 1, trivial4());
    const double v = 1.1;
    const cplx w(0.2, 1.3);
    auto coef = tk.fourier_coefficients(v, w);
    // coefficients live on integers, so the trapezoid rule with many nodes is exact up to aliasing
    const int nodes = 64;
    cplx avg = 0.0;
    for (int j = 0; j < nodes; ++j) avg += tk.eval(cplx(double(j) / nodes, v), w).value;
    avg /= double(nodes);
    CHECK(rel(avg, coef[0]) < 1e-9);
}

TEST_CASE("unfolded series reproduces the kernel on the imaginary axis") {
    ThetaKernel tk(1, 3, 1, trivial4());
    cplx z = 2.0 * I;
    double eta = 3.0;
    cplx direct = tk.eval(z, eta * I).value;
    cplx unf = niwa_unfolded_eval(1, 3, trivial4(), z, eta);
    CHECK(rel(unf, direct) < 1e-8);
    NiwaOptions deep;
    deep.depth = 128;
    CHECK(rel(niwa_unfolded_eval(1, 3, trivial4(), z, eta, deep), unf) < 1e-9);

    ThetaKernel tk2(2, 1, 0, chi8());
    CHECK(rel(niwa_unfolded_eval(2, 1, chi8(), cplx(0.1, 1.5), 2.0), tk2.eval(cplx(0.1, 1.5), 2.0 * I).value) < 1e-8);
    ThetaKernel tk5(1, 5, 2, trivial4());
    CHECK(rel(niwa_unfolded_eval(1, 5, trivial4(), cplx(0.3, 1.2), 1.5), tk5.eval(cplx(0.3, 1.2), 1.5 * I).value) <
          1e-8);
}

TEST_CASE("z-modularity of the kernel") {
    RandomPoints rp;
    ThetaKernel tk(1, 3, 1, trivial4());
    for (int i = 0; i < 5; ++i) {
        cplx z = rp(), w = rp();
        cplx t = tk.eval(z, w).value;
        for (const auto& g : gamma0_4) {
            cplx lhs = std::pow(theta_multiplier(g, z), -3) * tk.eval(mobius(g, z), w).value;
            CHECK(rel(lhs, tk.chi()(g.d) * t) < 1e-7);
        }
    }
    ThetaKernel tk2(2, 1, 0, chi8());
    cplx z(0.1, 0.9), w(0.2, 1.2);
    cplx t = tk2.eval(z, w).value;
    for (const auto& g : gamma0_8) {
        cplx lhs = std::pow(theta_multiplier(g, z), -1) * tk2.eval(mobius(g, z), w).value;
        CHECK(rel(lhs, tk2.chi()(g.d) * t) < 1e-7);
    }
}

TEST_CASE("w-modularity of the conjugated kernel") {
    RandomPoints rp;
    ThetaKernel tk(1, 3, 1, trivial4());
    const std::vector<Mat2i> gamma0_2 = {{1, 1, 0, 1}, {1, 0, 2, 1}, {3, 1, 2, 1}, {1, -1, 2, -1}, {5, 2, 2, 1}};
    for (int i = 0; i < 5; ++i) {
        cplx z = rp(), w = rp();
        cplx t = std::conj(tk.eval(z, w).value);
        for (const auto& g : gamma0_2) {
            cplx lhs = std::conj(tk.eval(z, mobius(g, w)).value);
            cplx chi2 = tk.chi()(g.d) * tk.chi()(g.d);
            CHECK(rel(lhs, chi2 * std::pow(double(g.c) * w + double(g.d), 2) * t) < 1e-7);
        }
    }
}

TEST_CASE("kernel PDE with Richardson-extrapolated differences") {
    ThetaKernel tk(1, 3, 1, trivial4());
    const int k = 3, m = 1;
    const cplx z = I, w(1.0, 1.0);
    auto T = [&](cplx zz, cplx ww) { return tk.eval(zz, ww).value; };
    auto sides = [&](double h) {
        cplx t = T(z, w);
        cplx tu = (T(z + h, w) - T(z - h, w)) / (2 * h), tv = (T(z + I * h, w) - T(z - I * h, w)) / (2 * h);
        cplx tuu = (T(z + h, w) - 2.0 * t + T(z - h, w)) / (h * h);
        cplx tvv = (T(z + I * h, w) - 2.0 * t + T(z - I * h, w)) / (h * h);
        cplx tx = (T(z, w + h) - T(z, w - h)) / (2 * h), ty = (T(z, w + I * h) - T(z, w - I * h)) / (2 * h);
        cplx txx = (T(z, w + h) - 2.0 * t + T(z, w - h)) / (h * h);
        cplx tyy = (T(z, w + I * h) - 2.0 * t + T(z, w - I * h)) / (h * h);
        double v = z.imag(), eta = w.imag();
        cplx L = 4.0 * (v * v * (tuu + tvv) - I * (k / 2.0) * v * (tu + I * tv) + (k / 4.0) * (k / 4.0 - 1) * t);
        cplx R = eta * eta * (txx + tyy) + 2.0 * m * I * eta * (tx - I * ty) + (m * (m - 1) - 0.75) * t;
        return std::pair{L - R, t};
    };
    auto [d1, t] = sides(1e-3);
    auto [d2, t2] = sides(5e-4);
    cplx rich = (4.0 * d2 - d1) / 3.0;
    CHECK(std::abs(rich) / std::abs(t) < 1e-4);
}

TEST_CASE("lattice theta obeys the Shintani law and the corollary character") {
    for (long N : {1L, 2L}) {
        DirichletCharacter chi = N == 1 ? trivial4() : chi8();
        ThetaKernel tk(N, 3, 1, chi);
        LatticeData lat = level_lattice(N);
        PermutationWeight pw = level_weight(lat, N, tk.chi1());
        PolyGaussian f = tk.spherical().as_poly_gaussian();
        cplx z(0.15, 1.05);
        cplx t = lattice_theta(lat, pw.values, f, z, 3);
        long B = long(to_double(lat.B()));
        CHECK(B == -32 * N * N * N);
        const auto& gs = N == 1 ? gamma0_4 : gamma0_8;
        std::vector<Mat2i> more = gs;
        more.push_back({-1, 0, 4 * N, -1});
        more.push_back({1, 0, -8 * N, 1});
        int checked = 0;
        for (const auto& g : more) {
            if (g.det() != 1 || g.c % (4 * N) != 0) continue;
            cplx lhs = std::pow(theta_multiplier(g, z), -3) * lattice_theta(lat, pw.values, f, mobius(g, z), 3);
            cplx pred = double(shintani_character_factor(3, 3, 1, B, g.d)) * pw.character(g.d) * t;
            CHECK(rel(lhs, pred) < 1e-8);
            ++checked;
        }
        CHECK(checked >= 5);

        // component-wise Shintani transformation for generic gamma
        for (Mat2i g : {Mat2i{0, -1, 1, 0}, Mat2i{1, 0, 1, 1}, Mat2i{2, 1, 1, 1}}) {
            std::vector<cplx> e(lat.num_cosets(), 0.0);
            e[lat.coset_index({1, 0, 0})] = 1.0;
            double sgn = g.c > 0 ? 1 : (g.c < 0 ? -1 : 0);
            cplx lhs = std::pow(double(g.c) * z + double(g.d), -1.5) * lattice_theta(lat, e, f, mobius(g, z), 3);
            auto row = shintani_transform(e, g, lat);
            cplx rhs = std::pow(std::sqrt(I), -sgn) * lattice_theta(lat, row, f, z, 3);
            CHECK(rel(lhs, rhs) < 1e-7);
        }
    }
    CHECK(shintani_character_factor(3, 3, 1, -32, -1) == -kronecker(-1, -1) * kronecker(2, -1) * kronecker(-32, -1));
}

TEST_CASE("twisted kernel matches the direct transform") {
    for (long N : {1L, 2L}) {
        DirichletCharacter chi = N == 1 ? trivial4() : chi8();
        ThetaKernel tk(N, 3, 1, chi);
        cplx z(0.2, 1.2), w(0.3, 0.9);
        for (Mat2i g : {Mat2i{1, 0, 0, 1}, Mat2i{0, -1, 1, 0}, Mat2i{1, 0, 1, 1}, Mat2i{0, -1, 1, 2},
                        Mat2i{1, 0, 2, 1}, Mat2i{-1, 0, -1, -1}}) {
            TwistedTheta tt(tk, g);
            cplx direct = std::pow(double(g.c) * z + double(g.d), -1.5) * tk.eval(mobius(g, z), w).value;
            CHECK(rel(tt.eval(z, w), direct) < 1e-9);
        }
    }
}

TEST_CASE("shared invariant checks") {
    for (long M : {2L, 4L, 8L}) {
        auto gs = gamma0_elements(M, 6);
        CHECK(gs.size() == 6);
        for (const auto& g : gs) {
            CHECK(g.det() == 1);
            CHECK(g.c % M == 0);
        }
    }
    ThetaKernel tk(1, 3, 1, trivial4());
    cplx z(0.13, 0.95), w(-0.2, 1.1);
    CHECK(kernel_z_modularity(tk, z, w, gamma0_elements(4)).residual < 1e-7);
    CHECK(kernel_w_modularity(tk, z, w, gamma0_elements(2)).residual < 1e-7);
    CHECK_THROWS_AS(kernel_z_modularity(tk, z, w, gamma0_elements(2)), Error);
    CHECK(kernel_pde_residual(tk, I, cplx(1.0, 1.0)).residual < 1e-4);
}
