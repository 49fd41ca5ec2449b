#include "thetalift/arith.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numeric>

namespace thetalift {

double hermite(int nu, double x) {
    if (nu < 0) throw Error(ErrorKind::Domain, "hermite: negative degree");
    if (nu == 0) return 1.0;
    double h0 = 1.0, h1 = x;
    for (int i = 1; i < nu; ++i) {
        double h2 = x * h1 - i * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

std::vector<double> hermite_coeffs(int nu) {
    std::vector<double> h0{1.0}, h1{0.0, 1.0};
    if (nu == 0) return h0;
    for (int i = 1; i < nu; ++i) {
        std::vector<double> h2(i + 2, 0.0);
        for (int p = 0; p <= i; ++p) h2[p + 1] += h1[p];
        for (int p = 0; p < i; ++p) h2[p] -= i * h0[p];
        h0 = std::move(h1);
        h1 = std::move(h2);
    }
    return h1;
}

namespace {

// Legendre continued fraction, modified Lentz; good for x > ~1 and any real a
double gamma_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 100000; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x)) * h;
}

}  // namespace

double upper_incomplete_gamma(double a, double x) {
    if (x < 0) throw Error(ErrorKind::Domain, "upper_incomplete_gamma: x < 0");
    if (a > 0) {
        if (x == 0) return std::tgamma(a);
        return boost::math::tgamma(a, x);
    }
    if (x == 0) throw Error(ErrorKind::Domain, "upper_incomplete_gamma: divergent at a <= 0, x = 0");
    if (x > 1.5) return gamma_cf(a, x);
    int n = static_cast<int>(std::ceil(-a));
    double a0 = a + n;
    double g;
    if (a0 == 0.0) {
        g = boost::math::expint(1, x);
    } else {
        g = boost::math::tgamma(a0, x);
    }
    for (double b = a0 - 1.0; b >= a - 0.5; b -= 1.0) {
        g = (g - std::exp(b * std::log(x) - x)) / b;
    }
    return g;
}

double harmonic_profile(double k, double x) { return upper_incomplete_gamma(1.0 - k, 2.0 * std::fabs(x)); }

long kronecker(long a, long n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    long res = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) res = -res;
    }
    while (n % 2 == 0) {
        n /= 2;
        if (a % 2 == 0) return 0;
        long r = ((a % 8) + 8) % 8;
        if (r == 3 || r == 5) res = -res;
    }
    a %= n;
    if (a < 0) a += n;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            long r = n % 8;
            if (r == 3 || r == 5) res = -res;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) res = -res;
        a %= n;
    }
    return n == 1 ? res : 0;
}

int shimura_symbol(long c, long d) {
    if (d % 2 == 0) throw Error(ErrorKind::Domain, "shimura_symbol: d must be odd");
    if (c == 0) return (d == 1 || d == -1) ? 1 : 0;
    long s = kronecker(c, d < 0 ? -d : d);
    if (c < 0 && d < 0) s = -s;
    return static_cast<int>(s);
}

cplx theta_multiplier(const Mat2i& g, cplx z) {
    if (g.det() != 1) throw Error(ErrorKind::Domain, "theta_multiplier: det != 1");
    if (g.c % 4 != 0) throw Error(ErrorKind::Domain, "theta_multiplier: gamma not in Gamma_0(4)");
    long dm = ((g.d % 4) + 4) % 4;
    cplx eps_inv = (dm == 1) ? cplx(1.0) : cplx(0.0, -1.0);
    return eps_inv * double(shimura_symbol(g.c, g.d)) * std::sqrt(double(g.c) * z + double(g.d));
}

DirichletCharacter::DirichletCharacter(long modulus, std::vector<cplx> table)
    : modulus_(modulus), table_(std::move(table)) {
    if (modulus_ < 1 || static_cast<long>(table_.size()) != modulus_)
        throw Error(ErrorKind::Config, "character table size must equal the modulus");
    for (long n = 0; n < modulus_; ++n) {
        bool coprime = std::gcd(n, modulus_) == 1;
        if (!coprime && std::abs(table_[n]) > 1e-12)
            throw Error(ErrorKind::Config, "character must vanish on non-coprime residues");
        if (coprime && std::fabs(std::abs(table_[n]) - 1.0) > 1e-9)
            throw Error(ErrorKind::Config, "character values must lie on the unit circle");
    }
    if (std::abs(table_[1 % modulus_] - 1.0) > 1e-12 && modulus_ > 1)
        throw Error(ErrorKind::Config, "character must satisfy chi(1) = 1");
    for (long a = 1; a < modulus_; ++a)
        for (long b = a; b < modulus_; ++b)
            if (std::abs(table_[(a * b) % modulus_] - table_[a] * table_[b]) > 1e-9)
                throw Error(ErrorKind::Config, "character table is not multiplicative");
}

DirichletCharacter DirichletCharacter::principal(long modulus) {
    std::vector<cplx> t(modulus);
    for (long n = 0; n < modulus; ++n) t[n] = std::gcd(n, modulus) == 1 ? 1.0 : 0.0;
    return DirichletCharacter(modulus, std::move(t));
}

DirichletCharacter DirichletCharacter::kronecker(long d, long modulus) {
    std::vector<cplx> t(modulus);
    for (long n = 0; n < modulus; ++n) {
        if (std::gcd(n, modulus) != 1) continue;
        t[n] = double(thetalift::kronecker(d, n == 0 ? modulus : n));
    }
    if (modulus == 1) t[0] = 1.0;
    return DirichletCharacter(modulus, std::move(t));
}

cplx DirichletCharacter::operator()(long n) const {
    long r = n % modulus_;
    if (r < 0) r += modulus_;
    return table_[r];
}

bool DirichletCharacter::is_even() const { return std::abs((*this)(-1) - 1.0) < 1e-12; }

bool DirichletCharacter::is_principal() const {
    for (long n = 0; n < modulus_; ++n)
        if (std::gcd(n, modulus_) == 1 && std::abs(table_[n] - 1.0) > 1e-12) return false;
    return true;
}

long DirichletCharacter::conductor() const {
    for (long f = 1; f <= modulus_; ++f) {
        if (modulus_ % f) continue;
        bool ok = true;
        for (long n = 1; n < modulus_ && ok; ++n)
            if (std::gcd(n, modulus_) == 1 && (n - 1) % f == 0 && std::abs(table_[n] - 1.0) > 1e-12) ok = false;
        if (ok) return f;
    }
    return modulus_;
}

DirichletCharacter DirichletCharacter::conj() const {
    std::vector<cplx> t(table_);
    for (auto& x : t) x = std::conj(x);
    return DirichletCharacter(modulus_, std::move(t));
}

DirichletCharacter DirichletCharacter::operator*(const DirichletCharacter& o) const {
    long m = std::lcm(modulus_, o.modulus_);
    std::vector<cplx> t(m);
    for (long n = 0; n < m; ++n) t[n] = (*this)(n) * o(n);
    return DirichletCharacter(m, std::move(t));
}

DirichletCharacter DirichletCharacter::lift(long new_modulus) const {
    if (new_modulus % modulus_) throw Error(ErrorKind::Config, "lift: new modulus must be a multiple");
    std::vector<cplx> t(new_modulus);
    for (long n = 0; n < new_modulus; ++n) t[n] = std::gcd(n, new_modulus) == 1 ? (*this)(n) : 0.0;
    return DirichletCharacter(new_modulus, std::move(t));
}

cplx gauss_transform(const DirichletCharacter& chi, long l) {
    long M = chi.modulus();
    cplx s = 0.0;
    for (long h = 1; h <= M; ++h) {
        cplx c = chi(h);
        if (c == 0.0) continue;
        long r = ((h * l) % M + M) % M;
        s += std::conj(c) * e2pi(double(r) / double(M));
    }
    return s;
}

cplx complex_gamma(cplx z) {
    static const double g = 7.0;
    static const double coef[9] = {0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
                                   771.32342877765313,   -176.61502916214059, 12.507343278686905,
                                   -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5) return pi / (std::sin(pi * z) * complex_gamma(1.0 - z));
    z -= 1.0;
    cplx x = coef[0];
    for (int i = 1; i < 9; ++i) x += coef[i] / (z + double(i));
    cplx t = z + g + 0.5;
    return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

}  // namespace thetalift
