#include <cmath>

#include "thetalift/arith.hpp"

namespace thetalift {

namespace {

// B_{2j}/(2j)! for j = 1..8
constexpr double kBernoulliOverFact[8] = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
};

constexpr int kHead = 20;

// (X^{1-s} - 1)/(s - 1), analytic through s = 1
cplx power_minus_one(cplx s, double X) {
    double lx = std::log(X);
    cplx t = (1.0 - s) * lx;
    if (std::abs(t) < 1e-3) {
        cplx series = 1.0 + t / 2.0 + t * t / 6.0 + t * t * t / 24.0 + t * t * t * t / 120.0;
        return -lx * series;
    }
    return -(std::exp(t) - 1.0) / (1.0 - s);
}

}  // namespace

cplx hurwitz_zeta_regular(cplx s, double a) {
    if (!(a > 0)) throw Error(ErrorKind::Domain, "hurwitz_zeta: a must be positive");
    cplx sum = 0.0;
    for (int n = 0; n < kHead; ++n) sum += std::exp(-s * std::log(n + a));
    double X = kHead + a;
    double lx = std::log(X);
    sum += power_minus_one(s, X);
    sum += 0.5 * std::exp(-s * lx);
    // s (s+1) ... (s+2j-2) X^{-s-2j+1}
    cplx rising = s;
    cplx xp = std::exp(-(s + 1.0) * lx);
    for (int j = 1; j <= 8; ++j) {
        sum += kBernoulliOverFact[j - 1] * rising * xp;
        rising *= (s + double(2 * j - 1)) * (s + double(2 * j));
        xp /= X * X;
    }
    return sum;
}

cplx hurwitz_zeta(cplx s, double a) {
    if (s == 1.0) throw Error(ErrorKind::Domain, "hurwitz_zeta: pole at s = 1");
    return hurwitz_zeta_regular(s, a) + 1.0 / (s - 1.0);
}

LValue dirichlet_L(cplx s, const DirichletCharacter& chi) {
    long M = chi.modulus();
    cplx total = 0.0, mass = 0.0;
    for (long h = 1; h <= M; ++h) {
        cplx c = chi(h);
        if (c == 0.0) continue;
        total += c * hurwitz_zeta_regular(s, double(h) / double(M));
        mass += c;
    }
    bool has_mass = std::abs(mass) > 1e-9;
    if (has_mass && std::abs(s - 1.0) < 1e-14) return {cplx(0.0), true};
    if (has_mass) total += mass / (s - 1.0);
    return {std::exp(-s * std::log(double(M))) * total, false};
}

cplx dirichlet_L_direct(cplx s, const DirichletCharacter& chi, long terms) {
    cplx sum = 0.0;
    for (long n = 1; n <= terms; ++n) {
        cplx c = chi(n);
        if (c == 0.0) continue;
        sum += c * std::exp(-s * std::log(double(n)));
    }
    return sum;
}

}  // namespace thetalift
