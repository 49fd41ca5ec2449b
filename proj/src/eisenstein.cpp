#include <cmath>
#include <memory>
#include <numeric>

#include "thetalift/forms.hpp"

namespace thetalift {

namespace {

void check_region(double s, int k) {
    if (k % 2 == 0 || k < 1) throw Error(ErrorKind::Domain, "eisenstein: k must be a positive odd integer");
    if (!(k / 2.0 + 2 * s > 2)) throw Error(ErrorKind::Domain, "eisenstein: needs k/2 + 2 Re(s) > 2 for convergence");
}

// eps_d^{-1} (c/d), gamma = (*, *; c, d) in Gamma_0(4)
cplx multiplier_phase(long c, long d) {
    long dm = ((d % 4) + 4) % 4;
    cplx eps_inv = dm == 1 ? cplx(1.0) : cplx(0.0, -1.0);
    return eps_inv * double(shimura_symbol(c, d));
}

cplx ipow(cplx x, int k) {
    cplx r = 1.0;
    bool inv = k < 0;
    for (int i = 0; i < std::abs(k); ++i) r *= x;
    return inv ? 1.0 / r : r;
}

}  // namespace

cplx eisenstein_eval(cplx z, double s, int k, long N, const DirichletCharacter& chi_in, const EisensteinOptions& opt) {
    check_region(s, k);
    if (!(z.imag() > 0)) throw Error(ErrorKind::Domain, "eisenstein: z must lie in the upper half-plane");
    const long M = 4 * N;
    DirichletCharacter chi = chi_in.modulus() == M ? chi_in : chi_in.lift(M);
    const double v = z.imag(), u = z.real(), R = opt.radius;
    const long cmax = long(R / v);
    const long nc = cmax / M;
    std::vector<cplx> part(nc + 1, 0.0);
    part[0] = std::pow(v, s);
#pragma omp parallel for schedule(dynamic)
    for (long i = 1; i <= nc; ++i) {
        const long c = i * M;
        double r2 = R * R - double(c) * double(c) * v * v;
        if (r2 < 0) continue;
        double r = std::sqrt(r2);
        long dlo = long(std::ceil(-c * u - r)), dhi = long(std::floor(-c * u + r));
        cplx acc = 0.0;
        for (long d = dlo; d <= dhi; ++d) {
            if (std::gcd(c, d) != 1) continue;
            cplx t = double(c) * z + double(d);
            double im = v / std::norm(t);
            cplx j = multiplier_phase(c, d) * std::sqrt(t);
            acc += std::conj(chi(d)) * std::pow(im, s) * ipow(j, -k);
        }
        part[i] = acc;
    }
    cplx tot = 0.0;
    for (cplx p : part) tot += p;
    return tot;
}

std::vector<cplx> eisenstein_all_cosets(cplx z, double s, int k, long N, const DirichletCharacter& chi_in,
                                        const CosetSystem& cs, const EisensteinOptions& opt) {
    check_region(s, k);
    if (!(z.imag() > 0)) throw Error(ErrorKind::Domain, "eisenstein: z must lie in the upper half-plane");
    const long M = 4 * N;
    if (cs.level() != M) throw Error(ErrorKind::Config, "eisenstein: coset system must have level 4N");
    DirichletCharacter chi = chi_in.modulus() == M ? chi_in : chi_in.lift(M);
    const double v = z.imag(), u = z.real(), R = opt.radius;
    const long Cmax = long(R / v);
    const size_t nc = cs.size();
    const auto& reps = cs.reps();
    std::vector<cplx> jac(nc);
    for (size_t i = 0; i < nc; ++i) jac[i] = double(reps[i].c) * z + double(reps[i].d);

    std::vector<std::vector<cplx>> part(Cmax + 1, std::vector<cplx>(nc, 0.0));
#pragma omp parallel for schedule(dynamic)
    for (long C = 0; C <= Cmax; ++C) {
        auto& acc = part[C];
        long dlo, dhi;
        if (C == 0) {
            dlo = dhi = 1;
        } else {
            double r2 = R * R - double(C) * double(C) * v * v;
            if (r2 < 0) continue;
            double r = std::sqrt(r2);
            dlo = long(std::ceil(-C * u - r));
            dhi = long(std::floor(-C * u + r));
        }
        for (long D = dlo; D <= dhi; ++D) {
            if (std::gcd(C, D) != 1) continue;
            size_t idx = cs.index_of_row(C, D);
            const Mat2i& a = reps[idx];
            long cg = C * a.d - D * a.c, dg = -C * a.b + D * a.a;
            double sgn = 1.0;
            if (cg < 0 || (cg == 0 && dg < 0)) {
                cg = -cg;
                dg = -dg;
                sgn = -1.0;
            }
            cplx cz = double(C) * z + double(D);
            cplx t = sgn * cz / jac[idx];
            double im = v / std::norm(cz);
            cplx j = multiplier_phase(cg, dg) * std::sqrt(t);
            acc[idx] += std::conj(chi(dg)) * std::pow(im, s) * ipow(j, -k);
        }
    }
    std::vector<cplx> out(nc, 0.0);
    for (const auto& p : part)
        for (size_t i = 0; i < nc; ++i) out[i] += p[i];
    for (size_t i = 0; i < nc; ++i) out[i] *= std::pow(jac[i], -k / 2.0);
    return out;
}

cplx eisenstein_integral(cplx w, double s, int k, long M, const DirichletCharacter& psi_in, double radius) {
    if (!(double(k) + 2 * s > 2)) throw Error(ErrorKind::Domain, "eisenstein: needs k + 2 Re(s) > 2");
    if (!(w.imag() > 0)) throw Error(ErrorKind::Domain, "eisenstein: w must lie in the upper half-plane");
    DirichletCharacter psi = psi_in.modulus() == M ? psi_in : psi_in.lift(M);
    const double v = w.imag(), u = w.real();
    const long nc = long(radius / v) / M;
    std::vector<cplx> part(nc + 1, 0.0);
    part[0] = std::pow(v, s);
#pragma omp parallel for schedule(dynamic)
    for (long i = 1; i <= nc; ++i) {
        const long c = i * M;
        double r2 = radius * radius - double(c) * double(c) * v * v;
        if (r2 < 0) continue;
        double r = std::sqrt(r2);
        long dlo = long(std::ceil(-c * u - r)), dhi = long(std::floor(-c * u + r));
        cplx acc = 0.0;
        for (long d = dlo; d <= dhi; ++d) {
            if (std::gcd(c, d) != 1) continue;
            cplx t = double(c) * w + double(d);
            acc += std::conj(psi(d)) * std::pow(v / std::norm(t), s) * ipow(t, -k);
        }
        part[i] = acc;
    }
    cplx tot = 0.0;
    for (cplx p : part) tot += p;
    return tot;
}

WeakMaassForm eisenstein_form(double s, int k, long N, const DirichletCharacter& chi, const EisensteinOptions& opt) {
    check_region(s, k);
    WeakMaassForm g;
    g.weight = k / 2.0;
    g.level = 4 * N;
    g.character = chi.modulus() == 4 * N ? chi : chi.lift(4 * N);
    g.eigen_s = s;
    g.tag = GrowthTag::Maass;
    DirichletCharacter c = g.character;
    g.evaluator = [=](cplx z) { return eisenstein_eval(z, s, k, N, c, opt); };
    auto cs = std::make_shared<CosetSystem>(4 * N);
    g.coset_evaluator = [=](cplx z) { return eisenstein_all_cosets(z, s, k, N, c, *cs, opt); };
    g.name = "E_" + std::to_string(k) + "/2(s=" + std::to_string(s) + ")";
    return g;
}

}  // namespace thetalift
