#pragma once

#include <vector>

#include "thetalift/common.hpp"

namespace thetalift {

// Probabilists' Hermite polynomial He_nu(x).
double hermite(int nu, double x);
// Coefficients of He_nu in the monomial basis, index = power.
std::vector<double> hermite_coeffs(int nu);

// Gamma(a, x) = int_x^inf e^{-t} t^{a-1} dt, any real a; x > 0 required when a <= 0.
double upper_incomplete_gamma(double a, double x);
// W_k(x) = Gamma(1 - k, 2|x|), the nonholomorphic profile used for x < 0.
double harmonic_profile(double k, double x);

long kronecker(long a, long n);
// Quadratic residue symbol (c/d) in Shimura's normalisation, d odd.
int shimura_symbol(long c, long d);
// j(gamma, z) = eps_d^{-1} (c/d) (cz+d)^{1/2}, gamma in Gamma_0(4).
cplx theta_multiplier(const Mat2i& g, cplx z);

class DirichletCharacter {
public:
    DirichletCharacter() = default;
    DirichletCharacter(long modulus, std::vector<cplx> table);

    static DirichletCharacter principal(long modulus);
    // n -> (d/n) on residues coprime to the modulus.
    static DirichletCharacter kronecker(long d, long modulus);

    long modulus() const { return modulus_; }
    const std::vector<cplx>& table() const { return table_; }
    cplx operator()(long n) const;
    bool is_even() const;
    bool is_principal() const;
    long conductor() const;
    bool is_primitive() const { return conductor() == modulus_; }

    DirichletCharacter conj() const;
    DirichletCharacter operator*(const DirichletCharacter& o) const;
    // same character viewed modulo a multiple of the modulus
    DirichletCharacter lift(long new_modulus) const;

private:
    long modulus_ = 1;
    std::vector<cplx> table_{cplx(1.0)};
};

// sum_{h=1}^{M} conj(chi(h)) e(h l / M), M = modulus
cplx gauss_transform(const DirichletCharacter& chi, long l);

// Hurwitz zeta with the pole removed: zeta(s, a) - 1/(s - 1).
cplx hurwitz_zeta_regular(cplx s, double a);
cplx hurwitz_zeta(cplx s, double a);

struct LValue {
    cplx value;
    bool pole = false;  // principal character at s = 1
};
LValue dirichlet_L(cplx s, const DirichletCharacter& chi);
// direct partial-sum L-series, used for cross checks at Re s > 1
cplx dirichlet_L_direct(cplx s, const DirichletCharacter& chi, long terms);

cplx complex_gamma(cplx z);

}  // namespace thetalift
