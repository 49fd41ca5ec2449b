#pragma once

#include <array>

#include "thetalift/lattice.hpp"
#include "thetalift/polynomial.hpp"

namespace thetalift {

// f_{m,lambda,mu}(x) = L_{m,lambda,mu}(x) He_mu(c (x1 + x3)) exp(-(2 pi/N)(2 x1^2 + x2^2 + 2 x3^2)),
// c = sqrt(8 pi / N), where L_{m,lambda,mu} is the weight-2m circle average of
// L_{lambda,mu}(x) = He_nu1(c (x1 - x3)) He_nu2(c x2).
class SphericalFunction {
public:
    // nu1 < 0 picks nu1 = lambda + mu, nu2 = 0
    SphericalFunction(int m, int lambda, int mu, long N, int nu1 = -1);

    int m() const { return m_; }
    int lambda() const { return lambda_; }
    int mu() const { return mu_; }
    int nu1() const { return nu1_; }
    int nu2() const { return nu2_; }
    long N() const { return N_; }
    int weight_k() const { return 2 * lambda_ + 1; }
    int quadrature_order() const { return order_; }

    const Polynomial3& base() const { return base_; }
    const Polynomial3& averaged() const { return avg_; }
    // averaged() times the He_mu factor
    const Polynomial3& polynomial() const { return poly_; }

    cplx base_polynomial(const std::array<double, 3>& x) const;
    cplx eval(const std::array<double, 3>& x) const;
    PolyGaussian as_poly_gaussian() const;

private:
    int m_, lambda_, mu_, nu1_, nu2_;
    long N_;
    int order_;
    Polynomial3 base_, avg_, poly_;
};

// Gaussian factor exp(-(2 pi / N)(2 x1^2 + x2^2 + 2 x3^2))
double level_gaussian(const std::array<double, 3>& x, long N);
// (x1 - i x2 - x3)^lambda times the Gaussian
cplx closed_form_niwa(int lambda, const std::array<double, 3>& x, long N);

// epsilon(kappa(phi))^{p-q} sqrt(e^{-i phi})^{-k}
cplx first_spherical_factor(double phi, int p_minus_q, int k);

}  // namespace thetalift
