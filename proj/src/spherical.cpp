#include "thetalift/spherical.hpp"

#include <cmath>

namespace thetalift {

namespace {

Eigen::Matrix3cd so_kappa_inverse(double phi) { return so_embed(kappa_matrix(-phi)).cast<cplx>(); }

}  // namespace

SphericalFunction::SphericalFunction(int m, int lambda, int mu, long N, int nu1)
    : m_(m), lambda_(lambda), mu_(mu), N_(N) {
    if (lambda < 0 || mu < 0) throw Error(ErrorKind::Domain, "spherical: lambda and mu must be non-negative");
    if (N < 1) throw Error(ErrorKind::Domain, "spherical: level must be positive");
    if (std::abs(m) > lambda + mu) throw Error(ErrorKind::Domain, "spherical: |m| > lambda + mu");
    nu1_ = nu1 < 0 ? lambda + mu : nu1;
    nu2_ = lambda + mu - nu1_;
    if (nu2_ < 0) throw Error(ErrorKind::Domain, "spherical: nu1 exceeds lambda + mu");
    order_ = 4 * (lambda + mu + std::abs(m)) + 8;

    const double c = std::sqrt(8.0 * pi / double(N));
    base_ = Polynomial3::hermite_of(nu1_, {c, 0.0, -c}) * Polynomial3::hermite_of(nu2_, {0.0, c, 0.0});

    for (int j = 0; j < order_; ++j) {
        double phi = 2.0 * pi * j / order_;
        avg_ += base_.compose(so_kappa_inverse(phi)) * (std::polar(1.0, 2.0 * m * phi) / double(order_));
    }
    double scale = 0.0;
    for (const auto& [e, v] : base_.terms()) scale = std::max(scale, std::abs(v));
    avg_.prune(1e-12 * scale);
    if (avg_.is_zero()) throw Error(ErrorKind::Domain, "spherical: circle average vanishes for this (nu1, nu2)");

    if (m == lambda && mu == 0) {
        // fix the free constant against (x1 - i x2 - x3)^lambda
        Polynomial3 top = avg_.homogeneous(lambda);
        auto it = top.terms().find({lambda, 0, 0});
        if (it == top.terms().end() || std::abs(it->second) < 1e-300)
            throw Error(ErrorKind::Domain, "spherical: degenerate top coefficient");
        avg_ = avg_ * (1.0 / it->second);
    }
    poly_ = avg_ * Polynomial3::hermite_of(mu, {c, 0.0, c});
}

cplx SphericalFunction::base_polynomial(const std::array<double, 3>& x) const { return base_.eval(x); }

cplx SphericalFunction::eval(const std::array<double, 3>& x) const { return poly_.eval(x) * level_gaussian(x, N_); }

PolyGaussian SphericalFunction::as_poly_gaussian() const {
    PolyGaussian f;
    f.n = 3;
    f.P = poly_;
    f.M = Eigen::MatrixXcd::Zero(3, 3);
    f.M(0, 0) = f.M(2, 2) = 4.0 / double(N_);
    f.M(1, 1) = 2.0 / double(N_);
    return f;
}

double level_gaussian(const std::array<double, 3>& x, long N) {
    return std::exp(-(2.0 * pi / double(N)) * (2 * x[0] * x[0] + x[1] * x[1] + 2 * x[2] * x[2]));
}

cplx closed_form_niwa(int lambda, const std::array<double, 3>& x, long N) {
    if (lambda < 0) throw Error(ErrorKind::Domain, "closed_form_niwa: lambda must be non-negative");
    cplx base(x[0] - x[2], -x[1]);
    cplx p = 1.0;
    for (int i = 0; i < lambda; ++i) p *= base;
    return p * level_gaussian(x, N);
}

cplx first_spherical_factor(double phi, int p_minus_q, int k) {
    double c = -std::sin(phi), d = std::cos(phi);
    cplx eps;
    if (std::fabs(c) < 1e-15)
        eps = d > 0 ? cplx(1.0) : I;
    else
        eps = c > 0 ? std::sqrt(I) : 1.0 / std::sqrt(I);
    cplx root = std::sqrt(std::polar(1.0, -phi));
    return std::pow(eps, p_minus_q) * std::pow(root, -k);
}

}  // namespace thetalift
