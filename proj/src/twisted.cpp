#include <cmath>

#include "thetalift/theta.hpp"

namespace thetalift {

TwistedTheta::TwistedTheta(const ThetaKernel& tk, const Mat2i& alpha)
    : tk_(&tk), alpha_(alpha), lat_(twisted_lattice(tk.N())) {
    if (alpha.det() != 1) throw Error(ErrorKind::Domain, "twisted theta: det != 1");
    const long M = 4 * tk.N();
    std::vector<cplx> base(lat_.num_cosets(), 0.0);
    for (long p = 0; p < M; ++p) base[lat_.coset_index({p, 0, 0})] = tk.weight(p);
    weights_ = shintani_transform(base, alpha, lat_);
    double sgn = alpha.c > 0 ? 1.0 : (alpha.c < 0 ? -1.0 : 0.0);
    const Polynomial3& P = tk.spherical().polynomial();
    for (int j = 0; j <= P.degree(); ++j) parts_.emplace_back(P.homogeneous(j));
    const_ = std::pow(I, tk.lambda()) / std::sqrt(32.0 * double(M / 4) * double(M / 4) * double(M / 4)) *
             std::pow(double(M), 0.75) * std::pow(std::sqrt(I), -sgn);
}

void TwistedTheta::for_each_fourier_term(double v, cplx w, const ThetaOptions& opt,
                                         const std::function<void(long, cplx)>& f) const {
    const long N = tk_->N();
    KernelFrame fr(N, cplx(0.0, v), w);
    const double sqrtV = std::sqrt(fr.V);
    const cplx W = 2.0 * double(N) * w;
    const double etaW = W.imag();
    const Eigen::Vector3d scale(0.25, 0.25, 1.0 / (16.0 * N));
    Eigen::Matrix3d B = fr.ginv * scale.asDiagonal();
    Eigen::Matrix3d A = 8.0 * pi * v * B.transpose() * Eigen::Vector3d(2.0, 1.0, 2.0).asDiagonal() * B;
    A = 0.5 * (A + A.transpose());
    EllipsoidEnumerator en(A, opt.cutoff);
    const FlatPolynomial& P = tk_->flat_polynomial();
    const cplx pref = const_ * std::pow(4.0 * w.imag(), -double(tk_->m())) * std::pow(v, 0.75 - tk_->k() / 4.0);
    auto outer = en.outer_values();
    std::vector<std::vector<std::pair<long, cplx>>> parts(outer.size());
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
    for (long i = 0; i < long(outer.size()); ++i) {
        auto& out = parts[i];
        en.for_each_in_slice(outer[i], [&](long p, long q, long t, double) {
            cplx wt = weights_[lat_.coset_index({p, q, t})];
            if (wt == 0.0) return;
            Eigen::Vector3d x(p * 0.25, q * 0.25, t / (16.0 * N));
            Eigen::Vector3d y = fr.ginv * x;
            cplx ell = (x(0) - W * x(1) + W * W * x(2)) / etaW;
            long n4 = N * q * q - p * t;
            double ex = -16.0 * pi * v * std::norm(ell) + 2.0 * pi * v * double(n4) / (4.0 * N);
            out.emplace_back(n4, wt * std::exp(ex) * P.eval(sqrtV * y(0), sqrtV * y(1), sqrtV * y(2)));
        });
    }
    for (const auto& part : parts)
        for (const auto& [n4, c] : part) f(n4, pref * c);
}

std::vector<TwistedTheta::StripTerm> TwistedTheta::strip_terms(cplx w, double bound) const {
    const long N = tk_->N();
    KernelFrame fr(N, I, w);
    const cplx W = 2.0 * double(N) * w;
    const double etaW = W.imag();
    const Eigen::Vector3d scale(0.25, 0.25, 1.0 / (16.0 * N));
    Eigen::Matrix3d B = fr.ginv * scale.asDiagonal();
    Eigen::Matrix3d Q = 8.0 * pi * B.transpose() * Eigen::Vector3d(2.0, 1.0, 2.0).asDiagonal() * B;
    Q = 0.5 * (Q + Q.transpose());
    EllipsoidEnumerator en(Q, bound);
    const cplx pref = const_ * std::pow(4.0 * w.imag(), -double(tk_->m()));
    auto outer = en.outer_values();
    std::vector<std::vector<StripTerm>> parts(outer.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < long(outer.size()); ++i) {
        en.for_each_in_slice(outer[i], [&](long p, long q, long t, double) {
            cplx wt = weights_[lat_.coset_index({p, q, t})];
            if (wt == 0.0) return;
            Eigen::Vector3d x(p * 0.25, q * 0.25, t / (16.0 * N));
            Eigen::Vector3d y = fr.ginv * x;
            cplx ell = (x(0) - W * x(1) + W * W * x(2)) / etaW;
            StripTerm st{N * q * q - p * t, 16.0 * pi * std::norm(ell), {}};
            double sv = std::sqrt(4.0 * double(N));
            double scale_j = 1.0;
            for (const auto& P : parts_) {
                st.C.push_back(pref * wt * scale_j * P.eval(y(0), y(1), y(2)));
                scale_j *= sv;
            }
            parts[i].push_back(std::move(st));
        });
    }
    std::vector<StripTerm> out;
    for (auto& p : parts)
        for (auto& t : p) out.push_back(std::move(t));
    return out;
}

cplx TwistedTheta::eval(cplx z, cplx w, const ThetaOptions& opt) const {
    if (!(z.imag() > 0)) throw Error(ErrorKind::Domain, "twisted theta: z must lie in the upper half-plane");
    const double M = 4.0 * tk_->N();
    cplx s = 0.0;
    for_each_fourier_term(z.imag(), w, opt, [&](long n4, cplx c) {
        double ph = z.real() * double(n4) / M;
        s += c * e2pi(ph - std::floor(ph));
    });
    return s;
}

}  // namespace thetalift
