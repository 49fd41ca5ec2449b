#include "thetalift/theta.hpp"

#include <cmath>
#include <numeric>

namespace thetalift {

EllipsoidEnumerator::EllipsoidEnumerator(const Eigen::Matrix3d& A_, double bound_) : A(A_), bound(bound_) {
    Eigen::LLT<Eigen::Matrix3d> llt(A);
    if (llt.info() != Eigen::Success) throw Error(ErrorKind::Domain, "ellipsoid: form is not positive definite");
    R_ = llt.matrixU();
}

std::vector<long> EllipsoidEnumerator::outer_values() const {
    long r = long(std::floor(std::sqrt(bound) / R_(2, 2)));
    std::vector<long> v;
    for (long i = -r; i <= r; ++i) v.push_back(i);
    return v;
}

KernelFrame::KernelFrame(long N_, cplx z_, cplx w_) : N(N_), z(z_), w(w_) {
    if (!(z.imag() > 0) || !(w.imag() > 0)) throw Error(ErrorKind::Domain, "theta: z and w must lie in the upper half-plane");
    V = 4.0 * N * z.imag();
    U = 4.0 * N * z.real();
    ginv = so_embed(sigma_matrix(2.0 * double(N) * w).inverse());
}

cplx lambda_form(const std::array<long, 3>& x, cplx w, long N) {
    if (!(w.imag() > 0)) throw Error(ErrorKind::Domain, "lambda_form: eta must be positive");
    double n = double(N);
    return (double(x[0]) - 4.0 * n * w * double(x[1]) + 4.0 * n * n * w * w * double(x[2])) / (4.0 * w.imag());
}

std::vector<HeegnerPoint> find_singularities(long N, cplx w, long radius, double tol) {
    std::vector<HeegnerPoint> out;
    for (long a = -radius; a <= radius; ++a)
        for (long b = -radius; b <= radius; ++b)
            for (long c = -radius; c <= radius; ++c) {
                if (a == 0 && b == 0 && c == 0) continue;
                if (std::abs(lambda_form({a, b, c}, w, N)) >= tol) continue;
                HeegnerPoint h{a, b, c, w};
                if (c != 0) {
                    // the root of c W^2 - 2 b W + a in the upper half-plane, W = 2 N w
                    cplx disc = std::sqrt(cplx(double(b * b - a * c)));
                    cplx r1 = (double(b) + disc) / (2.0 * N * c), r2 = (double(b) - disc) / (2.0 * N * c);
                    h.w = r1.imag() > 0 ? r1 : r2;
                }
                out.push_back(h);
            }
    return out;
}

namespace {

int admissible_mu(int m, int lambda) {
    for (int mu = 0;; ++mu)
        if (std::abs(m) <= lambda + mu && (lambda + mu - m) % 2 == 0) return mu;
}

DirichletCharacter to_modulus(const DirichletCharacter& chi, long M) {
    if (chi.modulus() == M) return chi;
    if (M % chi.modulus() == 0) return chi.lift(M);
    throw Error(ErrorKind::Config, "character modulus must divide 4N");
}

struct Partial {
    cplx sum = 0.0;
    double shell = 0.0;
    size_t count = 0;
};

constexpr double kShellWidth = 5.0;

Eigen::Matrix3d gaussian_form(const Eigen::Matrix3d& ginv, const Eigen::Vector3d& scale, double c) {
    Eigen::Matrix3d B = ginv * scale.asDiagonal();
    Eigen::Vector3d wts(2.0, 1.0, 2.0);
    Eigen::Matrix3d A = c * B.transpose() * wts.asDiagonal() * B;
    return 0.5 * (A + A.transpose());
}

}  // namespace

ThetaKernel::ThetaKernel(long N, int k, int m, DirichletCharacter chi, int mu)
    : N_(N),
      k_(k),
      m_(m),
      lambda_((k - 1) / 2),
      chi_(to_modulus(chi, 4 * N)),
      sf_(m, (k - 1) / 2, mu < 0 ? admissible_mu(m, (k - 1) / 2) : mu, N) {
    if (N < 1) throw Error(ErrorKind::Config, "theta: N must be positive");
    if (k < 1 || k % 2 == 0) throw Error(ErrorKind::Config, "theta: k must be a positive odd integer");
    const long M = 4 * N;
    std::vector<cplx> t(M);
    for (long h = 0; h < M; ++h) {
        cplx c = chi_(h);
        if (h % 2 == 1 && lambda_ % 2 == 1) c *= double(kronecker(-1, h));
        t[h] = c;
    }
    chi1_ = DirichletCharacter(M, t);
    gauss_.resize(M);
    for (long l = 0; l < M; ++l) gauss_[l] = gauss_transform(chi1_, l);
    flat_ = FlatPolynomial(sf_.polynomial());
}

cplx ThetaKernel::weight(long l) const {
    long M = 4 * N_;
    return gauss_[((l % M) + M) % M];
}

cplx ThetaKernel::prefactor(double eta) const {
    cplx il = std::pow(I, lambda_);
    return il / std::sqrt(32.0 * double(N_ * N_ * N_)) * std::pow(4.0 * eta, -double(m_));
}

namespace {

// one lattice term of the untwisted kernel, x = (a/4, b/2, c/4)
struct TermEval {
    const ThetaKernel& tk;
    const KernelFrame& fr;
    double gauss_scale, sqrtV;
    TermEval(const ThetaKernel& t, const KernelFrame& f)
        : tk(t), fr(f), gauss_scale(2.0 * pi / double(t.N()) * f.V), sqrtV(std::sqrt(f.V)) {}

    // returns weight * e(u n) exp(-E) P(sqrt(V) y); E written to *E
    cplx operator()(long a, long b, long c, double* E) const {
        cplx wt = tk.weight(a);
        Eigen::Vector3d x(a / 4.0, b / 2.0, c / 4.0);
        Eigen::Vector3d y = fr.ginv * x;
        *E = gauss_scale * (2 * y(0) * y(0) + y(1) * y(1) + 2 * y(2) * y(2));
        if (wt == 0.0) return 0.0;
        long n = b * b - a * c;
        double ph = fr.U * double(n) / (4.0 * fr.N);
        return wt * std::polar(std::exp(-*E), 2.0 * pi * (ph - std::floor(ph))) *
               tk.flat_polynomial().eval(sqrtV * y(0), sqrtV * y(1), sqrtV * y(2));
    }
};

}  // namespace

ThetaValue ThetaKernel::eval(cplx z, cplx w, const ThetaOptions& opt) const {
    KernelFrame fr(N_, z, w);
    TermEval term(*this, fr);
    EllipsoidEnumerator en(gaussian_form(fr.ginv, Eigen::Vector3d(0.25, 0.5, 0.25), term.gauss_scale), opt.cutoff);
    auto outer = en.outer_values();
    std::vector<Partial> parts(outer.size());
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
    for (long i = 0; i < long(outer.size()); ++i) {
        Partial p;
        en.for_each_in_slice(outer[i], [&](long a, long b, long c, double) {
            double E;
            cplx t = term(a, b, c, &E);
            p.sum += t;
            if (E > opt.cutoff - kShellWidth) p.shell += std::abs(t);
            ++p.count;
        });
        parts[i] = p;
    }
    Partial tot;
    for (const auto& p : parts) {
        tot.sum += p.sum;
        tot.shell += p.shell;
        tot.count += p.count;
    }
    cplx pref = prefactor(w.imag()) * std::pow(z.imag(), -k_ / 4.0) * std::pow(fr.V, 0.75);
    return {pref * tot.sum, std::abs(pref) * tot.shell * std::exp(-kShellWidth), tot.count};
}

ThetaValue ThetaKernel::eval_serial_reference(cplx z, cplx w, const ThetaOptions& opt) const {
    KernelFrame fr(N_, z, w);
    TermEval term(*this, fr);
    Eigen::Matrix3d A = gaussian_form(fr.ginv, Eigen::Vector3d(0.25, 0.5, 0.25), term.gauss_scale);
    Eigen::Matrix3d Ainv = A.inverse();
    long r[3];
    for (int i = 0; i < 3; ++i) r[i] = long(std::ceil(std::sqrt(opt.cutoff * Ainv(i, i))));
    Partial tot;
    for (long a = -r[0]; a <= r[0]; ++a)
        for (long b = -r[1]; b <= r[1]; ++b)
            for (long c = -r[2]; c <= r[2]; ++c) {
                double E;
                cplx t = term(a, b, c, &E);
                if (E > opt.cutoff) continue;
                tot.sum += t;
                if (E > opt.cutoff - kShellWidth) tot.shell += std::abs(t);
                ++tot.count;
            }
    cplx pref = prefactor(w.imag()) * std::pow(z.imag(), -k_ / 4.0) * std::pow(fr.V, 0.75);
    return {pref * tot.sum, std::abs(pref) * tot.shell * std::exp(-kShellWidth), tot.count};
}

std::map<long, cplx> ThetaKernel::fourier_coefficients(double v, cplx w, const ThetaOptions& opt) const {
    KernelFrame fr(N_, cplx(0.0, v), w);
    const double sqrtV = std::sqrt(fr.V);
    const cplx W = 2.0 * double(N_) * w;
    const double etaW = W.imag();
    // h(x) = P(sqrt(V) g^{-1} x) as a polynomial in (a, b, c)
    Eigen::Matrix3d lin = sqrtV * fr.ginv * Eigen::Vector3d(0.25, 0.5, 0.25).asDiagonal();
    FlatPolynomial h(sf_.polynomial().compose(lin.cast<cplx>()));
    EllipsoidEnumerator en(gaussian_form(fr.ginv, Eigen::Vector3d(0.25, 0.5, 0.25), 2.0 * pi / double(N_) * fr.V),
                           opt.cutoff);
    auto outer = en.outer_values();
    std::vector<std::map<long, cplx>> parts(outer.size());
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
    for (long i = 0; i < long(outer.size()); ++i) {
        std::map<long, cplx> acc;
        en.for_each_in_slice(outer[i], [&](long a, long b, long c, double) {
            cplx wt = weight(a);
            if (wt == 0.0) return;
            cplx ell = (a / 4.0 - W * (b / 2.0) + W * W * (c / 4.0)) / etaW;
            long n = b * b - a * c;
            double ex = -16.0 * pi * v * std::norm(ell) + 2.0 * pi * v * double(n);
            acc[n] += wt * std::exp(ex) * h.eval(double(a), double(b), double(c));
        });
        parts[i] = std::move(acc);
    }
    std::map<long, cplx> out;
    cplx pref = prefactor(w.imag()) * std::pow(v, -k_ / 4.0) * std::pow(fr.V, 0.75);
    for (const auto& p : parts)
        for (const auto& [n, c] : p) out[n] += c;
    for (auto& [n, c] : out) c *= pref;
    return out;
}

cplx ThetaKernel::fourier_form_eval(cplx z, cplx w, const ThetaOptions& opt) const {
    auto coef = fourier_coefficients(z.imag(), w, opt);
    cplx s = 0.0;
    for (const auto& [n, c] : coef) s += c * e2pi(std::fmod(z.real() * double(n), 1.0));
    return s;
}

cplx theta_eval(const ThetaKernel& tk, cplx z, cplx w, const ThetaOptions& opt) { return tk.eval(z, w, opt).value; }

cplx niwa_unfolded_eval(long N, int k, const DirichletCharacter& chi_in, cplx z, double eta, const NiwaOptions& opt) {
    if (k < 1 || k % 2 == 0) throw Error(ErrorKind::Config, "niwa: k must be a positive odd integer");
    if (!(z.imag() > 0) || !(eta > 0)) throw Error(ErrorKind::Domain, "niwa: arguments must lie in the upper half-plane");
    const long M = 4 * N;
    const int lam = (k - 1) / 2;
    DirichletCharacter chi = to_modulus(chi_in, M);
    std::vector<cplx> chi1c(M);
    for (long h = 0; h < M; ++h) {
        cplx c = chi(h);
        if (h % 2 == 1 && lam % 2 == 1) c *= double(kronecker(-1, h));
        chi1c[h] = std::conj(c);
    }
    const double C = (lam % 2 ? -1.0 : 1.0) * std::pow(2.0, -4.0 * lam) * std::pow(double(N), lam / 2.0 + 0.25);
    const double v = z.imag(), u = z.real();
    const double im_min = pi * eta * eta / (4.0 * opt.cutoff);

    std::vector<double> binom(lam + 1, 1.0);
    for (int nu = 1; nu <= lam; ++nu) binom[nu] = binom[nu - 1] * (lam - nu + 1) / nu;

    cplx total = 0.0;
    for (long c = 0; c <= opt.depth; c += M) {
        double span2 = v / im_min - double(c) * double(c) * v * v;
        if (span2 < 0) break;
        long dlo = c == 0 ? 1 : long(std::floor(-c * u - std::sqrt(span2)));
        long dhi = c == 0 ? 1 : long(std::ceil(-c * u + std::sqrt(span2)));
        for (long d = dlo; d <= dhi; ++d) {
            if (std::gcd(c, d) != 1) continue;
            Mat2i g{1, 0, c, d};
            if (c != 0) {
                // a d - b c = 1
                long a0 = 0, b0 = 0;
                long r0 = d, r1 = c, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
                while (r1 != 0) {
                    long q = r0 / r1;
                    long tmp = r0 - q * r1;
                    r0 = r1;
                    r1 = tmp;
                    tmp = s0 - q * s1;
                    s0 = s1;
                    s1 = tmp;
                    tmp = t0 - q * t1;
                    t0 = t1;
                    t1 = tmp;
                }
                // s0 d + t0 c = r0 = +-1
                a0 = s0 * r0;
                b0 = -t0 * r0;
                g = Mat2i{a0, b0, c, d};
            }
            cplx gz = mobius(g, z);
            double im = gz.imag();
            if (im < im_min) continue;
            cplx j = theta_multiplier(g, z);
            long mmax = long(std::sqrt(4.0 * im * opt.cutoff / (pi * eta * eta))) + 1;
            long nmax = long(std::sqrt((opt.cutoff + 20.0) / (2.0 * pi * im))) + 2;
            double sq = 2.0 * std::sqrt(2.0 * pi * im);
            cplx s = 0.0;
            for (int nu = 0; nu <= lam; ++nu) {
                cplx msum = 0.0;
                for (long mm = -mmax; mm <= mmax; ++mm) {
                    cplx cm = chi1c[((mm % M) + M) % M];
                    if (cm == 0.0) continue;
                    msum += cm * std::pow(double(mm), lam - nu) * std::exp(-pi * mm * mm * eta * eta / (4.0 * im));
                }
                if (msum == 0.0) continue;
                cplx nsum = 0.0;
                for (long n = -nmax; n <= nmax; ++n)
                    nsum += hermite(nu, sq * n) * std::exp(2.0 * pi * I * double(n * n) * gz);
                s += binom[nu] * std::pow(2.0 / pi, nu / 2.0) * std::pow(eta, 1.0 - nu) / std::pow(im, lam - nu / 2.0) *
                     msum * nsum;
            }
            total += chi(d) * s / std::pow(j, k);
        }
    }
    return C * total;
}

cplx fricke_slash(const std::function<cplx(cplx)>& f, long N, double k, cplx z) {
    if (!(z.imag() > 0)) throw Error(ErrorKind::Domain, "fricke_slash: z must lie in the upper half-plane");
    cplx fz = f(-1.0 / (double(N) * z));
    double nk = std::pow(double(N), -k / 2.0);
    if (k == std::floor(k)) return nk * std::pow(z, -k) * fz;
    return nk * std::pow(-I * z, -k) * fz;
}

cplx lattice_theta(const LatticeData& lat, const std::vector<cplx>& omega, const PolyGaussian& f, cplx z, int k,
                   double cutoff) {
    if (lat.dim() != 3) throw Error(ErrorKind::Domain, "lattice_theta: three-dimensional lattices only");
    PolyGaussian F = weil_action_upper(sigma_matrix(z), lat.space(), f);
    Eigen::Vector3d D;
    for (int i = 0; i < 3; ++i) D(i) = to_double(lat.dual_scalings()[i]);
    Eigen::Matrix3d A = pi * D.asDiagonal() * F.M.real() * D.asDiagonal();
    A = 0.5 * (A + A.transpose());
    EllipsoidEnumerator en(A, cutoff);
    cplx sum = 0.0;
    for (long i2 : en.outer_values())
        en.for_each_in_slice(i2, [&](long i0, long i1, long j2, double) {
            cplx wt = omega[lat.coset_index({i0, i1, j2})];
            if (wt == 0.0) return;
            Eigen::VectorXd x(3);
            x << i0 * D(0), i1 * D(1), j2 * D(2);
            sum += wt * F.eval(x);
        });
    return std::pow(z.imag(), -k / 4.0) * sum;
}

int shintani_character_factor(int k, int n, int q, long B, long d) {
    long r = 1;
    int e = ((k - n) / 2) % 2;
    if (e != 0) r *= kronecker(-1, d);
    if (n % 2) r *= kronecker(2, d);
    r *= kronecker(B, d);
    long x = (q % 2 ? -B : B);
    if (x < 0 && d < 0) r = -r;
    return int(r);
}

}  // namespace thetalift
