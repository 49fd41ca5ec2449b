#include "thetalift/identities.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numeric>

namespace thetalift {

LiftConstants lift_constants(int lambda, long D, long N, const DirichletCharacter& chi) {
    if (lambda < 0) throw Error(ErrorKind::Domain, "lift_constants: lambda must be >= 0");
    if (D < 1 || N < 1) throw Error(ErrorKind::Domain, "lift_constants: D and N must be positive");
    for (long p = 2; p * p <= D; ++p)
        if (D % (p * p) == 0) throw Error(ErrorKind::Domain, "lift_constants: D must be square-free");
    LiftConstants c;
    c.lambda = lambda;
    c.D = D;
    c.N = N;
    double sign = lambda % 2 ? -1.0 : 1.0;
    c.C = sign * std::pow(2.0, 2.0 - 3.0 * lambda) * std::pow(double(D * N), lambda / 2.0 + 0.25);
    long M = std::lcm(std::lcm(chi.modulus(), 4L), 4 * D);
    DirichletCharacter out = chi.lift(M);
    if (lambda % 2) out = out * DirichletCharacter::kronecker(-1, 4).lift(M);
    if (D > 1) out = out * DirichletCharacter::kronecker(D, M);
    c.chi_D = out;
    return c;
}

cplx constant_term_formula(int k, cplx a0, const LiftConstants& c, const DirichletCharacter& chi) {
    if (k < 1 || k % 2 == 0) throw Error(ErrorKind::Domain, "constant_term_formula: k must be odd and positive");
    if (k == 1) {
        if (a0 == 0.0) return 0.0;
        if (chi.is_principal())
            throw Error(ErrorKind::Domain, "constant_term_formula: k = 1 with principal character needs a+(0) = 0");
        return 4.0 * std::pow(double(c.N), 0.25) * a0 * dirichlet_L(1.0, chi).value;
    }
    if (a0 == 0.0) return 0.0;
    auto L = dirichlet_L(cplx(1.0 - c.lambda), c.chi_D);
    if (L.pole) throw Error(ErrorKind::Domain, "constant_term_formula: L(1 - lambda, chi_D) has a pole");
    return c.C * a0 / 2.0 * L.value;
}

// ---- cached lift ----

namespace {

bool is_zero_form(const WeakMaassForm& g) {
    if (!g.cosets.empty() || g.evaluator || g.coset_evaluator || !g.a_minus.empty() || g.a_minus0 != 0.0) return false;
    for (const auto& [n, c] : g.a_plus)
        if (c != 0.0) return false;
    return true;
}

}  // namespace

LiftFunction::LiftFunction(const WeakMaassForm& g, const ThetaKernel& tk, long D, const LiftOptions& opt)
    : tk_(&tk), D_(D) {
    if (D < 1) throw Error(ErrorKind::Domain, "LiftFunction: D must be positive");
    zero_ = is_zero_form(g);
    if (zero_) return;
    ctx_ = std::make_unique<LiftContext>(D == 1 ? g : dilate(g, D), tk, opt);
}

cplx LiftFunction::operator()(cplx w) {
    if (zero_) return 0.0;
    auto key = std::make_pair(w.real(), w.imag());
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    cplx v = (*ctx_)(w / double(D_)).value;
    cache_.emplace(key, v);
    return v;
}

LimitResult lift_limit_at_infinity(LiftFunction& phi, double eta_max, double tol) {
    if (!(eta_max > 0)) throw Error(ErrorKind::Domain, "lift_limit_at_infinity: eta_max must be positive");
    LimitResult r;
    for (int i = 0; i < 3; ++i) r.samples[i] = phi.on_axis(eta_max / double(4 >> i));
    cplx d1 = r.samples[1] - r.samples[0], d2 = r.samples[2] - r.samples[1];
    double scale = std::max(1.0, std::abs(r.samples[2]));
    r.value = r.samples[2];
    // Aitken step, only for a clean contraction
    if (std::abs(d1) > 1e-12 * scale) {
        cplx q = d2 / d1;
        if (std::fabs(q.imag()) < 1e-3 && q.real() > 0 && q.real() < 0.9) r.value += d2 * q / (1.0 - q);
    }
    r.change = std::abs(d2) / scale;
    r.converged = r.change <= tol;
    return r;
}

LimitResult lift_limit_at_infinity(const WeakMaassForm& g, const ThetaKernel& tk, long D, double eta_max, double tol,
                                   const LiftOptions& opt) {
    LiftFunction phi(g, tk, D, opt);
    return lift_limit_at_infinity(phi, eta_max, tol);
}

// ---- extra-term kernel ----

double extra_term_kernel(double s, int k) {
    const double a = 1.0 - k / 2.0;
    if (!(s > 0) || !(s + std::min(0.0, a) > 0))
        throw Error(ErrorKind::Domain, "extra_term_kernel: the integral diverges at y = 0 for this (s, k)");
    auto f = [&](double y) {
        if (y > 600.0) return 0.0;
        double g = upper_incomplete_gamma(a, 2 * y);
        return g == 0.0 ? 0.0 : std::exp(y) * g * std::pow(y, s - 1);
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    double e1 = 0.0, e2 = 0.0;
    double head = ts.integrate(f, 0.0, 1.0, 1e-13, &e1);
    double tail = es.integrate([&](double t) { return f(1.0 + t); }, 0.0, std::numeric_limits<double>::infinity(), 1e-13,
                               &e2);
    double total = head + tail;
    if (!std::isfinite(total) || e1 + e2 > 1e-8 * std::max(1.0, std::fabs(total)))
        throw Error(ErrorKind::Convergence, "extra_term_kernel: quadrature did not converge", e1 + e2);
    return total;
}

// ---- Mellin transform ----

namespace {

double simpson(const std::vector<double>& f, double h) {
    const size_t n = f.size() - 1;
    double s = f[0] + f[n];
    for (size_t i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f[i];
    return s * h / 3.0;
}

cplx simpson(const std::vector<cplx>& f, double h) {
    std::vector<double> re(f.size()), im(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        re[i] = f[i].real();
        im[i] = f[i].imag();
    }
    return {simpson(re, h), simpson(im, h)};
}

// Phi(i eta) = eta^{-2 lambda} Psi(i / (M eta)) with Psi ~ b + a y^{1 - 2 lambda} at infinity
std::vector<double> model_powers(int lambda) {
    if (lambda == 0) return {-1.0, 0.0};
    return {-1.0, -2.0 * lambda, 0.0};
}

cplx model_below(const std::vector<double>& eta, const std::vector<cplx>& val, int lambda, double s) {
    auto p = model_powers(lambda);
    const size_t m = p.size();
    Eigen::MatrixXd A(m, m);
    Eigen::VectorXcd b(m);
    for (size_t i = 0; i < m; ++i) {
        for (size_t j = 0; j < m; ++j) A(i, j) = std::pow(eta[i], p[j]);
        b(i) = val[i];
    }
    Eigen::VectorXcd c = A.cast<cplx>().fullPivLu().solve(b);
    cplx sum = 0.0;
    for (size_t j = 0; j < m; ++j) {
        if (!(s + p[j] > 0)) throw Error(ErrorKind::Domain, "mellin_lhs: no decay at eta = 0 for this s");
        sum += c(j) * std::pow(eta[0], s + p[j]) / (s + p[j]);
    }
    return sum;
}

}  // namespace

MellinResult mellin_lhs(LiftFunction& phi, cplx phi_inf, double s, const MellinGrid& grid) {
    if (!(grid.eta_lo > 0) || !(grid.eta_hi > grid.eta_lo) || grid.per_octave < 1)
        throw Error(ErrorKind::Domain, "mellin_lhs: bad grid");
    double oct = std::log2(grid.eta_hi / grid.eta_lo);
    long octaves = std::lround(oct);
    if (std::fabs(oct - double(octaves)) > 1e-9) throw Error(ErrorKind::Domain, "mellin_lhs: eta_hi / eta_lo must be 2^n");
    const long coarse_n = grid.per_octave * octaves;
    if (coarse_n % 2) throw Error(ErrorKind::Domain, "mellin_lhs: per_octave * octaves must be even");
    const long fine_n = 2 * coarse_n;
    const int lambda = phi.kernel().lambda();

    std::vector<double> eta(fine_n + 1);
    std::vector<cplx> diff(fine_n + 1), f(fine_n + 1);
    for (long j = 0; j <= fine_n; ++j) {
        eta[j] = grid.eta_lo * std::exp2(double(j) / double(2 * grid.per_octave));
        diff[j] = phi.on_axis(eta[j]) - phi_inf;
        f[j] = std::pow(eta[j], s) * diff[j];
    }
    MellinResult r;
    r.phi_inf = phi_inf;
    const double h = std::log(2.0) / double(2 * grid.per_octave);
    std::vector<cplx> fc;
    std::vector<double> ec;
    std::vector<cplx> dc;
    for (long j = 0; j <= fine_n; j += 2) {
        fc.push_back(f[j]);
        ec.push_back(eta[j]);
        dc.push_back(diff[j]);
    }
    r.below = model_below(eta, diff, lambda, s);
    r.value = simpson(f, h) + r.below;
    r.coarse = simpson(fc, 2 * h) + model_below(ec, dc, lambda, s);
    r.rel_change = std::abs(r.value - r.coarse) / std::max(std::abs(r.value), 1e-300);
    r.edge = std::abs(f.back());
    if (r.edge > 1e-6 * std::max(std::abs(r.value), 1e-300))
        throw Error(ErrorKind::Convergence, "mellin_lhs: integrand has not decayed at eta_hi", r.edge);
    return r;
}

MellinResult mellin_lhs(const WeakMaassForm& g, const ThetaKernel& tk, long D, double s, const MellinGrid& grid) {
    LiftFunction phi(g, tk, D);
    auto lim = lift_limit_at_infinity(phi, 4 * grid.eta_hi, 1e-6);
    if (!lim.converged) throw Error(ErrorKind::Convergence, "mellin_lhs: Phi(i infinity) not converged", lim.change);
    return mellin_lhs(phi, lim.value, s, grid);
}

SeriesValue mellin_rhs(const LiftConstants& c, int k, double s, const std::map<Rat, cplx>& a_plus) {
    if (k < 1 || k % 2 == 0) throw Error(ErrorKind::Domain, "mellin_rhs: k must be odd and positive");
    if (2 * c.lambda + 1 != k) throw Error(ErrorKind::Domain, "mellin_rhs: lambda must be (k - 1) / 2");
    SeriesValue r;
    double top = a_plus.empty() ? 0.0 : boost::rational_cast<double>(a_plus.rbegin()->first);
    const double beta = std::max(0, k - 2);
    double M = 0.0;
    cplx sum = 0.0;
    for (long n = 1; double(c.D) * n * n <= top; ++n) {
        auto it = a_plus.find(Rat(c.D * n * n));
        r.terms = n;
        if (it == a_plus.end() || it->second == 0.0) continue;
        sum += it->second * std::pow(double(n), -s);
        M = std::max(M, std::abs(it->second) / std::pow(double(n), beta));
    }
    if (sum == 0.0) return r;
    auto L = dirichlet_L(cplx(s + 1.0 - c.lambda), c.chi_D);
    if (L.pole) throw Error(ErrorKind::Domain, "mellin_rhs: L-function pole");
    cplx pre = c.C * std::pow(2 * pi, -s) * std::tgamma(s) * L.value;
    r.value = pre * sum;
    double n0 = double(std::max<long>(r.terms, 1));
    r.tail_bound = s > beta + 1 ? std::abs(pre) * M * std::pow(n0, beta + 1 - s) / (s - beta - 1)
                                : std::numeric_limits<double>::infinity();
    return r;
}

// ---- coefficient extraction and the Dirichlet relation ----

namespace {

double cond2(double a, double b, double c, double d) {
    double ca = std::max(std::fabs(a), std::fabs(c)), cb = std::max(std::fabs(b), std::fabs(d));
    if (ca == 0 || cb == 0) return std::numeric_limits<double>::infinity();
    Eigen::Matrix2d m;
    m << a / ca, b / cb, c / ca, d / cb;
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(m);
    auto sv = svd.singularValues();
    return sv(1) == 0 ? std::numeric_limits<double>::infinity() : sv(0) / sv(1);
}

std::pair<cplx, cplx> solve2(double a, double b, double c, double d, cplx y1, cplx y2) {
    double det = a * d - b * c;
    return {(d * y1 - b * y2) / det, (a * y2 - c * y1) / det};
}

}  // namespace

LiftCoefficients extract_lift_coefficients(LiftFunction& phi, int lambda, long nmax, double eta1, double eta2,
                                           int samples) {
    if (!(eta1 > 0) || !(eta2 > 0) || eta1 == eta2)
        throw Error(ErrorKind::Domain, "extract_lift_coefficients: need two distinct positive heights");
    if (2 * nmax >= samples) throw Error(ErrorKind::Domain, "extract_lift_coefficients: too few u samples for nmax");
    if (eta1 > eta2) std::swap(eta1, eta2);
    const double eta[2] = {eta1, eta2};
    std::vector<std::vector<cplx>> c(2, std::vector<cplx>(2 * nmax + 1));
    double scale = 0.0;
    for (int h = 0; h < 2; ++h) {
        std::vector<cplx> val(samples);
        for (int j = 0; j < samples; ++j) {
            val[j] = phi(cplx(double(j) / samples, eta[h]));
            scale = std::max(scale, std::abs(val[j]));
        }
        for (long n = -nmax; n <= nmax; ++n) {
            cplx acc = 0.0;
            for (int j = 0; j < samples; ++j) acc += val[j] * e2pi(-double(n * j % samples) / samples);
            c[h][n + nmax] = acc / double(samples);
        }
    }
    LiftCoefficients out;
    const double kw = 2.0 * lambda;
    for (long n = -nmax; n <= nmax; ++n) {
        cplx y1 = c[0][n + nmax], y2 = c[1][n + nmax];
        if (n > 0) {
            double p1 = std::exp(-2 * pi * n * eta1), p2 = std::exp(-2 * pi * n * eta2);
            cplx a = y1 / p1;
            out.A_plus[n] = a;
            if (std::abs(y2) > 1e-12 * scale && std::abs(a) > 0)
                out.consistency = std::max(out.consistency, std::abs(y2 / p2 - a) / std::abs(a));
            continue;
        }
        double a11, a12, a21, a22;
        if (n == 0) {
            a11 = a21 = 1.0;
            a12 = std::pow(eta1, 1 - kw);
            a22 = std::pow(eta2, 1 - kw);
        } else {
            double m = double(-n);
            a11 = std::exp(2 * pi * m * eta1);
            a21 = std::exp(2 * pi * m * eta2);
            a12 = upper_incomplete_gamma(1 - kw, 4 * pi * m * eta1) * a11;
            a22 = upper_incomplete_gamma(1 - kw, 4 * pi * m * eta2) * a21;
        }
        out.condition = std::max(out.condition, cond2(a11, a12, a21, a22));
        auto [ap, am] = solve2(a11, a12, a21, a22, y1, y2);
        out.A_plus[n] = ap;
        out.A_minus[n] = am;
    }
    return out;
}

RelationResult dirichlet_relation_check(const std::map<long, cplx>& A_plus, const std::map<long, cplx>& A_minus,
                                        const std::map<Rat, cplx>& a_plus, const LiftConstants& c, int k, double s,
                                        long nmax) {
    RelationResult r;
    auto get = [](const std::map<long, cplx>& m, long n) {
        auto it = m.find(n);
        return it == m.end() ? cplx(0.0) : it->second;
    };
    cplx plus = 0.0, minus = 0.0;
    for (long n = 1; n <= nmax; ++n) {
        plus += get(A_plus, n) * std::pow(double(n), -s);
        minus += get(A_minus, -n) * std::pow(double(n), -s);
    }
    if (minus != 0.0) r.kernel = extra_term_kernel(s, k) / std::tgamma(s);
    r.lhs = plus + r.kernel * minus;
    // b(n) = C sum_{d m = n} chi_D(d) d^{lambda - 1} a(D m^2)
    for (long n = 1; n <= nmax; ++n) {
        cplx b = 0.0;
        for (long d = 1; d <= n; ++d) {
            if (n % d) continue;
            long m = n / d;
            auto it = a_plus.find(Rat(c.D * m * m));
            if (it == a_plus.end()) continue;
            b += c.chi_D(d) * std::pow(double(d), c.lambda - 1.0) * it->second;
        }
        r.rhs += c.C * b * std::pow(double(n), -s);
    }
    r.residual = relative_residual(r.lhs, r.rhs);
    return r;
}

// ---- Eisenstein proportionality ----

ProportionalityResult proportionality(const std::vector<cplx>& num, const std::vector<cplx>& den, double zero_tol) {
    if (num.size() != den.size()) throw Error(ErrorKind::Domain, "proportionality: size mismatch");
    ProportionalityResult r;
    double top = 0.0;
    for (auto d : den) top = std::max(top, std::abs(d));
    std::vector<size_t> used;
    for (size_t i = 0; i < den.size(); ++i) {
        if (std::abs(den[i]) <= zero_tol * top || den[i] == 0.0) {
            r.skipped.push_back(i);
            continue;
        }
        r.ratios.push_back(num[i] / den[i]);
    }
    if (r.ratios.empty()) throw Error(ErrorKind::Domain, "proportionality: every denominator is near zero");
    for (auto q : r.ratios) r.C += q;
    r.C /= double(r.ratios.size());
    for (auto q : r.ratios) r.dispersion = std::max(r.dispersion, std::abs(q - r.C) / std::abs(r.C));
    return r;
}

ProportionalityResult eisenstein_proportionality(int k, double s, long N, const DirichletCharacter& chi,
                                                 const std::vector<cplx>& w_grid, const LiftOptions& opt,
                                                 double eisenstein_radius) {
    if (k < 3 || k % 2 == 0) throw Error(ErrorKind::Domain, "eisenstein_proportionality: k must be odd and >= 3");
    if (!(chi * chi).is_principal())
        throw Error(ErrorKind::Domain, "eisenstein_proportionality: chi^2 must be principal");
    const int lambda = (k - 1) / 2;
    EisensteinOptions eo;
    eo.radius = eisenstein_radius;
    auto E = eisenstein_form(s, k, N, chi, eo);
    ThetaKernel tk(N, k, lambda, chi);
    LiftContext ctx(E, tk, opt);
    std::vector<cplx> num, den;
    for (cplx w : w_grid) {
        num.push_back(ctx(w).value);
        den.push_back(eisenstein_integral(w, 2 * s, 2 * lambda, 2 * N, DirichletCharacter::principal(2 * N)));
    }
    auto r = proportionality(num, den);
    r.num = std::move(num);
    r.den = std::move(den);
    return r;
}

BoundednessResult boundedness_probe(LiftFunction& phi, double lo, double hi, int probes) {
    if (!(lo > 0) || !(hi > lo) || probes < 2) throw Error(ErrorKind::Domain, "boundedness_probe: bad range");
    BoundednessResult r;
    double mn = std::numeric_limits<double>::infinity();
    for (int i = 0; i < probes; ++i) {
        double eta = lo * std::pow(hi / lo, double(i) / (probes - 1));
        double a = std::abs(phi.on_axis(eta));
        r.eta.push_back(eta);
        r.max_abs = std::max(r.max_abs, a);
        mn = std::min(mn, a);
    }
    r.spread = r.max_abs - mn;
    return r;
}

}  // namespace thetalift
