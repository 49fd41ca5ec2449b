#include "thetalift/forms.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace thetalift {

std::string to_string(GrowthTag t) {
    switch (t) {
        case GrowthTag::WMF: return "WMF";
        case GrowthTag::WMFStar: return "WMF*";
        case GrowthTag::H: return "H";
        case GrowthTag::HStar: return "H*";
        case GrowthTag::HPlus: return "H+";
        case GrowthTag::Maass: return "Maass";
        case GrowthTag::Inconclusive: return "inconclusive";
    }
    return "?";
}

GrowthTag growth_tag_from_string(const std::string& s) {
    for (GrowthTag t : {GrowthTag::WMF, GrowthTag::WMFStar, GrowthTag::H, GrowthTag::HStar, GrowthTag::HPlus,
                        GrowthTag::Maass})
        if (to_string(t) == s) return t;
    throw Error(ErrorKind::Config, "unknown growth tag '" + s + "'");
}

// ---- profiles ----

double whittaker_scaled(double k, double mu, double x) {
    if (!(x > 0)) throw Error(ErrorKind::Domain, "whittaker: x must be positive");
    const double a = mu - k + 0.5, c = 2 * mu - a;
    if (!(a > 0)) throw Error(ErrorKind::Domain, "whittaker: integral representation needs mu - k + 1/2 > 0");
    if (std::fabs(c) < 1e-15) return 1.0;
    boost::math::quadrature::exp_sinh<double> q;
    const double lg = std::lgamma(a);
    auto f = [&](double t) {
        if (t <= 0) return 0.0;
        return std::exp(-t + (a - 1) * std::log(t) + c * std::log1p(t / x) - lg);
    };
    return q.integrate(f, 1e-14);
}

double whittaker_W(double k, double mu, double x) { return whittaker_scaled(k, mu, x) * std::pow(x, k) * std::exp(-x / 2); }

double profile_value(Profile kind, double n, double kappa, double param, double v) {
    switch (kind) {
        case Profile::Holomorphic: return std::exp(-2 * pi * n * v);
        case Profile::Harmonic: {
            if (n >= 0) throw Error(ErrorKind::Domain, "harmonic profile needs n < 0");
            double x = 4 * pi * std::fabs(n) * v;
            // Gamma(1-k, x) e^{x/2}, computed in scaled form for large x
            if (x > 600) return std::pow(x, -kappa) * std::exp(-x / 2) * (1 - kappa / x);
            return upper_incomplete_gamma(1 - kappa, x) * std::exp(-2 * pi * n * v);
        }
        case Profile::Power: return std::pow(v, param);
        case Profile::Whittaker: {
            if (n == 0) throw Error(ErrorKind::Domain, "Whittaker profile needs n != 0");
            double x = 4 * pi * std::fabs(n) * v;
            if (x > 1400) return 0.0;
            double kk = (n > 0 ? 0.5 : -0.5) * kappa, mu = param + kappa / 2 - 0.5;
            return std::pow(v, -kappa / 2) * whittaker_W(kk, mu, x);
        }
    }
    return 0.0;
}

namespace {
double profile_derivative(const FourierTerm& t, double kappa, double v) {
    double n = to_double(t.n);
    double phi = profile_value(t.kind, n, kappa, t.param, v);
    switch (t.kind) {
        case Profile::Holomorphic: return -2 * pi * n * phi;
        case Profile::Power: return t.param * std::pow(v, t.param - 1);
        case Profile::Harmonic: {
            double x = 4 * pi * std::fabs(n) * v;
            double dg = -std::pow(x, -kappa) * std::exp(-x) * 4 * pi * std::fabs(n);
            return dg * std::exp(-2 * pi * n * v) - 2 * pi * n * phi;
        }
        case Profile::Whittaker: {
            double h = 1e-4 * v;
            return (8 * (profile_value(t.kind, n, kappa, t.param, v + h) -
                         profile_value(t.kind, n, kappa, t.param, v - h)) -
                    (profile_value(t.kind, n, kappa, t.param, v + 2 * h) -
                     profile_value(t.kind, n, kappa, t.param, v - 2 * h))) /
                   (12 * h);
        }
    }
    return 0.0;
}
}  // namespace

cplx FourierExpansion::eval(cplx z) const {
    if (!(z.imag() > 0)) throw Error(ErrorKind::Domain, "eval: z must lie in the upper half-plane");
    cplx s = 0.0;
    for (const auto& t : terms) {
        double n = to_double(t.n);
        double ph = n * z.real();
        s += t.coef * profile_value(t.kind, n, weight, t.param, z.imag()) * e2pi(ph - std::floor(ph));
    }
    return s;
}

std::vector<const FourierTerm*> FourierExpansion::at(const Rat& n) const {
    std::vector<const FourierTerm*> r;
    for (const auto& t : terms)
        if (t.n == n) r.push_back(&t);
    return r;
}

Rat FourierExpansion::min_holomorphic_n() const {
    Rat m(0);
    for (const auto& t : terms)
        if (t.kind == Profile::Holomorphic && t.n < m && t.coef != 0.0) m = t.n;
    return m;
}

// ---- cosets ----

CosetSystem::CosetSystem(long M) : M_(M) {
    if (M < 1) throw Error(ErrorKind::Domain, "coset_reps: level must be positive");
    std::map<std::pair<long, long>, bool> seen;
    for (long c = 0; c < M; ++c)
        for (long d = 0; d < M; ++d) {
            if (std::gcd(std::gcd(c, d), M) != 1) continue;
            auto key = canonical(c, d);
            if (seen.count(key)) continue;
            seen[key] = true;
            Mat2i g;
            if (key.first == 0) {
                g = Mat2i{1, 0, 0, 1};
            } else {
                long C = key.first;
                long D = key.second;
                while (std::gcd(C, D) != 1) D += M;
                // centre D in (-M/2, M/2] when still coprime
                if (D > M / 2 && std::gcd(C, D - M) == 1) D -= M;
                // a D - b C = 1
                long r0 = D, r1 = C, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
                while (r1 != 0) {
                    long q = r0 / r1, tmp = r0 - q * r1;
                    r0 = r1;
                    r1 = tmp;
                    tmp = s0 - q * s1;
                    s0 = s1;
                    s1 = tmp;
                    tmp = t0 - q * t1;
                    t0 = t1;
                    t1 = tmp;
                }
                long a = s0 * r0, b = -t0 * r0;
                g = Mat2i{a, b, C, D};
            }
            lookup_[key] = reps_.size();
            reps_.push_back(g);
        }
    if (long(reps_.size()) != index_formula(M)) throw Error(ErrorKind::Domain, "coset_reps: count mismatch");
    table_.assign(size_t(M * M), size_t(-1));
    for (long c = 0; c < M; ++c)
        for (long d = 0; d < M; ++d)
            if (std::gcd(std::gcd(c, d), M) == 1) table_[size_t(c * M + d)] = lookup_.at(canonical(c, d));
}

std::pair<long, long> CosetSystem::canonical(long c, long d) const {
    c = ((c % M_) + M_) % M_;
    d = ((d % M_) + M_) % M_;
    std::pair<long, long> best{M_, M_};
    for (long u = 1; u <= M_; ++u) {
        if (std::gcd(u, M_) != 1) continue;
        std::pair<long, long> p{(c * u) % M_, (d * u) % M_};
        if (M_ == 1) p = {0, 0};
        if (p < best) best = p;
    }
    return best;
}

size_t CosetSystem::index_of_row(long c, long d) const {
    c = ((c % M_) + M_) % M_;
    d = ((d % M_) + M_) % M_;
    size_t i = table_[size_t(c * M_ + d)];
    if (i == size_t(-1)) throw Error(ErrorKind::Domain, "coset: row not primitive modulo the level");
    return i;
}

size_t CosetSystem::index_of(const Mat2i& g) const { return index_of_row(g.c, g.d); }

long CosetSystem::index_formula(long M) {
    long r = M, m = M;
    for (long p = 2; p * p <= m; ++p)
        if (m % p == 0) {
            r = r / p * (p + 1);
            while (m % p == 0) m /= p;
        }
    if (m > 1) r = r / m * (m + 1);
    return r;
}

// ---- forms ----

FourierExpansion WeakMaassForm::expansion() const {
    FourierExpansion e;
    e.weight = weight;
    const bool maass = tag == GrowthTag::Maass;
    for (const auto& [n, c] : a_plus) {
        if (c == 0.0) continue;
        if (maass)
            e.terms.push_back({n, n == Rat(0) ? Profile::Power : Profile::Whittaker, c, eigen_s});
        else
            e.terms.push_back({n, Profile::Holomorphic, c, 0.0});
    }
    for (const auto& [n, c] : a_minus)
        if (c != 0.0) e.terms.push_back({n, Profile::Harmonic, c, 0.0});
    if (a_minus0 != 0.0) e.terms.push_back({Rat(0), Profile::Power, a_minus0, 1.0 - weight - eigen_s});
    return e;
}

void WeakMaassForm::validate() const {
    if (level < 1) throw Error(ErrorKind::Config, "form: level must be positive");
    if (std::fabs(2 * weight - std::round(2 * weight)) > 1e-12)
        throw Error(ErrorKind::Config, "form: weight must be integral or half-integral");
    if (level % character.modulus() != 0) throw Error(ErrorKind::Config, "form: character modulus must divide the level");
    for (const auto& [n, c] : a_minus)
        if (!(n < Rat(0))) throw Error(ErrorKind::Config, "form: nonholomorphic coefficients need n < 0");
    check_tag_invariants(*this);
}

void check_tag_invariants(const WeakMaassForm& g) {
    if (g.tag == GrowthTag::HPlus && g.a_minus0 != 0.0)
        throw Error(ErrorKind::Domain, "H+ forms have a^-(0) = 0");
    if (g.tag == GrowthTag::Maass) return;
    if (g.tag == GrowthTag::WMFStar || g.tag == GrowthTag::HPlus || g.tag == GrowthTag::HStar) {
        // finitely many n < 0 (always true for finite data) and a^- supported on n < 0
        for (const auto& [n, c] : g.a_minus)
            if (!(n < Rat(0)) && c != 0.0) throw Error(ErrorKind::Domain, "a^- must be supported on n < 0");
    }
}

cplx eval_form(const WeakMaassForm& g, cplx z) { return g.expansion().eval(z); }

Evaluator slash(const Evaluator& f, const Mat2i& g, double weight) {
    if (g.det() != 1) throw Error(ErrorKind::Domain, "slash: det != 1");
    const bool integral = std::fabs(weight - std::round(weight)) < 1e-12;
    if (!integral && g.c % 4 != 0) throw Error(ErrorKind::Domain, "slash: half-integral weight needs gamma in Gamma_0(4)");
    return [f, g, weight, integral](cplx z) {
        cplx gz = mobius(g, z);
        if (integral) return std::pow(double(g.c) * z + double(g.d), -weight) * f(gz);
        return std::pow(theta_multiplier(g, z), -2 * weight) * f(gz);
    };
}

Evaluator slash_principal(const Evaluator& f, const Mat2i& g, double weight) {
    if (g.det() != 1) throw Error(ErrorKind::Domain, "slash: det != 1");
    return [f, g, weight](cplx z) { return std::pow(double(g.c) * z + double(g.d), -weight) * f(mobius(g, z)); };
}

FDResult maass_operator(const Evaluator& f, MaassOp op, double k, cplx z, double h) {
    auto once = [&](double hh) {
        cplx f0 = f(z), fp = f(z + hh), fm = f(z - hh), fpi = f(z + I * hh), fmi = f(z - I * hh);
        cplx fu = (fp - fm) / (2 * hh), fv = (fpi - fmi) / (2 * hh);
        cplx fuu = (fp - 2.0 * f0 + fm) / (hh * hh), fvv = (fpi - 2.0 * f0 + fmi) / (hh * hh);
        double v = z.imag();
        switch (op) {
            case MaassOp::R: return I * (fu - I * fv) + k / v * f0;
            case MaassOp::L: return I * v * v * (fu + I * fv);
            case MaassOp::Delta: return -v * v * (fuu + fvv) + I * k * v * (fu + I * fv);
            case MaassOp::Xi: return 2.0 * I * std::pow(v, k) * std::conj((fu + I * fv) / 2.0);
        }
        return cplx(0.0);
    };
    cplx a = once(h), b = once(h / 2);
    return {(4.0 * b - a) / 3.0, std::abs(a - b)};
}

cplx maass_operator_exact(const FourierExpansion& f, MaassOp op, cplx z, double eigen_s) {
    const double k = f.weight, v = z.imag();
    cplx s = 0.0;
    for (const auto& t : f.terms) {
        double n = to_double(t.n);
        double phi = profile_value(t.kind, n, k, t.param, v);
        double ph = n * z.real();
        cplx e = e2pi(ph - std::floor(ph));
        switch (op) {
            case MaassOp::Delta: {
                double ev = 0.0;
                if (t.kind == Profile::Power) ev = -t.param * (t.param - 1 + k);
                if (t.kind == Profile::Whittaker) ev = -eigen_s * (eigen_s - 1 + k);
                s += ev * t.coef * phi * e;
                break;
            }
            case MaassOp::R: {
                double dphi = profile_derivative(t, k, v);
                s += t.coef * (-2 * pi * n * phi + dphi + k * phi / v) * e;
                break;
            }
            case MaassOp::L: {
                double dphi = profile_derivative(t, k, v);
                s += t.coef * v * v * (-2 * pi * n * phi - dphi) * e;
                break;
            }
            case MaassOp::Xi: {
                if (t.kind == Profile::Holomorphic) break;
                double dphi = profile_derivative(t, k, v);
                s += std::conj(t.coef) * std::pow(v, k) * (2 * pi * n * phi + dphi) * std::conj(e);
                break;
            }
        }
    }
    return s;
}

// ---- theta models ----

cplx jacobi_theta(cplx z, long D) {
    if (!(z.imag() > 0)) throw Error(ErrorKind::Domain, "theta: z must lie in the upper half-plane");
    const double v = z.imag() * double(D);
    long nmax = long(std::sqrt(40.0 / (2 * pi * v))) + 2;
    cplx s = 1.0;
    for (long n = 1; n <= nmax; ++n) {
        double ph = double(D) * double(n * n) * z.real();
        s += 2.0 * std::exp(-2 * pi * double(n * n) * v) * e2pi(ph - std::floor(ph));
    }
    return s;
}

WeakMaassForm theta_model(long D, long N, long terms) {
    if (D < 1 || N % D != 0) throw Error(ErrorKind::Config, "theta_model: D must divide N");
    WeakMaassForm g;
    g.weight = 0.5;
    g.level = 4 * N;
    g.character = DirichletCharacter::kronecker(D, 4 * D).lift(4 * N);
    g.tag = GrowthTag::HPlus;
    g.a_plus[Rat(0)] = 1.0;
    for (long n = 1; D * n * n <= terms; ++n) g.a_plus[Rat(D * n * n)] = 2.0;
    g.evaluator = [D](cplx z) { return jacobi_theta(z, D); };
    g.name = D == 1 ? "theta" : "theta(" + std::to_string(D) + "z)";
    return g;
}

WeakMaassForm theta_cube_model(long N, long terms) {
    WeakMaassForm g;
    g.weight = 1.5;
    g.level = 4 * N;
    g.character = DirichletCharacter::principal(4 * N);
    g.tag = GrowthTag::HPlus;
    std::vector<double> r(terms + 1, 0.0);
    long m = long(std::sqrt(double(terms))) + 1;
    for (long a = -m; a <= m; ++a)
        for (long b = -m; b <= m; ++b) {
            long ab = a * a + b * b;
            if (ab > terms) continue;
            for (long c = -m; c <= m; ++c) {
                long t = ab + c * c;
                if (t <= terms) r[t] += 1.0;
            }
        }
    for (long n = 0; n <= terms; ++n)
        if (r[n] != 0.0) g.a_plus[Rat(n)] = r[n];
    g.evaluator = [](cplx z) {
        cplx t = jacobi_theta(z);
        return t * t * t;
    };
    g.name = "theta^3";
    return g;
}

WeakMaassForm theta_odd_model(long N, long terms) {
    if (N % 4 != 0) throw Error(ErrorKind::Config, "theta_odd_model: level 4N needs 4 | N");
    WeakMaassForm g;
    g.weight = 0.5;
    g.level = 4 * N;
    g.character = DirichletCharacter::principal(4 * N);
    g.tag = GrowthTag::HPlus;
    for (long n = 1; n * n <= terms; n += 2) g.a_plus[Rat(n * n)] = 2.0;
    g.evaluator = [](cplx z) { return jacobi_theta(z) - jacobi_theta(z, 4); };
    g.name = "theta-theta(4z)";
    return g;
}

WeakMaassForm dilate(const WeakMaassForm& g, long D) {
    if (D < 1) throw Error(ErrorKind::Domain, "dilate: D must be positive");
    for (long p = 2; p * p <= D; ++p)
        if (D % (p * p) == 0) throw Error(ErrorKind::Domain, "dilate: D must be square-free");
    if (D == 1) return g;
    WeakMaassForm h = g;
    h.level = g.level * D;
    h.character = g.character.lift(h.level) * DirichletCharacter::kronecker(D, 4 * D).lift(h.level);
    h.a_plus.clear();
    h.a_minus.clear();
    h.cosets.clear();
    h.coset_evaluator = nullptr;
    const bool maass = g.tag == GrowthTag::Maass;
    const double dd = double(D);
    for (const auto& [n, c] : g.a_plus) {
        double scale = 1.0;
        if (maass) scale = n == Rat(0) ? std::pow(dd, g.eigen_s) : std::pow(dd, -g.weight / 2);
        h.a_plus[n * D] = c * scale;
    }
    for (const auto& [n, c] : g.a_minus) h.a_minus[n * D] = c;
    h.a_minus0 = g.a_minus0 * std::pow(dd, 1.0 - g.weight - g.eigen_s);
    if (g.evaluator) {
        auto f = g.evaluator;
        h.evaluator = [f, dd](cplx z) { return f(dd * z); };
    }
    h.name = g.name + "_D" + std::to_string(D);
    return h;
}

// ---- coset expansions ----

void attach_coset_expansions(WeakMaassForm& g, const ExtractOptions& opt) {
    if (!g.evaluator && !g.coset_evaluator) throw Error(ErrorKind::MissingData, "form has no global evaluator");
    CosetSystem cs(g.level);
    const long P = g.level;
    int S = opt.samples;
    if (S <= 0) {
        S = 16;
        while (S < 2.0 * P * opt.nmax) S *= 2;
    }
    const bool maass = g.tag == GrowthTag::Maass;
    const bool harmonic = !maass && (!g.a_minus.empty() || g.a_minus0 != 0.0);
    const bool two = maass || harmonic;
    const double kappa = g.weight;

    auto sample = [&](double v) {
        std::vector<std::vector<cplx>> vals(cs.size(), std::vector<cplx>(S));
        std::vector<Evaluator> slashed;
        if (!g.coset_evaluator)
            for (const auto& a : cs.reps()) slashed.push_back(slash_principal(g.evaluator, a, kappa));
#pragma omp parallel for schedule(dynamic)
        for (int j = 0; j < S; ++j) {
            cplx z(double(P) * j / S, v);
            if (g.coset_evaluator) {
                auto r = g.coset_evaluator(z);
                for (size_t i = 0; i < cs.size(); ++i) vals[i][j] = r[i];
            } else {
                for (size_t i = 0; i < cs.size(); ++i) vals[i][j] = slashed[i](z);
            }
        }
        // DFT: c_f = (1/S) sum_j val_j e(-f j / S)
        std::vector<std::map<long, cplx>> out(cs.size());
        std::vector<cplx> tw(S);
        for (int j = 0; j < S; ++j) tw[j] = e2pi(-double(j) / S);
        for (size_t i = 0; i < cs.size(); ++i)
            for (long f = -S / 2 + 1; f <= S / 2; ++f) {
                cplx c = 0.0;
                long ff = ((f % S) + S) % S;
                for (int j = 0; j < S; ++j) c += vals[i][j] * tw[(ff * j) % S];
                out[i][f] = c / double(S);
            }
        return out;
    };

    auto c0 = sample(opt.v0);
    std::vector<std::map<long, cplx>> c1;
    if (two) c1 = sample(opt.v1);

    g.cosets.assign(cs.size(), FourierExpansion{});
    for (size_t i = 0; i < cs.size(); ++i) {
        auto& ex = g.cosets[i];
        ex.weight = kappa;
        double mx = 0.0;
        for (const auto& [f, c] : c0[i]) mx = std::max(mx, std::abs(c));
        for (const auto& [f, c] : c0[i]) {
            const bool keep0 = std::abs(c) > opt.rel_tol * mx;
            const bool keep1 = two && std::abs(c1[i][f]) > opt.rel_tol * mx;
            if (!keep0 && !keep1) continue;
            Rat n(f, P);
            double nd = to_double(n);
            std::vector<std::pair<Profile, double>> prof;
            if (maass) {
                if (f == 0)
                    prof = {{Profile::Power, g.eigen_s}, {Profile::Power, 1.0 - kappa - g.eigen_s}};
                else
                    prof = {{Profile::Whittaker, g.eigen_s}};
            } else if (harmonic) {
                if (f == 0)
                    prof = {{Profile::Power, 0.0}, {Profile::Power, 1.0 - kappa}};
                else if (f < 0)
                    prof = {{Profile::Holomorphic, 0.0}, {Profile::Harmonic, 0.0}};
                else
                    prof = {{Profile::Holomorphic, 0.0}};
            } else {
                prof = {{Profile::Holomorphic, 0.0}};
            }
            if (prof.size() == 1) {
                double p0 = profile_value(prof[0].first, nd, kappa, prof[0].second, opt.v0);
                if (p0 == 0.0 || !keep0) continue;
                ex.terms.push_back({n, prof[0].first, c / p0, prof[0].second});
            } else {
                double a00 = profile_value(prof[0].first, nd, kappa, prof[0].second, opt.v0);
                double a01 = profile_value(prof[1].first, nd, kappa, prof[1].second, opt.v0);
                double a10 = profile_value(prof[0].first, nd, kappa, prof[0].second, opt.v1);
                double a11 = profile_value(prof[1].first, nd, kappa, prof[1].second, opt.v1);
                double det = a00 * a11 - a01 * a10;
                if (std::fabs(det) < 1e-300) continue;
                cplx x0 = (c * a11 - c1[i][f] * a01) / det;
                cplx x1 = (a00 * c1[i][f] - a10 * c) / det;
                if (std::abs(x0) * std::fabs(a00) > opt.rel_tol * mx) ex.terms.push_back({n, prof[0].first, x0, prof[0].second});
                if (std::abs(x1) * std::fabs(a01) > opt.rel_tol * mx) ex.terms.push_back({n, prof[1].first, x1, prof[1].second});
            }
        }
    }

    // reconstruction check away from the sampling grid
    const cplx probe(0.377 * double(P), 1.05);
    std::vector<cplx> direct;
    if (g.coset_evaluator)
        direct = g.coset_evaluator(probe);
    else
        for (const auto& a : cs.reps()) direct.push_back(slash_principal(g.evaluator, a, kappa)(probe));
    double worst = 0.0;
    for (size_t i = 0; i < cs.size(); ++i) {
        double scale = std::max(1.0, std::abs(direct[i]));
        worst = std::max(worst, std::abs(g.cosets[i].eval(probe) - direct[i]) / scale);
    }
    if (worst > 1e-7)
        throw Error(ErrorKind::Convergence, "coset expansion does not reproduce the form (exponents off the sampling lattice?)",
                    worst);

    if (g.a_plus.empty() && g.a_minus.empty() && g.a_minus0 == 0.0) {
        for (const auto& t : g.cosets[0].terms) {
            if (t.kind == Profile::Harmonic)
                g.a_minus[t.n] += t.coef;
            else if (t.kind == Profile::Power && std::fabs(t.param - (1.0 - kappa - g.eigen_s)) < 1e-12 &&
                     (maass || harmonic))
                g.a_minus0 += t.coef;
            else
                g.a_plus[t.n] += t.coef;
        }
    }
}

// ---- growth ----

GrowthReport growth_classify_samples(const std::vector<double>& v, const std::vector<std::vector<double>>& series) {
    GrowthReport r{GrowthTag::WMFStar, -1e300, true};
    if (v.size() < 3) return {GrowthTag::Inconclusive, 0.0, false};
    for (const auto& y : series) {
        if (y.size() != v.size()) throw Error(ErrorKind::Config, "growth: sample length mismatch");
        bool all_zero = true;
        for (double t : y) all_zero = all_zero && t == 0.0;
        if (all_zero) continue;
        for (double t : y)
            if (!(t > 0) || !std::isfinite(t)) return {GrowthTag::Inconclusive, 0.0, false};
        // least squares slope of log y against log v, first and second half separately
        auto fit = [&](size_t lo, size_t hi) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            double m = double(hi - lo);
            for (size_t i = lo; i < hi; ++i) {
                double x = std::log(v[i]), yy = std::log(y[i]);
                sx += x;
                sy += yy;
                sxx += x * x;
                sxy += x * yy;
            }
            return (m * sxy - sx * sy) / (m * sxx - sx * sx);
        };
        size_t h = v.size() / 2;
        double s_all = fit(0, v.size());
        double s1 = fit(0, std::max<size_t>(h, 2)), s2 = fit(std::min(h, v.size() - 2), v.size());
        r.max_slope = std::max(r.max_slope, s_all);
        // exponential growth shows up as a slope that keeps increasing
        if (s2 - s1 > 0.5 + 0.1 * std::fabs(s1)) r.tag = GrowthTag::WMF;
    }
    if (r.max_slope == -1e300) r.max_slope = 0.0;
    return r;
}

double profile_times_growth(Profile kind, double n, double kappa, double param, double v) {
    switch (kind) {
        case Profile::Holomorphic: return 1.0;
        case Profile::Power: return std::pow(v, param);
        case Profile::Harmonic: return upper_incomplete_gamma(1 - kappa, 4 * pi * std::fabs(n) * v);
        case Profile::Whittaker: {
            double x = 4 * pi * std::fabs(n) * v;
            double kk = (n > 0 ? 0.5 : -0.5) * kappa, mu = param + kappa / 2 - 0.5;
            double r = std::pow(v, -kappa / 2) * whittaker_scaled(kk, mu, x) * std::pow(x, kk);
            return n > 0 ? r : r * std::exp(-x);
        }
    }
    return 0.0;
}

GrowthReport growth_classify(const WeakMaassForm& g, const std::vector<double>& probe_v) {
    FourierExpansion e = g.expansion();
    std::map<Rat, std::vector<double>> per_n;
    for (const auto& t : e.terms) {
        auto& y = per_n[t.n];
        y.resize(probe_v.size(), 0.0);
    }
    std::map<Rat, std::vector<cplx>> acc;
    for (const auto& t : e.terms) {
        auto& a = acc[t.n];
        a.resize(probe_v.size(), 0.0);
        double n = to_double(t.n);
        for (size_t i = 0; i < probe_v.size(); ++i)
            a[i] += t.coef * profile_times_growth(t.kind, n, e.weight, t.param, probe_v[i]);
    }
    std::vector<std::vector<double>> series;
    for (const auto& [n, a] : acc) {
        std::vector<double> y;
        for (cplx c : a) y.push_back(std::abs(c));
        series.push_back(y);
    }
    GrowthReport r = growth_classify_samples(probe_v, series);
    if (!r.conclusive) return r;
    if (g.tag == GrowthTag::Maass) {
        r.tag = GrowthTag::Maass;
        return r;
    }
    if (r.tag == GrowthTag::WMFStar) {
        bool harm = !g.a_minus.empty() || g.a_minus0 != 0.0;
        if (harm) r.tag = g.a_minus0 != 0.0 ? GrowthTag::HStar : GrowthTag::HPlus;
    }
    return r;
}

// ---- file format ----

namespace {
Rat parse_rat(const std::string& s) {
    auto p = s.find('/');
    if (p == std::string::npos) return Rat(std::stol(s));
    return Rat(std::stol(s.substr(0, p)), std::stol(s.substr(p + 1)));
}
std::string rat_str(const Rat& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}
}  // namespace

WeakMaassForm read_q_expansion(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::MissingData, "cannot open " + path);
    std::string line;
    WeakMaassForm g;
    bool header = false;
    int section = 0;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ss(line);
        std::string first;
        if (!(ss >> first)) continue;
        if (!header) {
            std::string chr, tag;
            double s;
            g.weight = std::stod(first);
            if (!(ss >> g.level >> chr >> s >> tag))
                throw Error(ErrorKind::Config, path + ":" + std::to_string(lineno) + ": bad header");
            g.eigen_s = s;
            g.tag = growth_tag_from_string(tag);
            if (chr == "principal" || chr == "1")
                g.character = DirichletCharacter::principal(g.level);
            else if (chr.rfind("kronecker:", 0) == 0)
                g.character = DirichletCharacter::kronecker(std::stol(chr.substr(10)), g.level);
            else
                throw Error(ErrorKind::Config, path + ": unknown character '" + chr + "'");
            header = true;
            continue;
        }
        if (first == "[holomorphic]") {
            section = 1;
            continue;
        }
        if (first == "[nonholomorphic]") {
            section = 2;
            continue;
        }
        double re, im = 0.0;
        if (!(ss >> re)) throw Error(ErrorKind::Config, path + ":" + std::to_string(lineno) + ": missing coefficient");
        ss >> im;
        Rat n = parse_rat(first);
        if (section == 1)
            g.a_plus[n] += cplx(re, im);
        else if (section == 2) {
            if (n == Rat(0))
                g.a_minus0 += cplx(re, im);
            else
                g.a_minus[n] += cplx(re, im);
        } else
            throw Error(ErrorKind::Config, path + ": coefficient outside a section");
    }
    if (!header) throw Error(ErrorKind::Config, path + ": empty file");
    g.validate();
    g.name = path;
    return g;
}

void write_q_expansion(const WeakMaassForm& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::MissingData, "cannot write " + path);
    out.precision(17);
    std::string chr;
    if (g.character.is_principal()) chr = "principal";
    for (long D = -4 * g.level; chr.empty() && D <= 4 * g.level; ++D) {
        if (D == 0) continue;
        DirichletCharacter k = DirichletCharacter::principal(1);
        try {
            k = DirichletCharacter::kronecker(D, g.level);
        } catch (const Error&) {
            continue;
        }
        bool same = true;
        for (long n = 0; n < g.level; ++n) same = same && std::abs(k(n) - g.character(n)) < 1e-12;
        if (same) chr = "kronecker:" + std::to_string(D);
    }
    if (chr.empty()) throw Error(ErrorKind::Config, "write_q_expansion: character is not a Kronecker symbol");
    out << g.weight << ' ' << g.level << ' ' << chr << ' '
        << g.eigen_s << ' ' << to_string(g.tag) << "\n[holomorphic]\n";
    for (const auto& [n, c] : g.a_plus) out << rat_str(n) << ' ' << c.real() << ' ' << c.imag() << '\n';
    out << "[nonholomorphic]\n";
    if (g.a_minus0 != 0.0) out << "0 " << g.a_minus0.real() << ' ' << g.a_minus0.imag() << '\n';
    for (const auto& [n, c] : g.a_minus) out << rat_str(n) << ' ' << c.real() << ' ' << c.imag() << '\n';
}

}  // namespace thetalift
