#include "thetalift/lift.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

namespace thetalift {

namespace {

using Rule = std::vector<std::pair<double, double>>;  // nodes and weights on [-1, 1]

template <unsigned n>
Rule make_rule() {
    using G = boost::math::quadrature::gauss<double, n>;
    Rule r;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) {
            r.push_back({0.0, w[i]});
        } else {
            r.push_back({x[i], w[i]});
            r.push_back({-x[i], w[i]});
        }
    }
    return r;
}

const Rule& rule(int n) {
    static const Rule r16 = make_rule<16>(), r24 = make_rule<24>(), r32 = make_rule<32>(), r48 = make_rule<48>(),
                      r64 = make_rule<64>();
    if (n <= 16) return r16;
    if (n <= 24) return r24;
    if (n <= 32) return r32;
    if (n <= 48) return r48;
    return r64;
}

int next_size(int n) {
    if (n < 16) return 16;
    if (n < 24) return 24;
    if (n < 32) return 32;
    if (n < 48) return 48;
    return 64;
}

// tensor rule on {|u| <= 1/2, sqrt(1 - u^2) <= v <= 1} for du dv / v^2
void lower_nodes(int n, std::vector<cplx>& z, std::vector<double>& wt) {
    const Rule& r = rule(n);
    z.clear();
    wt.clear();
    for (const auto& [xu, wu] : r) {
        double u = 0.5 * xu;
        double v0 = std::sqrt(1 - u * u), h = 1 - v0;
        for (const auto& [xv, wv] : r) {
            double v = v0 + 0.5 * h * (xv + 1);
            z.push_back({u, v});
            wt.push_back(0.5 * wu * 0.5 * h * wv / (v * v));
        }
    }
}

cplx lower_rule(const std::function<cplx(cplx)>& G, int n) {
    std::vector<cplx> z;
    std::vector<double> wt;
    lower_nodes(n, z, wt);
    std::vector<cplx> val(z.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < long(z.size()); ++i) val[i] = G(z[i]);
    cplx s = 0.0;
    for (size_t i = 0; i < z.size(); ++i) s += wt[i] * val[i];
    return s;
}

std::pair<cplx, double> lower_part(const std::function<cplx(int)>& at, const QuadOptions& q) {
    int n = next_size(q.min_nodes - 1);
    cplx a = at(n);
    while (true) {
        int m = next_size(n);
        if (m == n) return {a, std::numeric_limits<double>::infinity()};
        cplx b = at(m);
        double err = std::abs(b - a);
        if (err <= q.tol || m >= q.max_nodes) return {b, err};
        a = b;
        n = m;
    }
}

// Gauss-Legendre over [a, b]
template <class F>
cplx panel(F&& f, double a, double b, int n = 16) {
    cplx s = 0.0;
    for (const auto& [x, w] : rule(n)) s += w * f(0.5 * (a + b) + 0.5 * (b - a) * x);
    return 0.5 * (b - a) * s;
}

cplx u_average(const std::function<cplx(cplx)>& F, double v, int nodes = 64) {
    cplx s = 0.0;
    for (int j = 0; j < nodes; ++j) s += F(cplx(-0.5 + (j + 0.5) / nodes, v));
    return s / double(nodes);
}

cplx asym_eval(const std::vector<AsymptoticTerm>& a, double v) {
    cplx s = 0.0;
    for (const auto& t : a) s += t.c * std::pow(v, t.delta) * std::exp(-t.A * v);
    return s;
}

void add_tail(RegularizedValue& r, const std::vector<AsymptoticTerm>& asym) {
    for (const auto& t : asym) {
        auto [c0, res] = tail_integral(t.delta, t.A);
        r.strip_closed += t.c * c0;
        if (res != 0.0) r.poles[1] += t.c * res;
    }
}

}  // namespace

bool TruncatedDomain::contains(cplx z) const {
    return std::abs(z) >= 1.0 - 1e-15 && std::fabs(z.real()) <= 0.5 && z.imag() <= t;
}

std::pair<double, double> tail_integral(double delta, double A) {
    if (A < 0) throw Error(ErrorKind::Domain, "tail_integral: A must be >= 0");
    if (A == 0.0) {
        if (std::fabs(delta - 1) < 1e-12) return {0.0, 1.0};
        return {1.0 / (1.0 - delta), 0.0};
    }
    if (A > 700) return {0.0, 0.0};
    return {std::pow(A, 1 - delta) * upper_incomplete_gamma(delta - 1, A), 0.0};
}

RegularizedValue regularized_integral(const std::function<cplx(cplx)>& F, const std::vector<AsymptoticTerm>& asym,
                                      const QuadOptions& q, double t0) {
    RegularizedValue r;
    auto [low, err] = lower_part([&](int n) { return lower_rule(F, n); }, q);
    r.lower = low;
    r.quad_error = err;
    if (err > q.tol) throw Error(ErrorKind::Convergence, "regularized_integral: quadrature below height 1 did not converge", err);
    auto resid = [&](double v) { return u_average(F, v) - asym_eval(asym, v); };
    double scale = 1.0 + std::abs(u_average(F, 1.0)) + std::abs(asym_eval(asym, 2 * t0));
    cplx r2 = resid(2 * t0);
    if (std::abs(r2) > 1e-8 * scale)
        throw Error(ErrorKind::Convergence, "regularized_integral: unfitted growth in the tail", std::abs(r2));
    add_tail(r, asym);
    r.strip_terms = asym.size();
    // residual on [1, 2 t0], geometric panels
    cplx num = 0.0;
    for (double a = 1.0; a < 2 * t0; a *= 2) {
        double b = std::min(2 * a, 2 * t0);
        num += panel([&](double v) { return resid(v) / (v * v); }, a, b);
    }
    r.strip_numeric = num;
    r.value = r.lower + r.strip_closed + r.strip_numeric;
    return r;
}

RegularizedValue regularized_integral(const std::function<cplx(cplx)>& F, const QuadOptions& q, double t0) {
    const double scale = 1.0 + std::abs(u_average(F, 1.0));
    cplx a = u_average(F, t0), b = u_average(F, 1.5 * t0), c = u_average(F, 2 * t0);
    std::vector<AsymptoticTerm> asym;
    if (std::max({std::abs(a), std::abs(b), std::abs(c)}) > 1e-12 * scale) {
        if (std::abs(a) == 0.0 || std::abs(c) == 0.0)
            throw Error(ErrorKind::Convergence, "regularized_integral: cannot fit the tail");
        double delta = std::log(std::abs(c) / std::abs(a)) / std::log(2.0);
        cplx coef = a / std::pow(t0, delta);
        cplx pred = coef * std::pow(1.5 * t0, delta);
        if (std::abs(pred - b) > 1e-6 * std::abs(b))
            throw Error(ErrorKind::Convergence, "regularized_integral: tail is not a single power", std::abs(pred - b));
        // snap to nearby rational exponents so the pole test is exact
        double snapped = std::round(delta * 4) / 4;
        if (std::fabs(snapped - delta) < 1e-7) delta = snapped;
        asym.push_back({coef, delta, 0.0});
    }
    RegularizedValue r = regularized_integral(F, asym, q, t0);
    r.fitted = !asym.empty();
    return r;
}

cplx truncated_integral(const std::function<cplx(cplx)>& F, const TruncatedDomain& dom, int nodes) {
    if (!std::isfinite(dom.t) || dom.t < 1) throw Error(ErrorKind::Domain, "truncated_integral: needs finite t >= 1");
    cplx s = lower_rule(F, nodes);
    const Rule& r = rule(nodes);
    for (double a = 1.0; a < dom.t; a *= 2) {
        double b = std::min(2 * a, dom.t);
        std::vector<cplx> z;
        std::vector<double> wt;
        for (const auto& [xu, wu] : r)
            for (const auto& [xv, wv] : r) {
                double v = 0.5 * (a + b) + 0.5 * (b - a) * xv;
                z.push_back({0.5 * xu, v});
                wt.push_back(0.5 * wu * 0.5 * (b - a) * wv / (v * v));
            }
        std::vector<cplx> val(z.size());
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < long(z.size()); ++i) val[i] = F(z[i]);
        for (size_t i = 0; i < z.size(); ++i) s += wt[i] * val[i];
    }
    return s;
}

// ---- the lift ----

LiftContext::LiftContext(const WeakMaassForm& g, const ThetaKernel& tk, const LiftOptions& opt)
    : g_(g), tk_(&tk), opt_(opt), cs_(4 * tk.N()) {
    const long M = 4 * tk.N();
    if (g.level != M) throw Error(ErrorKind::Config, "lift: form level must be 4N for the kernel");
    if (std::fabs(g.weight - tk.k() / 2.0) > 1e-12) throw Error(ErrorKind::Config, "lift: form weight must be k/2");
    DirichletCharacter gc = g.character.modulus() == M ? g.character : g.character.lift(M);
    for (long n = 0; n < M; ++n)
        if (std::abs(gc(n) - tk.chi()(n)) > 1e-12)
            throw Error(ErrorKind::Config, "lift: form character differs from the kernel character");
    if (g.tag == GrowthTag::WMF || g.tag == GrowthTag::H || g.tag == GrowthTag::Inconclusive)
        throw Error(ErrorKind::Domain, "lift: form must have moderate growth (WMF*, H*, H+ or Maass)");
    if (g_.cosets.empty()) attach_coset_expansions(g_, opt.extract);
    if (g_.cosets.size() != cs_.size()) throw Error(ErrorKind::MissingData, "lift: coset data do not match the level");
    for (const auto& a : cs_.reps()) twisted_.emplace_back(tk, a);
    by_n_.resize(cs_.size());
    growth_.assign(cs_.size(), 0.0);
    for (size_t i = 0; i < cs_.size(); ++i)
        for (const auto& t : g_.cosets[i].terms) {
            by_n_[i][t.n].push_back(t);
            double n = to_double(t.n);
            if (t.kind == Profile::Holomorphic && n < 0) growth_[i] = std::max(growth_[i], -2 * pi * n);
            if (t.kind == Profile::Harmonic || t.kind == Profile::Whittaker)
                grids_.try_emplace({t.n, int(t.kind), t.param});
        }
    // profile grids: panels of width 1/4 out to where the decay e^{-rate v} is negligible
    std::vector<std::pair<const std::tuple<Rat, int, double>, ProfileGrid>*> todo;
    for (auto& kv : grids_) todo.push_back(&kv);
    const double kappa = g.weight;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < long(todo.size()); ++i) {
        const auto& [n, kind, param] = todo[i]->first;
        ProfileGrid& pg = todo[i]->second;
        double nd = to_double(n);
        double rate = nd > 0 ? 2 * pi * nd : 4 * pi * std::fabs(nd);
        double vmax = 1.0 + 45.0 / rate;
        for (double a = 1.0; a < vmax; a += 0.25)
            for (const auto& [x, wq] : rule(16)) {
                double v = a + 0.125 * (x + 1);
                pg.v.push_back(v);
                pg.wt.push_back(0.125 * wq);
                pg.val.push_back(profile_times_growth(Profile(kind), nd, kappa, param, v));
            }
    }
}

const std::vector<std::vector<cplx>>& LiftContext::form_at_nodes(int n) const {
    std::lock_guard<std::mutex> lock(*mu_);
    auto it = gnodes_.find(n);
    if (it != gnodes_.end()) return it->second;
    std::vector<cplx> z;
    std::vector<double> wt;
    lower_nodes(n, z, wt);
    const auto& reps = cs_.reps();
    const double kappa = g_.weight;
    std::vector<std::vector<cplx>> out(z.size());
    std::vector<Evaluator> sl;
    if (!g_.coset_evaluator && g_.evaluator)
        for (const auto& a : reps) sl.push_back(slash_principal(g_.evaluator, a, kappa));
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < long(z.size()); ++i) {
        if (g_.coset_evaluator) {
            out[i] = g_.coset_evaluator(z[i]);
        } else if (g_.evaluator) {
            for (const auto& f : sl) out[i].push_back(f(z[i]));
        } else {
            for (const auto& e : g_.cosets) out[i].push_back(e.eval(z[i]));
        }
    }
    return gnodes_[n] = std::move(out);
}

RegularizedValue LiftContext::operator()(cplx w) const {
    if (!(w.imag() > 0)) throw Error(ErrorKind::Domain, "lift: w must lie in the upper half-plane");
    const ThetaKernel& tk = *tk_;
    const long N = tk.N();
    const double kappa = tk.k() / 2.0;
    const double e0 = 0.75 - tk.k() / 4.0;
    RegularizedValue r;

    struct Group {
        const FourierTerm* term;
        std::vector<std::pair<double, std::vector<cplx>>> x;  // (A, conj C_j)
    };
    std::vector<Group> groups;
    cplx closed = 0.0, residue = 0.0;
    size_t nterms = 0;

    for (size_t b = 0; b < cs_.size(); ++b) {
        auto terms = twisted_[b].strip_terms(w, opt_.theta.cutoff + growth_[b]);
        nterms += terms.size();
        std::map<const FourierTerm*, size_t> gidx;
        for (const auto& st : terms) {
            Rat n(st.n4, 4 * N);
            auto it = by_n_[b].find(n);
            if (it == by_n_[b].end()) continue;
            for (const auto& gt : it->second) {
                if (gt.kind == Profile::Holomorphic && n < Rat(0) && st.A < opt_.singular_tol) {
                    bool live = false;
                    for (cplx c : st.C) live = live || std::abs(c) > 0;
                    if (live)
                        throw Error(ErrorKind::Singularity, "lift: w is at a singular Heegner point of the lift", st.A);
                }
                if (gt.kind == Profile::Holomorphic || gt.kind == Profile::Power) {
                    double extra = gt.kind == Profile::Power ? gt.param : 0.0;
                    for (size_t j = 0; j < st.C.size(); ++j) {
                        if (st.C[j] == 0.0) continue;
                        auto [c0, res] = tail_integral(kappa + e0 + 0.5 * j + extra, st.A);
                        cplx f = gt.coef * std::conj(st.C[j]);
                        closed += f * c0;
                        residue += f * res;
                    }
                } else {
                    auto [pos, fresh] = gidx.try_emplace(&gt, groups.size());
                    if (fresh) groups.push_back({&gt, {}});
                    std::vector<cplx> cc;
                    for (cplx c : st.C) cc.push_back(std::conj(c));
                    groups[pos->second].x.push_back({st.A, std::move(cc)});
                }
            }
        }
    }

    // Whittaker and harmonic profiles: integrate on [1, inf) numerically
    std::vector<cplx> gv(groups.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < long(groups.size()); ++i) {
        const auto& G = groups[i];
        const FourierTerm& t = *G.term;
        const ProfileGrid& pg = grids_.at({t.n, int(t.kind), t.param});
        double amin = 1e300;
        for (const auto& [A, c] : G.x) amin = std::min(amin, A);
        cplx acc = 0.0;
        for (size_t q = 0; q < pg.v.size(); ++q) {
            const double v = pg.v[q];
            if (amin * (v - 1) > 45.0) break;
            cplx s = 0.0;
            for (const auto& [A, c] : G.x) {
                double ex = std::exp(-A * v);
                if (ex == 0.0) continue;
                double p = std::pow(v, kappa + e0 - 2);
                for (size_t j = 0; j < c.size(); ++j) {
                    s += c[j] * p * ex;
                    p *= std::sqrt(v);
                }
            }
            acc += pg.wt[q] * pg.val[q] * s;
        }
        acc *= t.coef;
        gv[i] = acc;
    }
    cplx numeric = 0.0;
    for (cplx c : gv) numeric += c;

    // below height 1
    auto at = [&](int n) {
        const auto& gz = form_at_nodes(n);
        std::vector<cplx> z;
        std::vector<double> wt;
        lower_nodes(n, z, wt);
        std::vector<cplx> val(z.size());
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < long(z.size()); ++i) {
            ThetaOptions o = opt_.theta;
            o.parallel = false;
            cplx s = 0.0;
            for (size_t b = 0; b < gz[i].size(); ++b)
                if (gz[i][b] != 0.0) s += gz[i][b] * std::conj(twisted_[b].eval(z[i], w, o));
            val[i] = std::pow(z[i].imag(), kappa) * s;
        }
        cplx sum = 0.0;
        for (size_t i = 0; i < z.size(); ++i) sum += wt[i] * val[i];
        return sum;
    };
    auto [low, err] = lower_part(at, opt_.quad);

    r.lower = low;
    r.quad_error = err;
    r.strip_closed = closed;
    r.strip_numeric = numeric;
    r.strip_terms = nterms;
    if (residue != 0.0) r.poles[1] = residue;
    r.value = low + closed + numeric;
    return r;
}

RegularizedValue lift_phi(const WeakMaassForm& g, const ThetaKernel& tk, cplx w, const LiftOptions& opt) {
    bool zero = g.cosets.empty() && !g.evaluator && !g.coset_evaluator && g.a_minus.empty() && g.a_minus0 == 0.0;
    if (zero) {
        for (const auto& [n, c] : g.a_plus) zero = zero && c == 0.0;
        if (zero) return {};
    }
    return LiftContext(g, tk, opt)(w);
}

RegularizedValue lift_phi_D(const WeakMaassForm& g, long D, const ThetaKernel& tk, cplx w, const LiftOptions& opt) {
    if (D == 1) return lift_phi(g, tk, w, opt);
    return lift_phi(dilate(g, D), tk, w / double(D), opt);
}

}  // namespace thetalift
