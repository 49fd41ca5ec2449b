#include <omp.h>

#include <CLI11.hpp>
#include <climits>
#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>

#include "thetalift/checks.hpp"
#include "thetalift/identities.hpp"

using namespace thetalift;

namespace {

struct RunConfig {
    std::string command;
    long N = 1, D = 1;
    int k = 0;  // 0: from the form, else 3
    int m = INT_MIN;  // INT_MIN: lambda
    int mu = -1;
    std::string chi;
    std::string form, qexp;
    double s = 1.0;  // Eisenstein parameter
    double radius = 400.0;
    long terms = kModelTerms;
    std::vector<std::string> z{"i"}, w{"1+i"};
    std::string suite = "kernel";
    int points = 5;
    unsigned long seed = 12345;
    double cutoff = 50.0, quad_tol = 1e-8;
    std::vector<double> s_list{2.0, 2.5};
    double eta_max = 8.0, eta_lo = 1.0 / 16, eta_hi = 4.0;
    int per_octave = 2;
    long nmax = 6;
    double eta1 = 0.3, eta2 = 0.45;
    int samples = 32;
    long heegner_radius = 6;
    double heegner_tol = 1e-9;
    std::string out;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

cplx parse_complex(std::string s) {
    std::erase(s, ' ');
    auto num = [&](const std::string& t) {
        size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(t, &pos);
        } catch (...) {
            pos = std::string::npos;
        }
        if (pos != t.size()) throw ConfigError("cannot parse complex number '" + s + "'");
        return v;
    };
    if (s.empty()) throw ConfigError("empty complex number");
    if (s.front() == '(' && s.back() == ')') {
        auto c = s.find(',');
        if (c == std::string::npos) throw ConfigError("cannot parse complex number '" + s + "'");
        return {num(s.substr(1, c - 1)), num(s.substr(c + 1, s.size() - c - 2))};
    }
    if (s.back() != 'i') return num(s);
    std::string body = s.substr(0, s.size() - 1);
    size_t split = std::string::npos;
    for (size_t i = body.size(); i-- > 1;)
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    auto imag = [&](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return num(t);
    };
    if (split == std::string::npos) return {0.0, imag(body)};
    return {num(body.substr(0, split)), imag(body.substr(split))};
}

std::vector<cplx> parse_points(const std::vector<std::string>& v) {
    std::vector<cplx> out;
    for (const auto& s : v) {
        cplx z = parse_complex(s);
        if (!(z.imag() > 0)) throw ConfigError("point " + s + " is not in the upper half-plane");
        out.push_back(z);
    }
    if (out.empty()) throw ConfigError("probe grid is empty");
    return out;
}

std::string fmt(cplx z) {
    if (z.imag() == 0.0) return format_number(z.real());
    std::string im = format_number(z.imag());
    return format_number(z.real()) + (im[0] == '-' ? "" : "+") + im + "i";
}

DirichletCharacter parse_character(const std::string& spec, long modulus) {
    if (spec.empty() || spec == "principal") return DirichletCharacter::principal(modulus);
    const std::string pre = "kronecker:";
    if (spec.rfind(pre, 0) == 0) {
        long d = 0;
        try {
            d = std::stol(spec.substr(pre.size()));
        } catch (...) {
            throw ConfigError("bad character spec '" + spec + "'");
        }
        return DirichletCharacter::kronecker(d, modulus);
    }
    throw ConfigError("bad character spec '" + spec + "' (use principal or kronecker:<d>)");
}

bool square_free(long D) {
    for (long p = 2; p * p <= D; ++p)
        if (D % (p * p) == 0) return false;
    return true;
}

class Runner {
public:
    explicit Runner(RunConfig c) : cfg_(std::move(c)) {}

    // checks that must hold before any computation; ConfigError on failure
    void validate() {
        static const std::vector<std::string> commands{"theta-eval", "lift", "verify", "singularities", "eisenstein-check"};
        if (std::find(commands.begin(), commands.end(), cfg_.command) == commands.end())
            throw ConfigError("unknown command '" + cfg_.command + "'");
        if (cfg_.N < 1) throw ConfigError("N must be positive");
        if (cfg_.D < 1 || !square_free(cfg_.D)) throw ConfigError("D must be a positive square-free integer");
        if (cfg_.points < 1 || cfg_.samples < 4 || cfg_.nmax < 1 || cfg_.per_octave < 1)
            throw ConfigError("probe counts must be positive");
        if (!(cfg_.cutoff > 0) || !(cfg_.quad_tol > 0) || !(cfg_.radius > 0) || !(cfg_.heegner_tol > 0))
            throw ConfigError("truncation budgets must be positive");
        if (cfg_.s_list.empty()) throw ConfigError("s grid is empty");
        zs_ = parse_points(cfg_.z);
        ws_ = parse_points(cfg_.w);

        needs_form_ = cfg_.command == "lift" ||
                      (cfg_.command == "verify" && cfg_.suite != "kernel" && cfg_.suite != "regularization");
        static const std::vector<std::string> suites{"kernel", "regularization", "constant-term", "mellin", "dirichlet",
                                                     "boundedness"};
        if (cfg_.command == "verify" && std::find(suites.begin(), suites.end(), cfg_.suite) == suites.end())
            throw ConfigError("unknown suite '" + cfg_.suite + "'");
        if (cfg_.command == "eisenstein-check") {
            if (cfg_.k == 0) cfg_.k = 5;
            if (cfg_.form.empty()) cfg_.form = "eisenstein";
        }
        if (needs_form_ && cfg_.form.empty()) throw ConfigError("this command needs form=<name>");
        if (needs_form_ || cfg_.command == "eisenstein-check") build_form();
        if (cfg_.k == 0) cfg_.k = needs_form_ ? int(std::lround(2 * form_.weight)) : 3;
        if (cfg_.k < 1 || cfg_.k % 2 == 0) throw ConfigError("k must be a positive odd integer");
        if (needs_form_ && std::fabs(form_.weight - cfg_.k / 2.0) > 1e-12)
            throw ConfigError("form weight " + format_number(form_.weight) + " does not match k/2");
        lambda_ = (cfg_.k - 1) / 2;
        if (cfg_.m == INT_MIN) cfg_.m = lambda_;
        if (cfg_.mu >= 0 && std::abs(cfg_.m) > lambda_ + cfg_.mu)
            throw ConfigError("admissibility bound |m| <= lambda + mu violated: |m| = " + std::to_string(std::abs(cfg_.m)) +
                              ", lambda + mu = " + std::to_string(lambda_ + cfg_.mu));
        if (cfg_.mu >= 0 && (lambda_ + cfg_.mu - cfg_.m) % 2 != 0)
            throw ConfigError("spherical function needs m = lambda + mu (mod 2)");
        if (cfg_.command == "eisenstein-check" && (cfg_.k < 3)) throw ConfigError("eisenstein-check needs k >= 3");
        const long Nk = cfg_.N * cfg_.D;
        DirichletCharacter chi;
        if (!cfg_.chi.empty())
            chi = parse_character(cfg_.chi, 4 * Nk);
        else if (needs_form_)
            chi = (cfg_.D == 1 ? form_.character : dilate(form_, cfg_.D).character);
        else
            chi = DirichletCharacter::principal(4 * Nk);
        if (needs_form_ || cfg_.command == "eisenstein-check") {
            DirichletCharacter want = cfg_.D == 1 ? form_.character : dilate(form_, cfg_.D).character;
            for (long n = 0; n < 4 * Nk; ++n)
                if (std::abs(want.lift(4 * Nk)(n) - chi.lift(4 * Nk)(n)) > 1e-12)
                    throw ConfigError("character does not match the form's character");
        }
        try {
            tk_ = std::make_unique<ThetaKernel>(Nk, cfg_.k, cfg_.m, chi, cfg_.mu);
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
        lopt_.theta.cutoff = cfg_.cutoff;
        lopt_.quad.tol = cfg_.quad_tol;
    }

    std::vector<ReportRow> run() {
        if (cfg_.command == "theta-eval") return theta_eval_rows();
        if (cfg_.command == "lift") return lift_rows();
        if (cfg_.command == "singularities") return singularity_rows();
        if (cfg_.command == "eisenstein-check") return eisenstein_rows();
        if (cfg_.suite == "kernel") return kernel_suite();
        if (cfg_.suite == "regularization") return regularization_suite();
        if (cfg_.suite == "constant-term") return constant_term_suite();
        if (cfg_.suite == "mellin") return mellin_suite();
        if (cfg_.suite == "dirichlet") return dirichlet_suite();
        return boundedness_suite();
    }

private:
    RunConfig cfg_;
    std::vector<cplx> zs_, ws_;
    bool needs_form_ = false;
    int lambda_ = 0;
    WeakMaassForm form_;
    std::unique_ptr<ThetaKernel> tk_;
    LiftOptions lopt_;

    void build_form() {
        const std::string& f = cfg_.form;
        try {
            if (f == "jacobi-theta")
                form_ = theta_model(1, cfg_.N, cfg_.terms);
            else if (f.rfind("theta-dilated:", 0) == 0)
                form_ = theta_model(std::stol(f.substr(14)), cfg_.N, cfg_.terms);
            else if (f == "theta-cube")
                form_ = theta_cube_model(cfg_.N, cfg_.terms);
            else if (f == "theta-odd")
                form_ = theta_odd_model(cfg_.N, cfg_.terms);
            else if (f == "eisenstein") {
                int k = cfg_.k == 0 ? 5 : cfg_.k;
                EisensteinOptions eo;
                eo.radius = cfg_.radius;
                form_ = eisenstein_form(cfg_.s, k, cfg_.N, parse_character(cfg_.chi, 4 * cfg_.N), eo);
            } else if (f == "file") {
                if (cfg_.qexp.empty()) throw ConfigError("form=file needs qexp=<path>");
                form_ = read_q_expansion(cfg_.qexp);
                if (form_.level != 4 * cfg_.N) throw ConfigError("q-expansion level does not equal 4N");
            } else
                throw ConfigError("unknown form '" + f + "'");
        } catch (const Error& e) {
            throw ConfigError(e.what());
        } catch (const std::invalid_argument&) {
            throw ConfigError("bad form spec '" + f + "'");
        }
    }

    std::string base_params() const {
        std::ostringstream os;
        os << "N=" << cfg_.N << ";D=" << cfg_.D << ";k=" << cfg_.k << ";m=" << cfg_.m;
        if (!cfg_.form.empty()) os << ";form=" << cfg_.form;
        return os.str();
    }

    static ReportRow row(std::string id, std::string params, cplx lhs, cplx rhs, double residual, double budget) {
        ReportRow r;
        r.id = std::move(id);
        r.params = std::move(params);
        r.lhs = lhs;
        r.rhs = rhs;
        r.residual = residual;
        r.budget = budget;
        r.pass = residual <= budget;
        return r;
    }

    std::vector<ReportRow> theta_eval_rows() {
        std::vector<ReportRow> rows;
        ThetaOptions o;
        o.cutoff = cfg_.cutoff;
        for (cplx z : zs_)
            for (cplx w : ws_) {
                cplx v = tk_->eval(z, w, o).value;
                cplx ref = tk_->eval_serial_reference(z, w, o).value;
                rows.push_back(make_row("theta-eval", base_params() + ";z=" + fmt(z) + ";w=" + fmt(w), v, ref, 1e-12));
            }
        return rows;
    }

    // value of the lift; rhs holds the coefficient of the simple pole, residual the quadrature estimate
    std::vector<ReportRow> lift_rows() {
        std::vector<ReportRow> rows;
        WeakMaassForm g = cfg_.D == 1 ? form_ : dilate(form_, cfg_.D);
        LiftContext ctx(g, *tk_, lopt_);
        for (cplx w : ws_) {
            auto r = ctx(w / double(cfg_.D));
            cplx pole = r.poles.count(1) ? r.poles.at(1) : cplx(0.0);
            rows.push_back(row("lift", base_params() + ";w=" + fmt(w), r.value, pole, r.quad_error, cfg_.quad_tol));
        }
        return rows;
    }

    std::vector<ReportRow> singularity_rows() {
        std::vector<ReportRow> rows;
        for (cplx w : ws_) {
            auto hs = find_singularities(tk_->N(), w, cfg_.heegner_radius, cfg_.heegner_tol);
            std::string p = "N=" + std::to_string(tk_->N()) + ";w=" + fmt(w) + ";radius=" + std::to_string(cfg_.heegner_radius);
            if (hs.empty()) rows.push_back(row("heegner-none", p, 0.0, 0.0, 0.0, cfg_.heegner_tol));
            for (const auto& h : hs) {
                cplx L = lambda_form({h.a, h.b, h.c}, w, tk_->N());
                std::string x = ";x=(" + std::to_string(h.a) + " " + std::to_string(h.b) + " " + std::to_string(h.c) + ")";
                rows.push_back(row("heegner", p + x, L, 0.0, std::abs(L), cfg_.heegner_tol));
            }
        }
        return rows;
    }

    std::vector<ReportRow> eisenstein_rows() {
        auto chi = parse_character(cfg_.chi, 4 * cfg_.N);
        auto r = eisenstein_proportionality(cfg_.k, cfg_.s, cfg_.N, chi, ws_, lopt_, cfg_.radius);
        std::vector<ReportRow> rows;
        std::string p = "N=" + std::to_string(cfg_.N) + ";k=" + std::to_string(cfg_.k) + ";s=" + format_number(cfg_.s);
        size_t j = 0;
        for (size_t i = 0; i < ws_.size(); ++i) {
            bool skipped = std::find(r.skipped.begin(), r.skipped.end(), i) != r.skipped.end();
            if (skipped) {
                rows.push_back(row("eisenstein-skipped", p + ";w=" + fmt(ws_[i]), r.num[i], r.den[i], 0.0, 1e-3));
                continue;
            }
            cplx q = r.ratios[j++];
            rows.push_back(row("eisenstein-ratio", p + ";w=" + fmt(ws_[i]), r.num[i], r.den[i],
                               std::abs(q - r.C) / std::abs(r.C), 1e-3));
        }
        rows.push_back(row("eisenstein-dispersion", p + ";C=" + fmt(r.C), r.C, r.C, r.dispersion, 1e-3));
        return rows;
    }

    std::vector<ReportRow> kernel_suite() {
        std::vector<ReportRow> rows;
        std::mt19937_64 rng(cfg_.seed);
        std::uniform_real_distribution<double> uu(-0.5, 0.5), vv(0.8, 1.6);
        auto gz = gamma0_elements(4 * tk_->N()), gw = gamma0_elements(2 * tk_->N());
        for (int i = 0; i < cfg_.points; ++i) {
            double a = uu(rng), b = vv(rng), c = uu(rng), d = vv(rng);
            cplx z(a, b), w(c, d);
            std::string p = base_params() + ";z=" + fmt(z) + ";w=" + fmt(w);
            auto zm = kernel_z_modularity(*tk_, z, w, gz);
            rows.push_back(row("kernel-z-modularity", p, zm.lhs, zm.rhs, zm.residual, 1e-7));
            auto wm = kernel_w_modularity(*tk_, z, w, gw);
            rows.push_back(row("kernel-w-modularity", p, wm.lhs, wm.rhs, wm.residual, 1e-7));
        }
        auto pde = kernel_pde_residual(*tk_, zs_[0], ws_[0]);
        rows.push_back(row("kernel-pde", base_params() + ";z=" + fmt(zs_[0]) + ";w=" + fmt(ws_[0]), pde.lhs, pde.rhs,
                           pde.residual, 1e-4));
        return rows;
    }

    std::vector<ReportRow> regularization_suite() {
        std::vector<ReportRow> rows;
        QuadOptions q;
        q.tol = cfg_.quad_tol;
        auto one = regularized_integral([](cplx) { return cplx(1.0); }, q);
        rows.push_back(make_row("regularized-one", "F=1", one.value, pi / 3, 1e-8));
        auto lin = regularized_integral([](cplx z) { return cplx(z.imag()); }, q);
        cplx pole = lin.poles.count(1) ? lin.poles.at(1) : cplx(0.0);
        rows.push_back(make_row("regularized-v-pole", "F=v", pole, 1.0, 1e-8));
        cplx dense = truncated_integral([](cplx z) { return cplx(z.imag()); }, {1.0}, 48);
        rows.push_back(make_row("regularized-v-constant", "F=v;oracle=dense", lin.value, dense, 1e-6));
        return rows;
    }

    LiftConstants constants() const { return lift_constants(lambda_, cfg_.D, cfg_.N, form_.character); }

    cplx a0() const {
        auto it = form_.a_plus.find(Rat(0));
        return it == form_.a_plus.end() ? cplx(0.0) : it->second;
    }

    std::vector<ReportRow> constant_term_suite() {
        LiftFunction phi(form_, *tk_, cfg_.D, lopt_);
        auto lim = lift_limit_at_infinity(phi, cfg_.eta_max);
        cplx pred = constant_term_formula(cfg_.k, a0(), constants(), form_.character);
        std::string p = base_params() + ";eta_max=" + format_number(cfg_.eta_max) + ";change=" + format_number(lim.change);
        std::vector<ReportRow> rows{make_row("constant-term", p, lim.value, pred, 1e-3)};
        if (pred == 0.0) rows.back() = row("constant-term", p, lim.value, pred, std::abs(lim.value), 1e-3);
        rows.push_back(row("constant-term-convergence", p, lim.samples[2], lim.samples[1], lim.change, 1e-3));
        return rows;
    }

    std::vector<ReportRow> mellin_suite() {
        LiftFunction phi(form_, *tk_, cfg_.D, lopt_);
        MellinGrid grid{cfg_.eta_lo, cfg_.eta_hi, cfg_.per_octave};
        auto lim = lift_limit_at_infinity(phi, 4 * cfg_.eta_hi, 1e-6);
        std::vector<ReportRow> rows;
        for (double s : cfg_.s_list) {
            std::string p = base_params() + ";s=" + format_number(s);
            auto L = mellin_lhs(phi, lim.value, s, grid);
            auto R = mellin_rhs(constants(), cfg_.k, s, form_.a_plus);
            rows.push_back(make_row("mellin", p + ";tail=" + format_number(R.tail_bound), L.value, R.value, 5e-3));
            rows.push_back(make_row("mellin-halving", p, L.value, L.coarse, 1e-3));
        }
        return rows;
    }

    std::vector<ReportRow> dirichlet_suite() {
        LiftFunction phi(form_, *tk_, cfg_.D, lopt_);
        auto ex = extract_lift_coefficients(phi, lambda_, cfg_.nmax, cfg_.eta1, cfg_.eta2, cfg_.samples);
        std::vector<ReportRow> rows;
        std::string p = base_params() + ";nmax=" + std::to_string(cfg_.nmax) + ";heights=" + format_number(cfg_.eta1) +
                        "/" + format_number(cfg_.eta2);
        rows.push_back(row("extraction-condition", p, ex.condition, 0.0, ex.condition, 1e6));
        cplx am0 = ex.A_minus.count(0) ? ex.A_minus.at(0) : cplx(0.0);
        rows.push_back(row("extraction-A-minus-0", p, am0, 0.0, std::abs(am0), 1e-6));
        for (double s : cfg_.s_list) {
            auto r = dirichlet_relation_check(ex.A_plus, ex.A_minus, form_.a_plus, constants(), cfg_.k, s, cfg_.nmax);
            rows.push_back(row("dirichlet-relation", p + ";s=" + format_number(s), r.lhs, r.rhs, r.residual, 5e-2));
        }
        return rows;
    }

    std::vector<ReportRow> boundedness_suite() {
        LiftFunction phi(form_, *tk_, cfg_.D, lopt_);
        auto b = boundedness_probe(phi, 5.0, 80.0, cfg_.points);
        double hi = b.max_abs, lo = b.max_abs - b.spread;
        return {row("boundedness", base_params() + ";eta=[5,80]", hi, lo, b.spread / std::max(hi, 1e-300), 1e-6)};
    }
};

// key=value -> --key=value; the first bare word is the command
std::vector<std::string> normalise(int argc, char** argv) {
    std::vector<std::string> out;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a.rfind("-", 0) != 0 && a.find('=') != std::string::npos) a = "--" + a;
        out.push_back(a);
    }
    std::reverse(out.begin(), out.end());  // CLI11 takes arguments in reverse order
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* t = std::getenv("THETALIFT_THREADS")) {
        int n = std::atoi(t);
        if (n > 0) omp_set_num_threads(n);
    }
    RunConfig cfg;
    CLI::App app{"theta lift numerics: thetalift <command> key=value ..."};
    app.set_config("--config");
    app.add_option("command", cfg.command, "theta-eval | lift | verify | singularities | eisenstein-check")->required();
    app.add_option("--N", cfg.N);
    app.add_option("--D", cfg.D);
    app.add_option("--k", cfg.k);
    app.add_option("--m", cfg.m);
    app.add_option("--mu", cfg.mu);
    app.add_option("--chi", cfg.chi, "principal | kronecker:<d>");
    app.add_option("--form", cfg.form, "jacobi-theta | theta-dilated:<d> | theta-cube | theta-odd | eisenstein | file");
    app.add_option("--qexp", cfg.qexp);
    app.add_option("--s", cfg.s, "Eisenstein parameter");
    app.add_option("--radius", cfg.radius, "Eisenstein truncation |cz+d| <= radius");
    app.add_option("--terms", cfg.terms, "stored coefficients of built-in models");
    app.add_option("--z", cfg.z)->delimiter(';');
    app.add_option("--w", cfg.w)->delimiter(';');
    app.add_option("--suite", cfg.suite);
    app.add_option("--points", cfg.points);
    app.add_option("--seed", cfg.seed);
    app.add_option("--cutoff", cfg.cutoff);
    app.add_option("--quad-tol", cfg.quad_tol);
    app.add_option("--s-grid", cfg.s_list)->delimiter(';');
    app.add_option("--eta-max", cfg.eta_max);
    app.add_option("--eta-lo", cfg.eta_lo);
    app.add_option("--eta-hi", cfg.eta_hi);
    app.add_option("--per-octave", cfg.per_octave);
    app.add_option("--nmax", cfg.nmax);
    app.add_option("--eta1", cfg.eta1);
    app.add_option("--eta2", cfg.eta2);
    app.add_option("--samples", cfg.samples);
    app.add_option("--heegner-radius", cfg.heegner_radius);
    app.add_option("--heegner-tol", cfg.heegner_tol);
    app.add_option("--out", cfg.out, "CSV path; stdout when empty");
    try {
        app.parse(normalise(argc, argv));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    Runner runner(cfg);
    try {
        runner.validate();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }

    std::vector<ReportRow> rows;
    try {
        rows = runner.run();
    } catch (const Error& e) {
        std::cerr << "check failed: " << e.what();
        if (e.achieved() > 0) std::cerr << " (achieved " << format_number(e.achieved()) << ")";
        std::cerr << '\n';
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    try {
        if (cfg.out.empty())
            std::cout << report_csv(rows);
        else
            write_report(rows, cfg.out);
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    size_t failed = std::count_if(rows.begin(), rows.end(), [](const ReportRow& r) { return !r.pass; });
    std::cerr << rows.size() << " rows, " << failed << " failed\n";
    return failed ? 1 : 0;
}
