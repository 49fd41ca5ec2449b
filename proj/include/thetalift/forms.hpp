#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "thetalift/arith.hpp"
#include "thetalift/lattice.hpp"

namespace thetalift {

enum class GrowthTag { WMF, WMFStar, H, HStar, HPlus, Maass, Inconclusive };
std::string to_string(GrowthTag t);
GrowthTag growth_tag_from_string(const std::string& s);

// Shape of the v-dependence of one Fourier term c * profile(v) * e(n u).
//   Holomorphic: e^{-2 pi n v}
//   Harmonic (n < 0): Gamma(1 - kappa, 4 pi |n| v) e^{-2 pi n v}
//   Power (n = 0): v^param
//   Whittaker (n != 0): v^{-kappa/2} W_{sgn(n) kappa/2, param + kappa/2 - 1/2}(4 pi |n| v), param = s
enum class Profile { Holomorphic, Harmonic, Power, Whittaker };

struct FourierTerm {
    Rat n;
    Profile kind;
    cplx coef;
    double param = 0.0;
};

// value of the profile (without e(n u)); returns 0 on underflow
double profile_value(Profile kind, double n, double kappa, double param, double v);

// profile(v) e^{2 pi n v}, computed without overflow
double profile_times_growth(Profile kind, double n, double kappa, double param, double v);

// Scaled Whittaker function R(x) = x^{-k} e^{x/2} W_{k,mu}(x), -> 1 as x -> infinity.
double whittaker_scaled(double k, double mu, double x);
double whittaker_W(double k, double mu, double x);

struct FourierExpansion {
    double weight = 0.0;
    std::vector<FourierTerm> terms;
    cplx eval(cplx z) const;
    // terms with the given frequency
    std::vector<const FourierTerm*> at(const Rat& n) const;
    Rat min_holomorphic_n() const;
};

class CosetSystem {
public:
    explicit CosetSystem(long M);
    long level() const { return M_; }
    const std::vector<Mat2i>& reps() const { return reps_; }
    size_t size() const { return reps_.size(); }
    // index of the coset Gamma_0(M) g
    size_t index_of(const Mat2i& g) const;
    // index of the coset whose bottom rows are congruent to (c : d) in P^1(Z/M)
    size_t index_of_row(long c, long d) const;
    static long index_formula(long M);

private:
    long M_;
    std::vector<Mat2i> reps_;
    std::map<std::pair<long, long>, size_t> lookup_;
    std::vector<size_t> table_;  // (c mod M) * M + (d mod M) -> index
    std::pair<long, long> canonical(long c, long d) const;
};

struct WeakMaassForm {
    double weight = 0.5;
    long level = 4;
    DirichletCharacter character = DirichletCharacter::principal(4);
    double eigen_s = 0.0;
    // Maass tag: a_plus(n != 0) are Whittaker coefficients, a_plus(0) multiplies v^s.
    std::map<Rat, cplx> a_plus;
    std::map<Rat, cplx> a_minus;  // n < 0
    cplx a_minus0 = 0.0;          // multiplies v^{1 - kappa - s}
    GrowthTag tag = GrowthTag::WMFStar;
    // optional: expansions g|alpha for the cosets of Gamma_0(level), same order as CosetSystem(level)
    std::vector<FourierExpansion> cosets;
    // optional: global evaluator (works at any z in H)
    std::function<cplx(cplx)> evaluator;
    // optional: all g|alpha at once, same order as CosetSystem(level)
    std::function<std::vector<cplx>(cplx)> coset_evaluator;
    std::string name;

    FourierExpansion expansion() const;
    void validate() const;
};

cplx eval_form(const WeakMaassForm& g, cplx z);

// the tag H+ requires a_minus0 = 0 etc.; throws Domain on violation
void check_tag_invariants(const WeakMaassForm& g);

using Evaluator = std::function<cplx(cplx)>;

// (f|gamma)(z); half-integral weight uses j(gamma, z) and requires gamma in Gamma_0(4)
Evaluator slash(const Evaluator& f, const Mat2i& g, double weight);
// same with the (cz+d)^{-weight} principal-branch factor for any gamma in SL2(Z)
Evaluator slash_principal(const Evaluator& f, const Mat2i& g, double weight);

enum class MaassOp { R, L, Delta, Xi };
struct FDResult {
    cplx value;
    double error;  // |difference between h and h/2 estimates|
};
FDResult maass_operator(const Evaluator& f, MaassOp op, double k, cplx z, double h = 1e-3);
// exact on Fourier data; Whittaker derivatives are done numerically on the profile
cplx maass_operator_exact(const FourierExpansion& f, MaassOp op, cplx z, double eigen_s = 0.0);

// ---- Eisenstein series ----
struct EisensteinOptions {
    double radius = 1500.0;  // bound on |c z + d| in the coset sum
};
// sum over c >= 0, c = 0 mod 4N, gcd(c, d) = 1 of conj(chi(d)) Im(gamma z)^s / j(gamma, z)^k
cplx eisenstein_eval(cplx z, double s, int k, long N, const DirichletCharacter& chi,
                     const EisensteinOptions& opt = {});
// (c_alpha z + d_alpha)^{-k/2} E(alpha z), principal branch, for every coset of Gamma_0(4N)
std::vector<cplx> eisenstein_all_cosets(cplx z, double s, int k, long N, const DirichletCharacter& chi,
                                        const CosetSystem& cs, const EisensteinOptions& opt = {});
// integral-weight Eisenstein series on Gamma_0(M) at the infinite cusp:
// sum over c >= 0, c = 0 mod M, gcd = 1, modulo +-1, of conj(psi(d)) Im(gamma w)^s (c w + d)^{-k}
cplx eisenstein_integral(cplx w, double s, int k, long M, const DirichletCharacter& psi, double radius = 1500.0);

WeakMaassForm eisenstein_form(double s, int k, long N, const DirichletCharacter& chi,
                              const EisensteinOptions& opt = {});

// ---- theta models ----
// stored coefficients a+(n) for n <= terms; evaluation never uses them
inline constexpr long kModelTerms = 4000;
// sum_n e(D n^2 z), weight 1/2 on Gamma_0(4D)
cplx jacobi_theta(cplx z, long D = 1);
// theta(Dz) as a form of level 4N (D | N), character (D/.) lifted to 4N
WeakMaassForm theta_model(long D, long N, long terms = kModelTerms);
// theta(z)^3, weight 3/2, level 4N
WeakMaassForm theta_cube_model(long N, long terms = kModelTerms);
// theta(z) - theta(4z), weight 1/2, level 4N (4 | N)
WeakMaassForm theta_odd_model(long N, long terms = kModelTerms);

// g_D(z) = g(Dz): level 4ND, character chi (D/.)
WeakMaassForm dilate(const WeakMaassForm& g, long D);

// ---- coset data ----
struct ExtractOptions {
    double v0 = 0.8;
    double v1 = 1.6;  // second height, Maass constant terms only
    int samples = 0;  // 0: automatic
    double nmax = 10.0;
    double rel_tol = 1e-14;
};
// fills g.cosets from g.evaluator (or the Eisenstein all-coset path) using a DFT over one period
void attach_coset_expansions(WeakMaassForm& g, const ExtractOptions& opt = {});

// ---- growth ----
struct GrowthReport {
    GrowthTag tag;
    double max_slope;
    bool conclusive;
};
// probe: a(n, v) e^{2 pi n v} as functions of v on the grid; fits log-log slopes
GrowthReport growth_classify(const WeakMaassForm& g, const std::vector<double>& probe_v);
GrowthReport growth_classify_samples(const std::vector<double>& v, const std::vector<std::vector<double>>& series);

// q-expansion text format
WeakMaassForm read_q_expansion(const std::string& path);
void write_q_expansion(const WeakMaassForm& g, const std::string& path);

}  // namespace thetalift
