#pragma once

#include <map>
#include <string>
#include <vector>

#include "thetalift/lift.hpp"

namespace thetalift {

struct LiftConstants {
    int lambda = 0;
    long D = 1;
    long N = 1;
    cplx C = 0.0;  // (-1)^lambda 2^{2-3 lambda} (DN)^{lambda/2+1/4}
    DirichletCharacter chi_D;  // chi (-1/.)^lambda (D/.)
};

LiftConstants lift_constants(int lambda, long D, long N, const DirichletCharacter& chi);

// predicted Phi_D(g)(i infinity)
cplx constant_term_formula(int k, cplx a0, const LiftConstants& c, const DirichletCharacter& chi);

// eta -> Phi_D(g)(i eta + u), cached by point; not thread safe
class LiftFunction {
public:
    LiftFunction(const WeakMaassForm& g, const ThetaKernel& tk, long D = 1, const LiftOptions& opt = {});
    cplx operator()(cplx w);
    cplx on_axis(double eta) { return (*this)(cplx(0.0, eta)); }
    size_t evaluations() const { return cache_.size(); }
    const ThetaKernel& kernel() const { return *tk_; }
    long D() const { return D_; }

private:
    const ThetaKernel* tk_;
    long D_;
    bool zero_ = false;
    std::unique_ptr<LiftContext> ctx_;
    std::map<std::pair<double, double>, cplx> cache_;
};

struct LimitResult {
    cplx value = 0.0;
    cplx samples[3];  // at eta_max/4, eta_max/2, eta_max
    double change = 0.0;  // |last - previous| relative
    bool converged = true;
};
LimitResult lift_limit_at_infinity(LiftFunction& phi, double eta_max, double tol = 1e-3);
LimitResult lift_limit_at_infinity(const WeakMaassForm& g, const ThetaKernel& tk, long D, double eta_max,
                                   double tol = 1e-3, const LiftOptions& opt = {});

// int_0^inf int_{2y}^inf e^{y-x} x^{-k/2} y^{s-1} dx dy
double extra_term_kernel(double s, int k);

struct MellinGrid {
    double eta_lo = 1.0 / 16;
    double eta_hi = 4.0;
    int per_octave = 2;  // coarse spacing; the fine pass halves it
};
struct MellinResult {
    cplx value = 0.0;   // fine grid
    cplx coarse = 0.0;
    double rel_change = 0.0;
    cplx below = 0.0;   // model part on (0, eta_lo)
    double edge = 0.0;  // |eta^s (Phi - Phi_inf)| at eta_hi
    cplx phi_inf = 0.0;
};
// int_0^inf eta^{s-1} (Phi(i eta) - phi_inf) d eta; Simpson in log eta, near 0 Phi ~ a/eta + b eta^{-2 lambda} + c
MellinResult mellin_lhs(LiftFunction& phi, cplx phi_inf, double s, const MellinGrid& grid = {});
MellinResult mellin_lhs(const WeakMaassForm& g, const ThetaKernel& tk, long D, double s, const MellinGrid& grid = {});

struct SeriesValue {
    cplx value = 0.0;
    double tail_bound = 0.0;
    long terms = 0;
};
// C (2 pi)^{-s} Gamma(s) L(s+1-lambda, chi_D) sum a(D n^2) n^{-s}; coefficients assumed O(n^{max(0,k-2)})
SeriesValue mellin_rhs(const LiftConstants& c, int k, double s, const std::map<Rat, cplx>& a_plus);

// Fourier coefficients of Phi(u + i eta), period 1, weight 2 lambda
struct LiftCoefficients {
    std::map<long, cplx> A_plus;   // all n with |n| <= nmax
    std::map<long, cplx> A_minus;  // n <= 0; A_minus[0] multiplies eta^{1-2 lambda}
    double condition = 0.0;        // worst 2x2 condition number, columns equilibrated
    double consistency = 0.0;      // n > 0: relative mismatch between the two heights
};
LiftCoefficients extract_lift_coefficients(LiftFunction& phi, int lambda, long nmax, double eta1, double eta2,
                                           int samples = 64);

struct RelationResult {
    cplx lhs = 0.0, rhs = 0.0;
    double residual = 0.0;  // |lhs - rhs| / |rhs|
    double kernel = 0.0;    // extra_term_kernel(s, k) / Gamma(s)
};
// sum_{n<=nmax} A+(n) n^{-s} + K sum A-(-n) n^{-s} against C L(s-lambda+1, chi_D) sum a(D n^2) n^{-s}, the
// right side expanded as a Dirichlet series and cut at the same nmax
RelationResult dirichlet_relation_check(const std::map<long, cplx>& A_plus, const std::map<long, cplx>& A_minus,
                                        const std::map<Rat, cplx>& a_plus, const LiftConstants& c, int k, double s,
                                        long nmax);

struct ProportionalityResult {
    cplx C = 0.0;
    double dispersion = 0.0;
    std::vector<cplx> ratios;
    std::vector<size_t> skipped;  // near-zero denominators
    std::vector<cplx> num, den;
};
ProportionalityResult proportionality(const std::vector<cplx>& num, const std::vector<cplx>& den, double zero_tol = 1e-12);
// Phi_1(E_{k/2}(., s)) against E_{2 lambda}(., 2s) on Gamma_0(2N)
ProportionalityResult eisenstein_proportionality(int k, double s, long N, const DirichletCharacter& chi,
                                                 const std::vector<cplx>& w_grid, const LiftOptions& opt = {},
                                                 double eisenstein_radius = 400.0);

// |Phi(i eta)| on eta in [lo, hi]; bounded means max |Phi| <= bound
struct BoundednessResult {
    double max_abs = 0.0;
    double spread = 0.0;  // max - min of |Phi| over the probes
    std::vector<double> eta;
};
BoundednessResult boundedness_probe(LiftFunction& phi, double lo = 5.0, double hi = 80.0, int probes = 5);

// ---- CSV report ----
struct ReportRow {
    std::string id;
    std::string params;
    cplx lhs = 0.0;
    cplx rhs = 0.0;
    double residual = 0.0;
    double budget = 0.0;
    bool pass = false;
};
double relative_residual(cplx lhs, cplx rhs);
ReportRow make_row(std::string id, std::string params, cplx lhs, cplx rhs, double budget);
std::string format_number(double x);  // 15 significant digits
std::string report_csv(const std::vector<ReportRow>& rows);
void write_report(const std::vector<ReportRow>& rows, const std::string& path);

}  // namespace thetalift
