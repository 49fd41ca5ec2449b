#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <string>
#include <vector>

#include "thetalift/forms.hpp"
#include "thetalift/theta.hpp"

namespace thetalift {

// F_t = {|z| >= 1, |Re z| <= 1/2, Im z <= t}; t = infinity allowed
struct TruncatedDomain {
    double t = std::numeric_limits<double>::infinity();
    bool contains(cplx z) const;
};

struct RegularizedValue {
    cplx value = 0.0;              // constant term of the Laurent expansion at s = 0
    std::map<int, cplx> poles;     // order -> coefficient of s^{-order}
    cplx lower = 0.0;              // part below height 1
    cplx strip_closed = 0.0;       // closed-form tail terms
    cplx strip_numeric = 0.0;      // tail terms integrated numerically
    double quad_error = 0.0;       // estimate for the part below height 1
    bool fitted = false;           // tail asymptotics were fitted, not declared
    size_t strip_terms = 0;
};

// c v^delta e^{-A v}, A >= 0
struct AsymptoticTerm {
    cplx c;
    double delta;
    double A = 0.0;
};

// int_1^inf v^{delta - 2 - s} e^{-A v} dv continued to s = 0: {constant term, residue}
std::pair<double, double> tail_integral(double delta, double A);

struct QuadOptions {
    double tol = 1e-8;  // absolute, part below height 1
    int min_nodes = 16;
    int max_nodes = 64;
};

// Integral of F dudv/v^2 over the fundamental domain, regularized; asym describes the u-average of F on v >= 1.
// Without asym the tail is fitted on [t0, 2 t0] as a single power.
RegularizedValue regularized_integral(const std::function<cplx(cplx)>& F, const std::vector<AsymptoticTerm>& asym,
                                      const QuadOptions& q = {}, double t0 = 8.0);
RegularizedValue regularized_integral(const std::function<cplx(cplx)>& F, const QuadOptions& q = {}, double t0 = 8.0);

// plain integral over F_t with t finite, 2-D Gauss-Legendre panels; oracle for the tail handling
cplx truncated_integral(const std::function<cplx(cplx)>& F, const TruncatedDomain& dom, int nodes = 24);

struct LiftOptions {
    ThetaOptions theta;
    QuadOptions quad;
    ExtractOptions extract;
    double singular_tol = 1e-6;  // refuse if 16 pi |ell|^2 is this close to 0 at a growing frequency
};

// Phi(g)(w); g needs level 4N, weight k/2 and the kernel's character. Coset data are extracted when missing.
RegularizedValue lift_phi(const WeakMaassForm& g, const ThetaKernel& tk, cplx w, const LiftOptions& opt = {});
// Phi(g_D)(w / D), tk at level 4ND
RegularizedValue lift_phi_D(const WeakMaassForm& g, long D, const ThetaKernel& tk, cplx w, const LiftOptions& opt = {});

// shared preparation for repeated lifts of one form (finite differences in w)
class LiftContext {
public:
    LiftContext(const WeakMaassForm& g, const ThetaKernel& tk, const LiftOptions& opt = {});
    RegularizedValue operator()(cplx w) const;
    const WeakMaassForm& form() const { return g_; }

private:
    WeakMaassForm g_;
    const ThetaKernel* tk_;
    LiftOptions opt_;
    CosetSystem cs_;
    std::vector<TwistedTheta> twisted_;
    std::vector<std::map<Rat, std::vector<FourierTerm>>> by_n_;
    std::vector<double> growth_;  // largest 2 pi |n| over growing frequencies, per coset

    // w-independent data, filled on first use
    struct ProfileGrid {
        std::vector<double> v, wt, val;  // Gauss-Legendre nodes on [1, vmax], profile * e^{2 pi n v}
    };
    std::map<std::tuple<Rat, int, double>, ProfileGrid> grids_;
    mutable std::map<int, std::vector<std::vector<cplx>>> gnodes_;  // g_alpha at the lower nodes
    mutable std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
    const std::vector<std::vector<cplx>>& form_at_nodes(int n) const;
};

}  // namespace thetalift
