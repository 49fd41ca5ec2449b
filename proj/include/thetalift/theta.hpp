#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <map>
#include <vector>

#include "thetalift/arith.hpp"
#include "thetalift/lattice.hpp"
#include "thetalift/spherical.hpp"

namespace thetalift {

// Integer triples i with i^T A i <= bound, A symmetric positive definite.
// Points are grouped by the last coordinate; groups are visited in increasing order.
struct EllipsoidEnumerator {
    Eigen::Matrix3d A;
    double bound;
    EllipsoidEnumerator(const Eigen::Matrix3d& A_, double bound_);
    std::vector<long> outer_values() const;
    // visit every point with last coordinate i2; f(i0, i1, i2, q) where q = i^T A i
    template <class F>
    void for_each_in_slice(long i2, F&& f) const;

private:
    Eigen::Matrix3d R_;  // upper Cholesky factor
};

// Geometry of one evaluation point: V = 4Nv, W = 2Nw, g^{-1} = so_embed(sigma_W^{-1}).
struct KernelFrame {
    long N;
    cplx z, w;
    double V, U;
    Eigen::Matrix3d ginv;
    KernelFrame(long N_, cplx z_, cplx w_);
};

// Lambda(x, w) = (x1 - 4N w x2 + 4N^2 w^2 x3) / (4 eta)
cplx lambda_form(const std::array<long, 3>& x, cplx w, long N);

struct HeegnerPoint {
    long a, b, c;
    cplx w;
};
// integer triples with max-norm <= radius, x != 0, |Lambda(x, w)| < tol
std::vector<HeegnerPoint> find_singularities(long N, cplx w, long radius, double tol = 1e-9);

struct ThetaOptions {
    double cutoff = 50.0;  // Gaussian exponent bound, terms below e^{-cutoff} relative are dropped
    bool parallel = true;
};

struct ThetaValue {
    cplx value;
    double tail;  // crude bound from the outermost shell
    size_t terms;
};

class ThetaKernel {
public:
    // mu < 0 picks the smallest admissible mu
    ThetaKernel(long N, int k, int m, DirichletCharacter chi, int mu = -1);

    long N() const { return N_; }
    int k() const { return k_; }
    int m() const { return m_; }
    int lambda() const { return lambda_; }
    const DirichletCharacter& chi() const { return chi_; }
    const DirichletCharacter& chi1() const { return chi1_; }
    const SphericalFunction& spherical() const { return sf_; }
    // conj(chi1)-Gauss transform, index l mod 4N
    cplx weight(long l) const;
    // (32N^3)^{-1/2} i^lambda (4 eta)^{-m}
    cplx prefactor(double eta) const;

    ThetaValue eval(cplx z, cplx w, const ThetaOptions& opt = {}) const;
    // plain box scan in lexicographic order, kept as the reference implementation
    ThetaValue eval_serial_reference(cplx z, cplx w, const ThetaOptions& opt = {}) const;

    // theta(z, w) = sum_n A_n(v, w) e(n u); keys are n = b^2 - ac
    std::map<long, cplx> fourier_coefficients(double v, cplx w, const ThetaOptions& opt = {}) const;
    cplx fourier_form_eval(cplx z, cplx w, const ThetaOptions& opt = {}) const;

    const FlatPolynomial& flat_polynomial() const { return flat_; }

private:
    long N_;
    int k_, m_, lambda_;
    DirichletCharacter chi_, chi1_;
    SphericalFunction sf_;
    std::vector<cplx> gauss_;
    FlatPolynomial flat_;
};

// theta(z, w) with default options
cplx theta_eval(const ThetaKernel& tk, cplx z, cplx w, const ThetaOptions& opt = {});

// Unfolded series at w = i eta, coset sum over c <= depth.
struct NiwaOptions {
    long depth = 64;
    double cutoff = 46.0;
};
cplx niwa_unfolded_eval(long N, int k, const DirichletCharacter& chi, cplx z, double eta, const NiwaOptions& opt = {});

// N^{-k/2} z^{-k} f(-1/(Nz)) for integral k, N^{-k/2} (-iz)^{-k} f(-1/(Nz)) otherwise
cplx fricke_slash(const std::function<cplx(cplx)>& f, long N, double k, cplx z);

// v^{-k/4} sum_{x in L*} omega(x) (r(sigma_z, Q) f)(x)
cplx lattice_theta(const LatticeData& lat, const std::vector<cplx>& omega, const PolyGaussian& f, cplx z, int k,
                   double cutoff = 50.0);
// chi'(d) / chi(d) = (-1/d)^{(k-n)/2} (2/d)^n (B/d) ((-1)^q B, d)_inf
int shintani_character_factor(int k, int n, int q, long B, long d);

// ---- coset twists ----

// (c z + d)^{-k/2} theta(alpha z, w), through the Shintani transform on the 4N-rescaled lattice
class TwistedTheta {
public:
    TwistedTheta(const ThetaKernel& tk, const Mat2i& alpha);
    const Mat2i& alpha() const { return alpha_; }
    cplx eval(cplx z, cplx w, const ThetaOptions& opt = {}) const;
    // weight on cosets of Z/4 + Z/4 + Z/(16N) modulo N Z + Z/2 + Z/4, index (p, q, t)
    const std::vector<cplx>& weights() const { return weights_; }
    const LatticeData& lattice() const { return lat_; }
    // overall constant: (32N^3)^{-1/2} i^lambda (4N)^{3/4} sqrt(i)^{-sgn c}, without (4 eta)^{-m}
    cplx constant() const { return const_; }
    const ThetaKernel& kernel() const { return *tk_; }

    // all lattice terms with Gaussian exponent <= cutoff at (v, w):
    // f(n4, coef) with n = n4 / (4N) and theta = sum coef e(n u)
    void for_each_fourier_term(double v, cplx w, const ThetaOptions& opt,
                               const std::function<void(long, cplx)>& f) const;

    // v-dependence of one lattice term on the strip v >= 1:
    // sum_j C[j] v^{3/4 - k/4 + j/2} e^{-A v + 2 pi n v} e(n u), n = n4 / (4N)
    struct StripTerm {
        long n4;
        double A;
        std::vector<cplx> C;
    };
    // terms whose Gaussian exponent at v = 1 is <= bound, in a fixed order
    std::vector<StripTerm> strip_terms(cplx w, double bound) const;

private:
    const ThetaKernel* tk_;
    std::vector<FlatPolynomial> parts_;  // homogeneous parts of the spherical polynomial
    Mat2i alpha_;
    LatticeData lat_;
    std::vector<cplx> weights_;
    cplx const_;
};

}  // namespace thetalift

#include "thetalift/theta_impl.hpp"
