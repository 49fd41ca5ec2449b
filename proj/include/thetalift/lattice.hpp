#pragma once

#include <Eigen/Dense>
#include <boost/rational.hpp>
#include <functional>
#include <vector>

#include "thetalift/arith.hpp"
#include "thetalift/common.hpp"
#include "thetalift/polynomial.hpp"

namespace thetalift {

using Rat = boost::rational<long long>;
using RatVec = std::vector<Rat>;

// Dense n x n rational matrix, row-major.
struct RatMat {
    int n = 0;
    std::vector<Rat> v;
    RatMat() = default;
    explicit RatMat(int n_) : n(n_), v(size_t(n_) * n_, Rat(0)) {}
    Rat& operator()(int i, int j) { return v[size_t(i) * n + j]; }
    const Rat& operator()(int i, int j) const { return v[size_t(i) * n + j]; }
    RatMat operator*(const RatMat& o) const;
    RatMat transpose() const;
    bool operator==(const RatMat& o) const { return n == o.n && v == o.v; }
    Eigen::MatrixXd to_double() const;
};

inline double to_double(const Rat& r) { return double(r.numerator()) / double(r.denominator()); }

class QuadraticSpace {
public:
    QuadraticSpace() = default;
    explicit QuadraticSpace(RatMat gram);

    int dim() const { return gram_.n; }
    const RatMat& gram() const { return gram_; }
    const Eigen::MatrixXd& gram_double() const { return gram_d_; }
    int p() const { return p_; }
    int q() const { return q_; }
    Rat det() const;

private:
    RatMat gram_;
    Eigen::MatrixXd gram_d_;
    int p_ = 0, q_ = 0;
};

Rat inner_product(const RatVec& x, const RatVec& y, const QuadraticSpace& Q);
double inner_product(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const QuadraticSpace& Q);

// (2/N)[[0,0,-2],[0,1,0],[-2,0,0]], i.e. <x,x> = (2/N)(x2^2 - 4 x1 x3)
QuadraticSpace level_space(long N);

// L = (+) s_i Z inside a space whose Gram matrix is monomial, so that
// L* = (+) d_i Z is again diagonal-rescaled.
class LatticeData {
public:
    LatticeData(QuadraticSpace space, RatVec scalings);

    const QuadraticSpace& space() const { return space_; }
    int dim() const { return space_.dim(); }
    const RatVec& scalings() const { return s_; }
    const RatVec& dual_scalings() const { return d_; }
    const std::vector<long>& periods() const { return periods_; }
    // det(<l_i, l_j>) over the basis s_i e_i
    Rat B() const { return B_; }
    // Euclidean covolume
    Rat volume() const { return vol_; }
    bool is_even() const;

    size_t num_cosets() const { return ncos_; }
    // canonical representative of coset idx: (k_i d_i), 0 <= k_i < period_i, lex order
    RatVec coset_rep(size_t idx) const;
    std::vector<long> coset_digits(size_t idx) const;
    size_t coset_index(const std::vector<long>& digits) const;
    // index of the coset containing x in L*; throws Domain if x is not in L*
    size_t coset_of(const RatVec& x) const;

private:
    QuadraticSpace space_;
    RatVec s_, d_;
    std::vector<long> periods_;
    Rat B_, vol_;
    size_t ncos_ = 1;
};

// L = 4N Z + N Z + (N/4) Z with the level-N form; L* = Z + Z/2 + Z/16.
LatticeData level_lattice(long N);
// 4N-rescaled form on N Z + Z/2 + Z/4, dual Z/4 + Z/4 + Z/(16N).
LatticeData twisted_lattice(long N);

// omega on L*/L together with the character of its permutation property.
struct PermutationWeight {
    const LatticeData* lattice = nullptr;
    std::vector<cplx> values;
    DirichletCharacter character;
    cplx operator()(size_t coset) const { return values[coset]; }
};

// omega(k) = conj(chi1)(k_1) if k in Z + NZ + (N/4)Z, else 0, on level_lattice(N).
PermutationWeight level_weight(const LatticeData& lat, long N, const DirichletCharacter& chi1);
// Largest violation of the first permutation property over all cosets and
// all d coprime to the modulus.
double first_permutation_defect(const PermutationWeight& w);

// ---- SL2(R) side ----

Mat2 sigma_matrix(cplx z);
Mat2 kappa_matrix(double phi);
// phi with e^{-i phi} = J(g,z)/|J(g,z)|, in (-pi, pi]
double sigma_kappa_decompose(const Mat2& g, cplx z);
// diag(t, 1/t) g diag(1/t, t)
Mat2 conjugate_by_scaling(const Mat2& g, double t);

Eigen::Matrix3d so_embed(const Mat2& g);
RatMat so_embed_exact(const Rat& a, const Rat& b, const Rat& c, const Rat& d);

// ---- Weil representation on P(x) exp(-pi x^T M x) ----

struct PolyGaussian {
    int n = 3;
    Polynomial3 P;
    Eigen::MatrixXcd M;  // complex symmetric, Re M > 0

    cplx eval(const Eigen::VectorXd& x) const;
    // x -> f(A x)
    PolyGaussian pullback(const Eigen::MatrixXd& A) const;
};

// (r(g,Q) f) as a PolyGaussian; g must be upper triangular
PolyGaussian weil_action_upper(const Mat2& g, const QuadraticSpace& Q, const PolyGaussian& f);
// (r(g,Q) f)(x) for any g; c != 0 uses tensor Gauss-Hermite after completing the square
cplx weil_action(const Mat2& g, const QuadraticSpace& Q, const PolyGaussian& f, const Eigen::VectorXd& x);

// probabilists' Gauss-Hermite rule, weights normalised to sum 1
struct GaussHermite {
    std::vector<double> nodes, weights;
};
const GaussHermite& gauss_hermite(int order);

// ---- Shintani coefficients ----

struct ShintaniOptions {
    double max_terms = 2e8;  // bound on |c|^n * (rows) * |L*/L|
};

cplx shintani_coeff(size_t h, size_t j, const Mat2i& g, const LatticeData& lat, const ShintaniOptions& opt = {});
Eigen::MatrixXcd shintani_matrix(const Mat2i& g, const LatticeData& lat, const ShintaniOptions& opt = {});
// row vector omega * [c(h,j)]: only rows with omega(h) != 0 are summed
std::vector<cplx> shintani_transform(const std::vector<cplx>& omega, const Mat2i& g, const LatticeData& lat,
                                     const ShintaniOptions& opt = {});

}  // namespace thetalift
