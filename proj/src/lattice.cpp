#include <algorithm>
#include <cmath>
#include <numeric>

#include "thetalift/lattice.hpp"

namespace thetalift {

RatMat RatMat::operator*(const RatMat& o) const {
    RatMat r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rat s(0);
            for (int k = 0; k < n; ++k) s += (*this)(i, k) * o(k, j);
            r(i, j) = s;
        }
    return r;
}

RatMat RatMat::transpose() const {
    RatMat r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r(i, j) = (*this)(j, i);
    return r;
}

Eigen::MatrixXd RatMat::to_double() const {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = thetalift::to_double((*this)(i, j));
    return m;
}

namespace {

Rat det_rat(const RatMat& m) {
    if (m.n == 1) return m(0, 0);
    if (m.n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    if (m.n == 3)
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
               m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    throw Error(ErrorKind::Domain, "determinant: dimension above 3 not supported");
}

Rat rabs(const Rat& r) { return r < Rat(0) ? -r : r; }

bool is_integer(const Rat& r) { return r.denominator() == 1; }

}  // namespace

QuadraticSpace::QuadraticSpace(RatMat gram) : gram_(std::move(gram)) {
    if (gram_.n < 1 || gram_.n > 3) throw Error(ErrorKind::Domain, "quadratic space: dimension must be 1..3");
    for (int i = 0; i < gram_.n; ++i)
        for (int j = 0; j < i; ++j)
            if (gram_(i, j) != gram_(j, i)) throw Error(ErrorKind::Domain, "quadratic space: Gram matrix not symmetric");
    if (det_rat(gram_) == Rat(0)) throw Error(ErrorKind::Domain, "quadratic space: degenerate Gram matrix");
    gram_d_ = gram_.to_double();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram_d_);
    for (int i = 0; i < gram_.n; ++i) (es.eigenvalues()(i) > 0 ? p_ : q_)++;
}

Rat QuadraticSpace::det() const { return det_rat(gram_); }

Rat inner_product(const RatVec& x, const RatVec& y, const QuadraticSpace& Q) {
    int n = Q.dim();
    if (int(x.size()) != n || int(y.size()) != n) throw Error(ErrorKind::Domain, "inner_product: dimension mismatch");
    Rat s(0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (Q.gram()(i, j) != Rat(0)) s += x[i] * Q.gram()(i, j) * y[j];
    return s;
}

double inner_product(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const QuadraticSpace& Q) {
    if (x.size() != Q.dim() || y.size() != Q.dim()) throw Error(ErrorKind::Domain, "inner_product: dimension mismatch");
    return x.dot(Q.gram_double() * y);
}

QuadraticSpace level_space(long N) {
    if (N < 1) throw Error(ErrorKind::Config, "level must be positive");
    RatMat g(3);
    g(1, 1) = Rat(2, N);
    g(0, 2) = g(2, 0) = Rat(-4, N);
    return QuadraticSpace(g);
}

LatticeData::LatticeData(QuadraticSpace space, RatVec scalings) : space_(std::move(space)), s_(std::move(scalings)) {
    const int n = space_.dim();
    if (int(s_.size()) != n) throw Error(ErrorKind::Domain, "lattice: one scaling per coordinate required");
    const RatMat& Q = space_.gram();
    d_.assign(n, Rat(0));
    for (int i = 0; i < n; ++i) {
        if (s_[i] == Rat(0)) throw Error(ErrorKind::Domain, "lattice: zero scaling");
        int col = -1;
        for (int j = 0; j < n; ++j)
            if (Q(i, j) != Rat(0)) {
                if (col >= 0) throw Error(ErrorKind::Domain, "lattice: Gram matrix must be monomial");
                col = j;
            }
        d_[col] = rabs(Rat(1) / (Q(i, col) * s_[i]));
    }
    periods_.resize(n);
    for (int i = 0; i < n; ++i) {
        Rat p = rabs(s_[i]) / d_[i];
        if (!is_integer(p)) throw Error(ErrorKind::Domain, "lattice: L is not contained in its dual");
        periods_[i] = long(p.numerator());
        ncos_ *= size_t(periods_[i]);
    }
    Rat s2(1);
    vol_ = Rat(1);
    for (int i = 0; i < n; ++i) {
        s2 *= s_[i] * s_[i];
        vol_ *= rabs(s_[i]);
    }
    B_ = space_.det() * s2;
}

bool LatticeData::is_even() const {
    const RatMat& Q = space_.gram();
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j) {
            Rat g = s_[i] * Q(i, j) * s_[j];
            if (!is_integer(g)) return false;
            if (i == j && g.numerator() % 2 != 0) return false;
        }
    return true;
}

std::vector<long> LatticeData::coset_digits(size_t idx) const {
    std::vector<long> k(dim());
    for (int i = dim() - 1; i >= 0; --i) {
        k[i] = long(idx % size_t(periods_[i]));
        idx /= size_t(periods_[i]);
    }
    return k;
}

size_t LatticeData::coset_index(const std::vector<long>& digits) const {
    size_t idx = 0;
    for (int i = 0; i < dim(); ++i) {
        long k = digits[i] % periods_[i];
        if (k < 0) k += periods_[i];
        idx = idx * size_t(periods_[i]) + size_t(k);
    }
    return idx;
}

RatVec LatticeData::coset_rep(size_t idx) const {
    auto k = coset_digits(idx);
    RatVec x(dim());
    for (int i = 0; i < dim(); ++i) x[i] = Rat(k[i]) * d_[i];
    return x;
}

size_t LatticeData::coset_of(const RatVec& x) const {
    std::vector<long> k(dim());
    for (int i = 0; i < dim(); ++i) {
        Rat q = x[i] / d_[i];
        if (!is_integer(q)) throw Error(ErrorKind::Domain, "coset_of: point not in the dual lattice");
        k[i] = long(q.numerator());
    }
    return coset_index(k);
}

LatticeData level_lattice(long N) { return LatticeData(level_space(N), {Rat(4 * N), Rat(N), Rat(N, 4)}); }

LatticeData twisted_lattice(long N) {
    if (N < 1) throw Error(ErrorKind::Config, "level must be positive");
    RatMat g(3);
    g(1, 1) = Rat(8);
    g(0, 2) = g(2, 0) = Rat(-16);
    return LatticeData(QuadraticSpace(g), {Rat(N), Rat(1, 2), Rat(1, 4)});
}

PermutationWeight level_weight(const LatticeData& lat, long N, const DirichletCharacter& chi1) {
    PermutationWeight w{&lat, std::vector<cplx>(lat.num_cosets(), 0.0), chi1.conj()};
    const RatVec sub{Rat(1), Rat(N), Rat(N, 4)};
    for (size_t i = 0; i < lat.num_cosets(); ++i) {
        RatVec x = lat.coset_rep(i);
        bool inside = true;
        for (int c = 0; c < 3; ++c) inside = inside && is_integer(x[c] / sub[c]);
        if (inside) w.values[i] = std::conj(chi1(long(x[0].numerator())));
    }
    return w;
}

double first_permutation_defect(const PermutationWeight& w) {
    const LatticeData& lat = *w.lattice;
    const long M = w.character.modulus();
    double defect = 0.0;
    for (size_t i = 0; i < lat.num_cosets(); ++i) {
        RatVec x = lat.coset_rep(i);
        Rat n = inner_product(x, x, lat.space());
        bool even = is_integer(n) && n.numerator() % 2 == 0;
        if (!even) defect = std::max(defect, std::abs(w.values[i]));
        auto k = lat.coset_digits(i);
        for (long d = 1; d < M; ++d) {
            if (std::gcd(d, M) != 1) continue;
            std::vector<long> kd(k);
            for (auto& v : kd) v *= d;
            defect = std::max(defect, std::abs(w.values[lat.coset_index(kd)] - w.character(d) * w.values[i]));
        }
    }
    return defect;
}

Mat2 sigma_matrix(cplx z) {
    double sv = std::sqrt(z.imag());
    return {sv, z.real() / sv, 0.0, 1.0 / sv};
}

Mat2 kappa_matrix(double phi) { return {std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi)}; }

double sigma_kappa_decompose(const Mat2& g, cplx z) {
    if (!(z.imag() > 0)) throw Error(ErrorKind::Domain, "sigma_kappa_decompose: z must lie in the upper half-plane");
    return -std::arg(g.c * z + g.d);
}

Mat2 conjugate_by_scaling(const Mat2& g, double t) { return {g.a, g.b * t * t, g.c / (t * t), g.d}; }

Eigen::Matrix3d so_embed(const Mat2& g) {
    Eigen::Matrix3d m;
    m << g.a * g.a, g.a * g.b, g.b * g.b, 2 * g.a * g.c, g.a * g.d + g.b * g.c, 2 * g.b * g.d, g.c * g.c, g.c * g.d,
        g.d * g.d;
    return m;
}

RatMat so_embed_exact(const Rat& a, const Rat& b, const Rat& c, const Rat& d) {
    RatMat m(3);
    m(0, 0) = a * a;
    m(0, 1) = a * b;
    m(0, 2) = b * b;
    m(1, 0) = Rat(2) * a * c;
    m(1, 1) = a * d + b * c;
    m(1, 2) = Rat(2) * b * d;
    m(2, 0) = c * c;
    m(2, 1) = c * d;
    m(2, 2) = d * d;
    return m;
}

}  // namespace thetalift
