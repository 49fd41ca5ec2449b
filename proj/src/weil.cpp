#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "thetalift/lattice.hpp"

namespace thetalift {

namespace {

Eigen::Matrix3cd pad3(const Eigen::MatrixXd& A) {
    Eigen::Matrix3cd m = Eigen::Matrix3cd::Identity();
    m.topLeftCorner(A.rows(), A.cols()) = A.cast<cplx>();
    return m;
}

std::array<cplx, 3> pad3(const Eigen::VectorXcd& x) {
    std::array<cplx, 3> r{0.0, 0.0, 0.0};
    for (int i = 0; i < x.size(); ++i) r[i] = x(i);
    return r;
}

// complex symmetric A = L L^T, no pivoting
Eigen::MatrixXcd symmetric_cholesky(const Eigen::MatrixXcd& A) {
    const int n = int(A.rows());
    Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        cplx s = A(j, j);
        for (int k = 0; k < j; ++k) s -= L(j, k) * L(j, k);
        if (std::abs(s) < 1e-300) throw Error(ErrorKind::Convergence, "weil_action: singular Gaussian covariance");
        L(j, j) = std::sqrt(s);
        for (int i = j + 1; i < n; ++i) {
            cplx t = A(i, j);
            for (int k = 0; k < j; ++k) t -= L(i, k) * L(j, k);
            L(i, j) = t / L(j, j);
        }
    }
    return L;
}

long long frac_mod(long long t, long long m) {
    long long r = t % m;
    return r < 0 ? r + m : r;
}

}  // namespace

cplx PolyGaussian::eval(const Eigen::VectorXd& x) const {
    Eigen::VectorXcd xc = x.cast<cplx>();
    cplx q = (xc.transpose() * M * xc)(0, 0);
    return P.eval(pad3(xc)) * std::exp(-pi * q);
}

PolyGaussian PolyGaussian::pullback(const Eigen::MatrixXd& A) const {
    PolyGaussian r;
    r.n = n;
    r.P = P.compose(pad3(A));
    r.M = A.transpose().cast<cplx>() * M * A.cast<cplx>();
    return r;
}

const GaussHermite& gauss_hermite(int order) {
    static std::mutex mu;
    static std::map<int, GaussHermite> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(double(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    GaussHermite gh;
    for (int i = 0; i < order; ++i) {
        gh.nodes.push_back(es.eigenvalues()(i));
        double v0 = es.eigenvectors()(0, i);
        gh.weights.push_back(v0 * v0);
    }
    return cache.emplace(order, std::move(gh)).first->second;
}

PolyGaussian weil_action_upper(const Mat2& g, const QuadraticSpace& Q, const PolyGaussian& f) {
    if (g.c != 0.0) throw Error(ErrorKind::Domain, "weil_action_upper: lower-left entry must vanish");
    const int n = Q.dim();
    Eigen::MatrixXd A = g.a * Eigen::MatrixXd::Identity(n, n);
    PolyGaussian r = f.pullback(A);
    r.P = r.P * cplx(std::pow(std::fabs(g.a), 0.5 * n));
    r.M -= I * (g.a * g.b) * Q.gram_double().cast<cplx>();
    return r;
}

cplx weil_action(const Mat2& g, const QuadraticSpace& Q, const PolyGaussian& f, const Eigen::VectorXd& x) {
    const int n = Q.dim();
    if (x.size() != n || f.n != n) throw Error(ErrorKind::Domain, "weil_action: dimension mismatch");
    if (g.c == 0.0) return weil_action_upper(g, Q, f).eval(x);

    const Eigen::MatrixXcd Qc = Q.gram_double().cast<cplx>();
    const Eigen::VectorXcd xc = x.cast<cplx>();
    Eigen::MatrixXcd K = f.M - I * (g.d / g.c) * Qc;
    Eigen::VectorXcd b = -I * (Qc * xc) / g.c;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(K);
    Eigen::VectorXcd y0 = lu.solve(b);
    Eigen::MatrixXcd cov = lu.inverse() / (2.0 * pi);
    Eigen::MatrixXcd L = symmetric_cholesky(cov);

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(K);
    cplx det_pow = 1.0;
    for (int i = 0; i < n; ++i) det_pow /= std::sqrt(es.eigenvalues()(i));

    const int deg = std::max(f.P.degree(), 0);
    const int order = deg / 2 + 1;
    if (order > 64)
        throw Error(ErrorKind::Convergence, "weil_action: polynomial degree exceeds the Gauss-Hermite cap", double(deg));
    const GaussHermite& gh = gauss_hermite(order);

    cplx expect = 0.0;
    std::vector<int> idx(n, 0);
    Eigen::VectorXcd xi(n);
    while (true) {
        double w = 1.0;
        for (int i = 0; i < n; ++i) {
            xi(i) = gh.nodes[idx[i]];
            w *= gh.weights[idx[i]];
        }
        Eigen::VectorXcd y = y0 + L * xi;
        expect += w * f.P.eval(pad3(y));
        int k = n - 1;
        while (k >= 0 && ++idx[k] == order) idx[k--] = 0;
        if (k < 0) break;
    }

    double xqx = x.dot(Q.gram_double() * x);
    cplx pref = std::sqrt(std::fabs(to_double(Q.det()))) * std::pow(std::fabs(g.c), -0.5 * n) *
                e2pi(g.a * xqx / (2.0 * g.c)) * std::exp(pi * cplx((b.transpose() * y0)(0, 0)));
    return pref * det_pow * expect;
}

namespace {

struct IntForm {
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> G;  // Gram in dual-digit coordinates times den
    long long den = 1;
};

IntForm integer_form(const LatticeData& lat) {
    const int n = lat.dim();
    const auto& d = lat.dual_scalings();
    long long den = 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) den = std::lcm(den, (lat.space().gram()(i, j) * d[i] * d[j]).denominator());
    IntForm f;
    f.den = den;
    f.G.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rat g = lat.space().gram()(i, j) * d[i] * d[j] * Rat(den);
            f.G(i, j) = g.numerator();
        }
    return f;
}

long long qform(const IntForm& F, const long long* u, const long long* w, int n) {
    long long s = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (F.G(i, j)) s += u[i] * F.G(i, j) * w[j];
    return s;
}

void check_size(const Mat2i& g, const LatticeData& lat, size_t rows, const ShintaniOptions& opt) {
    double terms = std::pow(double(std::labs(g.c)), lat.dim()) * double(rows) * double(lat.num_cosets());
    if (terms > opt.max_terms)
        throw Error(ErrorKind::Config, "shintani: enumeration of L/cL exceeds the configured size bound", terms);
}

// row h of [c(h,j)], all j
void shintani_row(size_t h, const Mat2i& g, const LatticeData& lat, const IntForm& F, cplx* out) {
    const int n = lat.dim();
    const size_t ncos = lat.num_cosets();
    auto hd = lat.coset_digits(h);
    long long hu[3], ju[3];
    for (int i = 0; i < n; ++i) hu[i] = hd[i];
    if (g.c == 0) {
        for (size_t j = 0; j < ncos; ++j) out[j] = 0.0;
        if (std::labs(g.a) != 1) throw Error(ErrorKind::Domain, "shintani: c = 0 requires a = +-1");
        std::vector<long> jd(n);
        for (int i = 0; i < n; ++i) {
            jd[i] = long(g.d * hu[i]);
            ju[i] = g.d * hu[i];
        }
        size_t j = lat.coset_index(jd);
        long long t = g.a * g.b * qform(F, hu, ju, n);
        long long m = 2 * F.den;
        out[j] = e2pi(double(frac_mod(t, m)) / double(m));
        return;
    }
    const long C = std::labs(g.c);
    const long long m = 2 * C * F.den;
    const double sgn = g.c > 0 ? 1.0 : -1.0;
    const auto& per = lat.periods();
    const double pref = 1.0 / std::sqrt(std::fabs(to_double(lat.space().det()))) / to_double(lat.volume()) *
                        std::pow(double(C), -0.5 * n);
    size_t nr = 1;
    for (int i = 0; i < n; ++i) nr *= size_t(C);
    for (size_t j = 0; j < ncos; ++j) {
        auto jd = lat.coset_digits(j);
        for (int i = 0; i < n; ++i) ju[i] = jd[i];
        long long jj = qform(F, ju, ju, n);
        cplx s = 0.0;
        for (size_t r = 0; r < nr; ++r) {
            long long u[3];
            size_t rr = r;
            for (int i = n - 1; i >= 0; --i) {
                u[i] = hu[i] + (long long)(rr % size_t(C)) * per[i];
                rr /= size_t(C);
            }
            long long t = g.a * qform(F, u, u, n) - 2 * qform(F, ju, u, n) + g.d * jj;
            s += e2pi(sgn * double(frac_mod(t, m)) / double(m));
        }
        out[j] = pref * s;
    }
}

}  // namespace

cplx shintani_coeff(size_t h, size_t j, const Mat2i& g, const LatticeData& lat, const ShintaniOptions& opt) {
    if (g.det() != 1) throw Error(ErrorKind::Domain, "shintani: det != 1");
    check_size(g, lat, 1, opt);
    std::vector<cplx> row(lat.num_cosets());
    shintani_row(h, g, lat, integer_form(lat), row.data());
    return row[j];
}

Eigen::MatrixXcd shintani_matrix(const Mat2i& g, const LatticeData& lat, const ShintaniOptions& opt) {
    if (g.det() != 1) throw Error(ErrorKind::Domain, "shintani: det != 1");
    const size_t n = lat.num_cosets();
    check_size(g, lat, n, opt);
    IntForm F = integer_form(lat);
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> C(n, n);
#pragma omp parallel for schedule(dynamic)
    for (long h = 0; h < long(n); ++h) shintani_row(size_t(h), g, lat, F, C.row(h).data());
    return C;
}

std::vector<cplx> shintani_transform(const std::vector<cplx>& omega, const Mat2i& g, const LatticeData& lat,
                                     const ShintaniOptions& opt) {
    if (g.det() != 1) throw Error(ErrorKind::Domain, "shintani: det != 1");
    const size_t n = lat.num_cosets();
    if (omega.size() != n) throw Error(ErrorKind::Domain, "shintani_transform: weight size mismatch");
    std::vector<size_t> rows;
    for (size_t h = 0; h < n; ++h)
        if (omega[h] != 0.0) rows.push_back(h);
    check_size(g, lat, rows.size(), opt);
    IntForm F = integer_form(lat);
    std::vector<std::vector<cplx>> R(rows.size(), std::vector<cplx>(n));
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < long(rows.size()); ++i) shintani_row(rows[i], g, lat, F, R[i].data());
    std::vector<cplx> out(n, 0.0);
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < n; ++j) out[j] += omega[rows[i]] * R[i][j];
    return out;
}

}  // namespace thetalift
