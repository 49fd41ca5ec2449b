#include "thetalift/polynomial.hpp"

#include <algorithm>

#include "thetalift/arith.hpp"

namespace thetalift {

Polynomial3 Polynomial3::constant(cplx c) {
    Polynomial3 p;
    if (c != 0.0) p.terms_[{0, 0, 0}] = c;
    return p;
}

Polynomial3 Polynomial3::linear(const std::array<cplx, 3>& a) {
    Polynomial3 p;
    for (int i = 0; i < 3; ++i) {
        if (a[i] == 0.0) continue;
        Exp e{0, 0, 0};
        e[i] = 1;
        p.terms_[e] = a[i];
    }
    return p;
}

Polynomial3 Polynomial3::hermite_of(int nu, const std::array<cplx, 3>& a) {
    auto c = hermite_coeffs(nu);
    Polynomial3 lin = linear(a), power = constant(1.0), out;
    for (size_t k = 0; k < c.size(); ++k) {
        if (c[k] != 0.0) out += power * cplx(c[k]);
        power = power * lin;
    }
    return out;
}

Polynomial3& Polynomial3::operator+=(const Polynomial3& o) {
    for (const auto& [e, c] : o.terms_) terms_[e] += c;
    return *this;
}

Polynomial3 Polynomial3::operator+(const Polynomial3& o) const {
    Polynomial3 r = *this;
    r += o;
    return r;
}

Polynomial3 Polynomial3::operator*(const Polynomial3& o) const {
    Polynomial3 r;
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) r.terms_[{e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]}] += c1 * c2;
    return r;
}

Polynomial3 Polynomial3::operator*(cplx c) const {
    Polynomial3 r = *this;
    for (auto& [e, v] : r.terms_) v *= c;
    return r;
}

cplx Polynomial3::eval(const std::array<cplx, 3>& x) const {
    cplx s = 0.0;
    for (const auto& [e, c] : terms_) {
        cplx t = c;
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < e[i]; ++k) t *= x[i];
        s += t;
    }
    return s;
}

cplx Polynomial3::eval(const std::array<double, 3>& x) const { return eval(std::array<cplx, 3>{x[0], x[1], x[2]}); }

Polynomial3 Polynomial3::compose(const Eigen::Matrix3cd& A) const {
    std::array<Polynomial3, 3> rows;
    for (int i = 0; i < 3; ++i) rows[i] = linear({A(i, 0), A(i, 1), A(i, 2)});
    Polynomial3 out;
    for (const auto& [e, c] : terms_) {
        Polynomial3 t = constant(c);
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < e[i]; ++k) t = t * rows[i];
        out += t;
    }
    return out;
}

Polynomial3 Polynomial3::homogeneous(int degree) const {
    Polynomial3 r;
    for (const auto& [e, c] : terms_)
        if (e[0] + e[1] + e[2] == degree) r.terms_[e] = c;
    return r;
}

int Polynomial3::degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_)
        if (c != 0.0) d = std::max(d, e[0] + e[1] + e[2]);
    return d;
}

bool Polynomial3::is_zero(double tol) const {
    for (const auto& [e, c] : terms_)
        if (std::abs(c) > tol) return false;
    return true;
}

void Polynomial3::prune(double tol) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) <= tol)
            it = terms_.erase(it);
        else
            ++it;
    }
}

FlatPolynomial::FlatPolynomial(const Polynomial3& p) {
    for (const auto& [e, c] : p.terms()) {
        if (c == 0.0) continue;
        exps.push_back(e);
        coefs.push_back(c);
        max_exp = std::max({max_exp, e[0], e[1], e[2]});
    }
}

cplx FlatPolynomial::eval(double x0, double x1, double x2) const {
    double pw[3][16];
    const int n = max_exp + 1;
    pw[0][0] = pw[1][0] = pw[2][0] = 1.0;
    for (int k = 1; k < n && k < 16; ++k) {
        pw[0][k] = pw[0][k - 1] * x0;
        pw[1][k] = pw[1][k - 1] * x1;
        pw[2][k] = pw[2][k - 1] * x2;
    }
    cplx s = 0.0;
    for (size_t i = 0; i < coefs.size(); ++i) {
        const auto& e = exps[i];
        s += coefs[i] * (pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]]);
    }
    return s;
}

}  // namespace thetalift
