#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <vector>

#include "thetalift/common.hpp"

namespace thetalift {

// Polynomial in up to three variables with complex coefficients.
class Polynomial3 {
public:
    using Exp = std::array<int, 3>;

    Polynomial3() = default;
    static Polynomial3 constant(cplx c);
    // the linear form a0 x0 + a1 x1 + a2 x2
    static Polynomial3 linear(const std::array<cplx, 3>& a);
    // He_nu(linear form)
    static Polynomial3 hermite_of(int nu, const std::array<cplx, 3>& a);

    Polynomial3& operator+=(const Polynomial3& o);
    Polynomial3 operator+(const Polynomial3& o) const;
    Polynomial3 operator*(const Polynomial3& o) const;
    Polynomial3 operator*(cplx c) const;

    cplx eval(const std::array<cplx, 3>& x) const;
    cplx eval(const std::array<double, 3>& x) const;
    // P(A x)
    Polynomial3 compose(const Eigen::Matrix3cd& A) const;
    Polynomial3 homogeneous(int degree) const;
    int degree() const;
    bool is_zero(double tol = 0.0) const;
    void prune(double tol);

    const std::map<Exp, cplx>& terms() const { return terms_; }

private:
    std::map<Exp, cplx> terms_;
};

// Flattened form for fast evaluation in inner loops.
struct FlatPolynomial {
    std::vector<Polynomial3::Exp> exps;
    std::vector<cplx> coefs;
    int max_exp = 0;
    explicit FlatPolynomial(const Polynomial3& p);
    FlatPolynomial() = default;
    cplx eval(double x0, double x1, double x2) const;
};

}  // namespace thetalift
