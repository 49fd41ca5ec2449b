#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace thetalift {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline const cplx I{0.0, 1.0};

// e(x) = exp(2 pi i x)
inline cplx e2pi(double x) { return std::polar(1.0, 2.0 * pi * x); }
inline cplx e2pi(cplx x) { return std::exp(2.0 * pi * I * x); }

struct Mat2i {
    long a = 1, b = 0, c = 0, d = 1;
    long det() const { return a * d - b * c; }
    Mat2i operator*(const Mat2i& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2i inverse() const { return {d, -b, -c, a}; }
    bool operator==(const Mat2i&) const = default;
};

struct Mat2 {
    double a = 1, b = 0, c = 0, d = 1;
    Mat2() = default;
    Mat2(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}
    explicit Mat2(const Mat2i& m) : a(double(m.a)), b(double(m.b)), c(double(m.c)), d(double(m.d)) {}
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 inverse() const {
        double dt = a * d - b * c;
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
    double det() const { return a * d - b * c; }
};

inline cplx mobius(const Mat2& g, cplx z) { return (g.a * z + g.b) / (g.c * z + g.d); }
inline cplx mobius(const Mat2i& g, cplx z) { return mobius(Mat2(g), z); }

enum class ErrorKind { Domain, Convergence, Singularity, Config, MissingData };

class Error : public std::runtime_error {
public:
    Error(ErrorKind k, const std::string& what, double achieved = 0.0)
        : std::runtime_error(what), kind_(k), achieved_(achieved) {}
    ErrorKind kind() const { return kind_; }
    // achieved error bound for convergence failures
    double achieved() const { return achieved_; }

private:
    ErrorKind kind_;
    double achieved_;
};

}  // namespace thetalift
