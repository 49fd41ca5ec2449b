#include "thetalift/checks.hpp"

#include <numeric>

namespace thetalift {

std::vector<Mat2i> gamma0_elements(long M, size_t count) {
    std::vector<Mat2i> out{{1, 1, 0, 1}, {1, 0, M, 1}};
    for (long c = M; out.size() < count; c += M)
        for (long sgn : {1L, -1L}) {
            if (out.size() >= count) break;
            // smallest d > 1 coprime to c, then a d - b c = 1
            long d = 2;
            while (std::gcd(d, c) != 1) ++d;
            long a = 0, b = 0;
            for (long t = 1; t <= c; ++t)
                if ((t * d - 1) % c == 0) {
                    a = t;
                    b = (t * d - 1) / c;
                    break;
                }
            out.push_back(sgn > 0 ? Mat2i{a, b, c, d} : Mat2i{a, -b, -c, d});
        }
    return out;
}

CheckValue kernel_z_modularity(const ThetaKernel& tk, cplx z, cplx w, const std::vector<Mat2i>& gammas) {
    const cplx t = tk.eval(z, w).value;
    CheckValue worst;
    for (const auto& g : gammas) {
        if (g.det() != 1 || g.c % (4 * tk.N()) != 0) throw Error(ErrorKind::Domain, "z-modularity: g not in Gamma_0(4N)");
        cplx lhs = std::pow(theta_multiplier(g, z), -tk.k()) * tk.eval(mobius(g, z), w).value;
        cplx rhs = tk.chi()(g.d) * t;
        double r = std::abs(lhs - rhs) / std::abs(rhs);
        if (!(r <= worst.residual)) worst = {lhs, rhs, r};
    }
    return worst;
}

CheckValue kernel_w_modularity(const ThetaKernel& tk, cplx z, cplx w, const std::vector<Mat2i>& gammas) {
    const cplx t = std::conj(tk.eval(z, w).value);
    CheckValue worst;
    for (const auto& g : gammas) {
        if (g.det() != 1 || g.c % (2 * tk.N()) != 0) throw Error(ErrorKind::Domain, "w-modularity: g not in Gamma_0(2N)");
        cplx lhs = std::conj(tk.eval(z, mobius(g, w)).value);
        cplx chi2 = tk.chi()(g.d) * tk.chi()(g.d);
        cplx rhs = chi2 * std::pow(double(g.c) * w + double(g.d), 2 * tk.m()) * t;
        double r = std::abs(lhs - rhs) / std::abs(rhs);
        if (!(r <= worst.residual)) worst = {lhs, rhs, r};
    }
    return worst;
}

CheckValue kernel_pde_residual(const ThetaKernel& tk, cplx z, cplx w, double h0) {
    const double k = tk.k(), m = tk.m();
    auto T = [&](cplx zz, cplx ww) { return tk.eval(zz, ww).value; };
    const cplx t = T(z, w);
    auto defect = [&](double h) {
        cplx tu = (T(z + h, w) - T(z - h, w)) / (2 * h), tv = (T(z + I * h, w) - T(z - I * h, w)) / (2 * h);
        cplx tuu = (T(z + h, w) - 2.0 * t + T(z - h, w)) / (h * h);
        cplx tvv = (T(z + I * h, w) - 2.0 * t + T(z - I * h, w)) / (h * h);
        cplx tx = (T(z, w + h) - T(z, w - h)) / (2 * h), ty = (T(z, w + I * h) - T(z, w - I * h)) / (2 * h);
        cplx txx = (T(z, w + h) - 2.0 * t + T(z, w - h)) / (h * h);
        cplx tyy = (T(z, w + I * h) - 2.0 * t + T(z, w - I * h)) / (h * h);
        double v = z.imag(), eta = w.imag();
        cplx L = 4.0 * (v * v * (tuu + tvv) - I * (k / 2) * v * (tu + I * tv) + (k / 4) * (k / 4 - 1) * t);
        cplx R = eta * eta * (txx + tyy) + 2.0 * m * I * eta * (tx - I * ty) + (m * (m - 1) - 0.75) * t;
        return L - R;
    };
    cplx d1 = defect(h0), d2 = defect(h0 / 2);
    cplx rich = (4.0 * d2 - d1) / 3.0;
    return {rich, t, std::abs(rich) / std::abs(t)};
}

}  // namespace thetalift
