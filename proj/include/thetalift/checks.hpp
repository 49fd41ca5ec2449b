#pragma once

#include <vector>

#include "thetalift/theta.hpp"

namespace thetalift {

// a fixed list of elements of Gamma_0(M): T, [[1,0],[M,1]], then small c = M, 2M, ... with both signs
std::vector<Mat2i> gamma0_elements(long M, size_t count = 6);

struct CheckValue {
    cplx lhs = 0.0, rhs = 0.0;
    double residual = 0.0;  // |lhs - rhs| / |rhs|, worst case
};

// max over g of |j(g,z)^{-k} theta(gz, w) - chi(d) theta(z, w)| / |theta(z, w)|, g in Gamma_0(4N)
CheckValue kernel_z_modularity(const ThetaKernel& tk, cplx z, cplx w, const std::vector<Mat2i>& gammas);
// conj theta(z, gw) against chi(d)^2 (cw + d)^{2m} conj theta(z, w), g in Gamma_0(2N)
CheckValue kernel_w_modularity(const ThetaKernel& tk, cplx z, cplx w, const std::vector<Mat2i>& gammas);
// second-order PDE in (z, w), central differences at h and h/2 combined by Richardson;
// lhs = the two sides' extrapolated difference, rhs = theta(z, w)
CheckValue kernel_pde_residual(const ThetaKernel& tk, cplx z, cplx w, double h = 1e-3);

}  // namespace thetalift
