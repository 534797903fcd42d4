#pragma once

#include <vector>

#include "tautrel/poly.hpp"

namespace tautrel {

// Independent oracle for lambda_g DR_g integrals, g <= 2, from Hain's
// compact-type formula DR = Theta^g/g! and the lambda_g evaluation
//   int lambda_g prod psi^e = b_g (2g-3+N)!/prod e!.
// Points 1..k carry weights x1..xk and exponents d, the extra point has
// weight -(x1+...+xk) and exponent d0. Result lives over vars_x(k).
// Exponential in k; meant for calibration and tests only.
MultiPoly hain_kernel(int g, int k, const std::vector<int>& d, int d0);

}  // namespace tautrel
