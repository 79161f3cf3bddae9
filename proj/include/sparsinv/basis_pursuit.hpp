#pragma once

#include <cstddef>
#include <span>

#include "sparsinv/matrix.hpp"

namespace sparsinv {

inline constexpr double kBasisPursuitTolerance = 1e-8;
inline constexpr int kBasisPursuitMaxIterations = 200;

struct BasisPursuitResult {
  Vector x;
  // Dual certificate: lambda scaled so that ||A^T lambda||_inf <= 1, hence
  // y^T lambda is a lower bound on the optimal l1 norm.
  Vector dual;
  double primal = 0.0;          // ||x||_1
  double dual_objective = 0.0;  // y^T dual
  double gap = 0.0;             // primal - dual_objective
  double residual = 0.0;        // ||A x - y||_2
  int iterations = 0;
  bool polished = false;  // x was refined by least squares on its support
};

// min ||x||_1 subject to A x = y.
//
// Solved as the standard-form LP min 1^T (u + v) s.t. [A, -A] (u; v) = y,
// u, v >= 0 by a Mehrotra predictor-corrector interior-point method, followed
// by a least-squares polish on the detected support when that keeps the
// iterate feasible and does not increase the l1 norm.
//
// On return: residual <= tol * max(1, ||y||) and gap <= tol * max(1, ||x||_1).
// Throws InfeasibleError when y is not in range(A) to that tolerance, and
// ConvergenceError (carrying the best iterate) when the certificate is not
// reached within max_iterations.
BasisPursuitResult basis_pursuit(const Matrix& a, std::span<const double> y, double tol = kBasisPursuitTolerance,
                                 int max_iterations = kBasisPursuitMaxIterations);

}  // namespace sparsinv
