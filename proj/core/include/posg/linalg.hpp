#pragma once

#include <vector>

namespace posg {

/// Solves A x = b in place by Gaussian elimination with partial pivoting.
/// A is n x n row-major. Throws numerical_error when the system is singular
/// to working precision.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b, int n);

/// Minimum-norm least-squares solution of A x = b for a dense rows x cols
/// matrix (row-major), via normal equations with a tiny Tikhonov term.
/// Returns x and stores the residual norm ||A x - b||_2 in *residual when
/// non-null.
std::vector<double> least_squares(const std::vector<double>& a, const std::vector<double>& b,
                                  int rows, int cols, double* residual = nullptr);

/// Euclidean projection onto the probability simplex.
std::vector<double> project_to_simplex(std::vector<double> v);

}  // namespace posg
