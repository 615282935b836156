#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace localflow {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Moore-Penrose pseudoinverse of a symmetric matrix by eigendecomposition.
/// Eigenvalues below rel_tol * max|eigenvalue| are treated as zero.
Matrix symmetric_pseudoinverse(const Matrix& m, double rel_tol = 1e-10);

/// Number of eigenvalues of a symmetric matrix below rel_tol * max|eigenvalue|.
int symmetric_kernel_dimension(const Matrix& m, double rel_tol = 1e-10);

/// Copies the listed entries of v, in order.
Vector gather(const Vector& v, std::span<const int> indices);

/// Writes values into the listed entries of target.
void scatter(const Vector& values, std::span<const int> indices, Vector& target);

/// Euclidean norm over a subset of coordinates.
double subset_norm(const Vector& v, std::span<const int> indices);

Matrix submatrix(const Matrix& m, std::span<const int> rows, std::span<const int> cols);

}  // namespace localflow
