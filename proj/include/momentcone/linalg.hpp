#pragma once

#include <Eigen/Dense>

namespace momentcone {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column k pairs with values[k]
};

/// Cyclic Jacobi eigensolver for a symmetric matrix. Sweeps run in a fixed
/// (row, column) order, so results are reproducible bit for bit.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& a, int max_sweeps = 100);

double min_eigenvalue(const Eigen::MatrixXd& a);

/// V max(Λ, floor) Vᵀ: nearest matrix in Frobenius norm with spectrum >= floor.
Eigen::MatrixXd clip_spectrum(const SymmetricEigen& eig, double floor = 0.0);

}  // namespace momentcone
