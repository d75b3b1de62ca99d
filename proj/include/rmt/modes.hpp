#pragma once

#include <Eigen/Dense>

namespace rmt::modes {

/// Eigenpairs of a symmetric matrix, eigenvalues descending. Each eigenvector
/// is scaled so its largest-magnitude entry is positive, which keeps
/// decompositions reproducible across eigensolver implementations.
struct EigenSystem {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // columns match `values`
};

EigenSystem eigendecompose(const Eigen::MatrixXd& c);

/// C = C_market + C_group + C_random with the market mode lambda_1 a_1 a_1',
/// group modes 2..n_group and random modes n_group+1..N.
struct ModeDecomposition {
  Eigen::MatrixXd market;
  Eigen::MatrixXd group;
  Eigen::MatrixXd random_modes;
  int n_group = 0;
  Eigen::VectorXd eigenvalues;  // descending
  Eigen::MatrixXd eigenvectors;
};

ModeDecomposition decompose_modes(const Eigen::MatrixXd& c, int n_group);

/// Eigenvalues above the MP bulk edge, minus the market mode, floored at 1.
int suggest_n_group(const Eigen::VectorXd& descending_eigenvalues, double q);

}  // namespace rmt::modes
