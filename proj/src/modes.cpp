#include "rmt/modes.hpp"

#include <cmath>
#include <stdexcept>

#include "rmt/ensembles.hpp"

namespace rmt::modes {

EigenSystem eigendecompose(const Eigen::MatrixXd& c) {
  if (c.rows() != c.cols()) throw std::invalid_argument("matrix must be square");
  if (!c.isApprox(c.transpose(), 1e-12)) {
    throw std::invalid_argument("matrix must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("symmetric eigensolver did not converge");
  }
  const auto n = c.rows();
  EigenSystem out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = es.eigenvalues()(n - 1 - i);
    Eigen::VectorXd v = es.eigenvectors().col(n - 1 - i);
    Eigen::Index argmax = 0;
    v.cwiseAbs().maxCoeff(&argmax);
    if (v(argmax) < 0.0) v = -v;
    out.vectors.col(i) = v;
  }
  return out;
}

ModeDecomposition decompose_modes(const Eigen::MatrixXd& c, int n_group) {
  const int n = static_cast<int>(c.rows());
  if (n_group < 1 || n_group >= n) {
    throw std::invalid_argument("n_group must satisfy 1 <= n_group < N, got " +
                                std::to_string(n_group));
  }
  EigenSystem es = eigendecompose(c);

  ModeDecomposition out;
  out.n_group = n_group;
  out.eigenvalues = es.values;
  out.eigenvectors = es.vectors;
  out.market = es.values(0) * es.vectors.col(0) * es.vectors.col(0).transpose();
  out.group = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n_group; ++i) {
    out.group += es.values(i) * es.vectors.col(i) * es.vectors.col(i).transpose();
  }
  out.random_modes = Eigen::MatrixXd::Zero(n, n);
  for (int i = n_group; i < n; ++i) {
    out.random_modes +=
        es.values(i) * es.vectors.col(i) * es.vectors.col(i).transpose();
  }
  return out;
}

int suggest_n_group(const Eigen::VectorXd& descending_eigenvalues, double q) {
  const double edge = ensembles::mp_bounds(q, 1.0).second;
  int above = 0;
  for (Eigen::Index i = 0; i < descending_eigenvalues.size(); ++i) {
    if (descending_eigenvalues(i) > edge) ++above;
  }
  return std::max(1, above - 1);
}

}  // namespace rmt::modes
