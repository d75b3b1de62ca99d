#include "rmt/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "rmt/rng.hpp"

namespace rmt::synth {

namespace {

void validate_target(const Eigen::MatrixXd& zeta, const std::string& tag) {
  const auto n = zeta.rows();
  if (n < 1 || zeta.cols() != n) {
    throw std::invalid_argument("correlation target must be square, got " +
                                std::to_string(n) + "x" +
                                std::to_string(zeta.cols()));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (zeta(i, i) != 1.0) {
      throw std::invalid_argument("correlation target diagonal must be 1 at index " +
                                  std::to_string(i));
    }
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (zeta(i, j) != zeta(j, i)) {
        throw std::invalid_argument("correlation target is not symmetric at (" +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(zeta,
                                                   Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo <= 1e-10 * hi) {
    throw std::runtime_error("correlation target '" + tag +
                             "' is not positive definite: smallest eigenvalue " +
                             std::to_string(lo));
  }
}

}  // namespace

CorrelationTarget CorrelationTarget::identity(int n) {
  if (n < 1) throw std::invalid_argument("target dimension must be >= 1");
  return {Eigen::MatrixXd::Identity(n, n), "identity"};
}

CorrelationTarget CorrelationTarget::constant(int n, double u) {
  if (n < 1) throw std::invalid_argument("target dimension must be >= 1");
  if (u < 0.0 || u >= 1.0) {
    throw std::invalid_argument("constant correlation U must be in [0, 1), got " +
                                std::to_string(u));
  }
  Eigen::MatrixXd zeta = Eigen::MatrixXd::Constant(n, n, u);
  zeta.diagonal().setOnes();
  CorrelationTarget target{std::move(zeta), "constant"};
  // Constant-U spectrum is known in closed form: 1+(n-1)U once, 1-U otherwise.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(target.zeta,
                                                    Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double tol = 1e-8 * std::max(1.0, 1.0 + (n - 1) * u);
  if (std::abs(ev(n - 1) - (1.0 + (n - 1) * u)) > tol) {
    throw std::runtime_error("constant target failed analytic spectrum check");
  }
  for (int i = 0; i + 1 < n; ++i) {
    if (std::abs(ev(i) - (1.0 - u)) > tol) {
      throw std::runtime_error("constant target failed analytic spectrum check");
    }
  }
  if (ev(0) <= 1e-10 * ev(n - 1)) {
    throw std::runtime_error("constant target is not positive definite");
  }
  return target;
}

CorrelationTarget CorrelationTarget::blocks(const BlockSpec& spec) {
  int n = 0;
  for (const auto& [size, u] : spec) {
    if (size < 1) throw std::invalid_argument("block size must be >= 1");
    if (u < 0.0 || u >= 1.0) {
      throw std::invalid_argument("block correlation must be in [0, 1)");
    }
    n += size;
  }
  if (n == 0) throw std::invalid_argument("block spec is empty");
  Eigen::MatrixXd zeta = Eigen::MatrixXd::Identity(n, n);
  int offset = 0;
  for (const auto& [size, u] : spec) {
    zeta.block(offset, offset, size, size).setConstant(u);
    zeta.block(offset, offset, size, size).diagonal().setOnes();
    offset += size;
  }
  return from_matrix(std::move(zeta), "blocks");
}

CorrelationTarget CorrelationTarget::from_matrix(Eigen::MatrixXd zeta,
                                                 std::string tag) {
  validate_target(zeta, tag);
  return {std::move(zeta), std::move(tag)};
}

GaussianPanel gaussian_panel(int n, int t, double sigma, std::uint64_t seed) {
  if (n < 1 || t < 1) {
    throw std::invalid_argument("panel dimensions must be >= 1, got " +
                                std::to_string(n) + "x" + std::to_string(t));
  }
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("sigma must be positive, got " +
                                std::to_string(sigma));
  }
  Rng rng(seed);
  Eigen::MatrixXd data(n, t);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < t; ++j) {
      data(i, j) = sigma * rng.gaussian();
    }
  }
  return {std::move(data), seed, sigma};
}

GaussianPanel correlate_panel(const GaussianPanel& panel,
                              const CorrelationTarget& target) {
  if (target.size() != panel.rows()) {
    throw std::invalid_argument("target dimension " +
                                std::to_string(target.size()) +
                                " does not match panel rows " +
                                std::to_string(panel.rows()));
  }
  if (target.is_identity()) return panel;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(target.zeta);
  const double lo = es.eigenvalues().minCoeff();
  if (lo <= 1e-10 * es.eigenvalues().maxCoeff()) {
    throw std::runtime_error("target is not positive definite: eigenvalue " +
                             std::to_string(lo));
  }
  const Eigen::MatrixXd root = es.eigenvectors() *
                               es.eigenvalues().cwiseSqrt().asDiagonal() *
                               es.eigenvectors().transpose();
  return {root * panel.data, panel.seed, panel.sigma};
}

GaussianPanel block_surrogate(const BlockSpec& spec, int t, std::uint64_t seed) {
  CorrelationTarget target = CorrelationTarget::blocks(spec);
  return correlate_panel(gaussian_panel(target.size(), t, 1.0, seed), target);
}

std::vector<int> markov_chain(const Eigen::MatrixXd& transition, int length,
                              std::uint64_t seed) {
  const auto k = transition.rows();
  if (k < 1 || transition.cols() != k) {
    throw std::invalid_argument("transition matrix must be square");
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    if (std::abs(transition.row(i).sum() - 1.0) > 1e-9 ||
        transition.row(i).minCoeff() < 0.0) {
      throw std::invalid_argument("transition row " + std::to_string(i) +
                                  " is not a probability distribution");
    }
  }
  if (length < 1) throw std::invalid_argument("chain length must be >= 1");
  Rng rng(seed);
  std::vector<int> states;
  states.reserve(length);
  int state = 0;
  states.push_back(state);
  for (int t = 1; t < length; ++t) {
    double u = rng.uniform();
    int next = static_cast<int>(k) - 1;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (u < transition(state, j)) {
        next = static_cast<int>(j);
        break;
      }
      u -= transition(state, j);
    }
    state = next;
    states.push_back(state);
  }
  return states;
}

}  // namespace rmt::synth
