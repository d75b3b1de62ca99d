#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace rmt::synth {

/// One diagonal block of a block-correlation target: (size, within-block U).
using BlockSpec = std::vector<std::pair<int, double>>;

/// Population correlation matrix used to impose structure on Gaussian panels.
/// Construction validates symmetry, unit diagonal and positive definiteness
/// (smallest eigenvalue must exceed 1e-10 times the largest).
struct CorrelationTarget {
  Eigen::MatrixXd zeta;
  std::string structure_tag;

  static CorrelationTarget identity(int n);
  static CorrelationTarget constant(int n, double u);
  static CorrelationTarget blocks(const BlockSpec& spec);
  static CorrelationTarget from_matrix(Eigen::MatrixXd zeta, std::string tag);

  bool is_identity() const { return structure_tag == "identity"; }
  int size() const { return static_cast<int>(zeta.rows()); }
};

struct GaussianPanel {
  Eigen::MatrixXd data;  // N x T
  std::uint64_t seed = 0;
  double sigma = 1.0;

  int rows() const { return static_cast<int>(data.rows()); }
  int cols() const { return static_cast<int>(data.cols()); }
};

/// N x T panel of i.i.d. Normal(0, sigma^2) draws; deterministic in seed.
GaussianPanel gaussian_panel(int n, int t, double sigma, std::uint64_t seed);

/// G = zeta^{1/2} B with the symmetric positive-definite square root
/// (eigendecomposition, not Cholesky).
GaussianPanel correlate_panel(const GaussianPanel& panel,
                              const CorrelationTarget& target);

/// Correlated panel with block-diagonal target (cross-block correlation 0).
GaussianPanel block_surrogate(const BlockSpec& spec, int t, std::uint64_t seed);

/// Simulated Markov chain (0-based states) from a row-stochastic matrix,
/// starting in state 0. Used for regime-switching surrogates.
std::vector<int> markov_chain(const Eigen::MatrixXd& transition, int length,
                              std::uint64_t seed);

}  // namespace rmt::synth
