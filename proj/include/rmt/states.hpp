#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rmt/correlation.hpp"

namespace rmt::states {

/// Pairwise distance between epochs: mean absolute elementwise difference of
/// the power-mapped (noise-suppressed) correlation matrices, over i < j.
struct SimilarityMatrix {
  Eigen::MatrixXd d;  // symmetric, zero diagonal, non-negative
  std::vector<std::string> epoch_labels;
};

SimilarityMatrix similarity_matrix(const std::vector<CorrelationMatrix>& cs,
                                   double epsilon);

/// Classical (double-centering) MDS embedding. `truncated` is set when fewer
/// than k_dim non-negative eigenvalues exist and the embedding came out
/// lower-dimensional.
struct MdsEmbedding {
  Eigen::MatrixXd coords;      // n_epoch x k_dim, column-centered
  Eigen::VectorXd eigvals_used;
  bool truncated = false;
};

MdsEmbedding classical_mds(const SimilarityMatrix& d, int k_dim);

struct KmeansResult {
  std::vector<int> assignment;  // 0-based cluster ids, lowest-inertia run
  double inertia = 0.0;
  double intra_mean = 0.0;  // ensemble mean of mean point-to-centroid distance
  double intra_sd = 0.0;    // ensemble sd of the same
};

/// n_init independent k-means runs (greedy k-means++ seeding, Lloyd updates,
/// at most 300 iterations); run i derives its seed from (seed, i).
KmeansResult kmeans_ensemble(const MdsEmbedding& coords, int k, int n_init,
                             std::uint64_t seed);

struct IntraStats {
  int k = 0;
  double mean = 0.0;
  double sd = 0.0;
};

/// Maximum k attaining the minimum ensemble sd of the intra-cluster distance
/// (ties within 1e-12 resolve to the larger k). Requires n_init >= 2.
std::pair<int, std::vector<IntraStats>> optimal_k(const MdsEmbedding& coords,
                                                  int k_lo, int k_hi,
                                                  int n_init,
                                                  std::uint64_t seed);

/// Row-stochastic transition-count estimate over consecutive pairs. States
/// are 0-based; rows with no outgoing transitions are zero and flagged.
Eigen::MatrixXd transition_matrix(const std::vector<int>& assignments, int k,
                                  std::vector<bool>* empty_rows = nullptr);

/// Relabels clusters 0..k-1 by ascending mean of the member epochs' mean
/// correlation; ties break by first occurrence.
std::vector<int> order_states(const std::vector<int>& assignments,
                              const std::vector<CorrelationMatrix>& cs);

struct MarketStateModel {
  int k = 0;
  std::vector<int> assignments;       // ordered state ids, 0-based
  std::vector<std::string> epoch_labels;
  Eigen::MatrixXd centroids;          // k x k_dim
  std::vector<IntraStats> intra_stats;
  Eigen::MatrixXd transition;
  std::vector<bool> empty_rows;
  MdsEmbedding embedding;
  int k_star = 0;                     // optimal_k result over the search range
};

/// Full pipeline of similarity -> MDS -> optimal-k -> k-means -> ordered
/// states -> transition matrix. When k_lo == k_hi the optimal-k search is
/// skipped and that k is used directly.
MarketStateModel market_states(const std::vector<CorrelationMatrix>& cs,
                               double epsilon, int k_lo, int k_hi, int n_init,
                               std::uint64_t seed, int k_dim = 3);

}  // namespace rmt::states
