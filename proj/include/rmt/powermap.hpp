#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "rmt/correlation.hpp"

namespace rmt::powermap {

/// Elementwise x -> sign(x) |x|^{1+epsilon}. Identity at epsilon = 0.
Eigen::MatrixXd power_map(const Eigen::MatrixXd& m, double epsilon);

/// The near-zero eigenvalue cloud split off by the power map, plus the bulk.
/// The emerging set is the N-M+1 algebraically smallest eigenvalues; this
/// fixed-count rule is used even when nonzero eigenvalues coincide.
struct EmergingSpectrum {
  std::vector<double> emerging;  // sorted ascending, size N - M + 1
  std::vector<double> bulk;      // sorted ascending, size M - 1
  double lambda_min = 0.0;
  int neg_count = 0;
  double epsilon = 0.0;
  bool separated = false;  // gap to bulk exceeds the cloud width
};

EmergingSpectrum emerging_spectrum(const CorrelationMatrix& c, double epsilon);

/// Same, for a raw symmetric matrix with a known epoch length.
EmergingSpectrum emerging_from(const Eigen::MatrixXd& c, int epoch_len,
                               double epsilon);

struct EmergingShiftRow {
  int m = 0;                   // epoch length
  double mean_location = 0.0;  // ensemble mean of the cloud mean
  double lambda_min = 0.0;     // ensemble mean of the smallest eigenvalue
  double neg_count = 0.0;      // ensemble mean negative count
};

/// Ensemble-averaged emerging-cloud statistics for each epoch length in
/// m_values (all < n), at constant correlation u.
std::vector<EmergingShiftRow> emerging_shift_vs_m(int n, double u,
                                                  double epsilon,
                                                  const std::vector<int>& m_values,
                                                  int n_ensemble,
                                                  std::uint64_t seed);

}  // namespace rmt::powermap
