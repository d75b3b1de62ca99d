#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rmt/correlation.hpp"

namespace rmt::dynamics {

/// Summary of one epoch's correlation matrix. Moments are population
/// (divide-by-n) central moments over the upper-triangle off-diagonal
/// elements; kurtosis is non-excess (Gaussian -> 3). Skewness/kurtosis are
/// NaN with moments_degenerate set when the elements have zero variance.
/// Emerging-spectrum fields are present only when epsilon > 0 and M < N.
struct EpochStats {
  std::string tau;
  double mean_c = 0.0;
  double mean_abs_c = 0.0;
  double df = 0.0;  // mean_abs_c - mean_c, zero iff no anti-correlations
  double variance = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
  bool moments_degenerate = false;
  double lambda_max = 0.0;  // from the undistorted matrix
  std::optional<double> lambda_min_emerging;
  std::optional<int> neg_count;
};

EpochStats epoch_stats(const CorrelationMatrix& c, double epsilon);

std::vector<EpochStats> stats_series(const std::vector<CorrelationMatrix>& cs,
                                     double epsilon);

struct LaggedRelation {
  double pearson_r = 0.0;
  std::size_t n_pairs = 0;
  std::vector<std::pair<double, double>> points;  // (x_t, y_{t+lag})
};

/// Pearson correlation of (x_t, y_{t+lag}) pairs.
LaggedRelation lagged_relation(std::span<const double> x,
                               std::span<const double> y, int lag);

/// Rolling OLS of mu(t) on lmin(t-1) with intercept; emits the slope's
/// t-statistic per window. Zero-variance regressor windows yield NaN; exact
/// fits yield +-infinity.
std::vector<double> lag1_effect_tstat(std::span<const double> mu,
                                      std::span<const double> lmin, int window);

/// Plain Pearson correlation of two equal-length series.
double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace rmt::dynamics
