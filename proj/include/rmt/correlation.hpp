#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rmt {

struct PricePanel {
  Eigen::MatrixXd prices;  // N x (T+1), strictly positive
  std::vector<std::string> asset_ids;
  std::vector<std::string> sector_labels;
  std::vector<std::string> dates;  // length T+1, strictly increasing
};

struct ReturnMatrix {
  Eigen::MatrixXd returns;  // N x T log returns
  std::vector<std::string> asset_ids;
  std::vector<std::string> dates;  // length T, label of each return day
};

/// Equal-time Pearson correlation matrix over one epoch. Diagonal is exactly
/// 1, epoch_end labels the last day of the window, epoch_len is M.
struct CorrelationMatrix {
  Eigen::MatrixXd c;
  std::string epoch_end;
  int epoch_len = 0;
  std::vector<std::string> asset_ids;

  int size() const { return static_cast<int>(c.rows()); }
};

/// r_i(t) = ln P_i(t) - ln P_i(t-1); output has one fewer column.
ReturnMatrix log_returns(const PricePanel& panel);

/// Pearson correlation over the M columns ending at 0-based column index
/// `epoch_end` (inclusive). Means and variances use the biased divide-by-M
/// convention, so C = (1/M) Z Z' for row-standardized Z.
CorrelationMatrix epoch_correlation(const ReturnMatrix& returns, int epoch_end,
                                    int epoch_len);

/// Epochs ending at day M, M+shift, M+2*shift, ... (1-based day counts).
std::vector<CorrelationMatrix> rolling_correlations(const ReturnMatrix& returns,
                                                    int epoch_len, int shift);

/// Correlation of a raw N x T data matrix over its full length.
CorrelationMatrix correlation_of(const Eigen::MatrixXd& data);

}  // namespace rmt
