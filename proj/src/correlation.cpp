#include "rmt/correlation.hpp"

#include <cmath>
#include <stdexcept>

namespace rmt {

ReturnMatrix log_returns(const PricePanel& panel) {
  const auto n = panel.prices.rows();
  const auto days = panel.prices.cols();
  if (days < 2) {
    throw std::invalid_argument("need at least 2 dates to form returns");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index t = 0; t < days; ++t) {
      if (!(panel.prices(i, t) > 0.0)) {
        const std::string asset =
            i < static_cast<Eigen::Index>(panel.asset_ids.size())
                ? panel.asset_ids[i]
                : std::to_string(i);
        const std::string date =
            t < static_cast<Eigen::Index>(panel.dates.size())
                ? panel.dates[t]
                : std::to_string(t);
        throw std::runtime_error("non-positive price for asset " + asset +
                                 " on " + date);
      }
    }
  }
  ReturnMatrix out;
  out.returns.resize(n, days - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index t = 1; t < days; ++t) {
      out.returns(i, t - 1) =
          std::log(panel.prices(i, t)) - std::log(panel.prices(i, t - 1));
    }
  }
  out.asset_ids = panel.asset_ids;
  if (!panel.dates.empty()) {
    out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
  }
  return out;
}

CorrelationMatrix epoch_correlation(const ReturnMatrix& returns, int epoch_end,
                                    int epoch_len) {
  const auto n = returns.returns.rows();
  const auto t = returns.returns.cols();
  if (epoch_len < 2) {
    throw std::invalid_argument("epoch length must be >= 2, got " +
                                std::to_string(epoch_len));
  }
  if (epoch_end >= t || epoch_end - epoch_len + 1 < 0) {
    throw std::invalid_argument("epoch [" +
                                std::to_string(epoch_end - epoch_len + 1) + "," +
                                std::to_string(epoch_end) +
                                "] out of range for T=" + std::to_string(t));
  }
  const Eigen::MatrixXd window =
      returns.returns.middleCols(epoch_end - epoch_len + 1, epoch_len);
  if (!window.allFinite()) {
    throw std::runtime_error("non-finite return inside epoch ending at index " +
                             std::to_string(epoch_end));
  }

  Eigen::MatrixXd z = window.colwise() - window.rowwise().mean();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double var = z.row(i).squaredNorm() / epoch_len;
    if (var <= 0.0) {
      const std::string asset =
          i < static_cast<Eigen::Index>(returns.asset_ids.size())
              ? returns.asset_ids[i]
              : std::to_string(i);
      throw std::runtime_error("degenerate (constant) return series for asset " +
                               asset + " in epoch ending at index " +
                               std::to_string(epoch_end));
    }
    z.row(i) /= std::sqrt(var);
  }

  CorrelationMatrix out;
  out.c = (z * z.transpose()) / static_cast<double>(epoch_len);
  out.c.diagonal().setOnes();
  out.epoch_len = epoch_len;
  out.asset_ids = returns.asset_ids;
  out.epoch_end =
      epoch_end < static_cast<int>(returns.dates.size())
          ? returns.dates[epoch_end]
          : std::to_string(epoch_end);
  return out;
}

std::vector<CorrelationMatrix> rolling_correlations(const ReturnMatrix& returns,
                                                    int epoch_len, int shift) {
  if (shift < 1) {
    throw std::invalid_argument("shift must be >= 1, got " +
                                std::to_string(shift));
  }
  if (epoch_len < 2) {
    throw std::invalid_argument("epoch length must be >= 2");
  }
  const auto t = returns.returns.cols();
  if (t < epoch_len) {
    throw std::invalid_argument("series shorter than one epoch");
  }
  std::vector<CorrelationMatrix> out;
  for (Eigen::Index end = epoch_len - 1; end < t; end += shift) {
    try {
      out.push_back(epoch_correlation(returns, static_cast<int>(end), epoch_len));
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("epoch ending at index " + std::to_string(end) +
                               ": " + e.what());
    }
  }
  return out;
}

CorrelationMatrix correlation_of(const Eigen::MatrixXd& data) {
  ReturnMatrix r;
  r.returns = data;
  return epoch_correlation(r, static_cast<int>(data.cols()) - 1,
                           static_cast<int>(data.cols()));
}

}  // namespace rmt
