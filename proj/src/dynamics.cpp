#include "rmt/dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rmt/modes.hpp"
#include "rmt/powermap.hpp"

namespace rmt::dynamics {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

EpochStats epoch_stats(const CorrelationMatrix& c, double epsilon) {
  const int n = c.size();
  if (n < 2) throw std::invalid_argument("correlation matrix must be >= 2x2");

  EpochStats out;
  out.tau = c.epoch_end;

  const std::size_t pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
  double sum = 0.0, sum_abs = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      sum += c.c(i, j);
      sum_abs += std::abs(c.c(i, j));
    }
  }
  out.mean_c = sum / pairs;
  out.mean_abs_c = sum_abs / pairs;
  out.df = out.mean_abs_c - out.mean_c;

  double lo = c.c(0, 1), hi = c.c(0, 1);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      lo = std::min(lo, c.c(i, j));
      hi = std::max(hi, c.c(i, j));
      const double d = c.c(i, j) - out.mean_c;
      m2 += d * d;
      m3 += d * d * d;
      m4 += d * d * d * d;
    }
  }
  m2 /= pairs;
  m3 /= pairs;
  m4 /= pairs;
  // All-equal elements are degenerate even when the accumulated second moment
  // picks up rounding noise from the mean.
  if (lo == hi) m2 = 0.0;
  out.variance = m2;
  if (m2 > 0.0) {
    out.skewness = m3 / std::pow(m2, 1.5);
    out.kurtosis = m4 / (m2 * m2);
  } else {
    out.skewness = kNaN;
    out.kurtosis = kNaN;
    out.moments_degenerate = true;
  }

  out.lambda_max = modes::eigendecompose(c.c).values(0);
  if (epsilon > 0.0 && c.epoch_len > 0 && c.epoch_len < n) {
    const powermap::EmergingSpectrum em = powermap::emerging_spectrum(c, epsilon);
    out.lambda_min_emerging = em.lambda_min;
    out.neg_count = em.neg_count;
  }
  return out;
}

std::vector<EpochStats> stats_series(const std::vector<CorrelationMatrix>& cs,
                                     double epsilon) {
  if (cs.empty()) throw std::invalid_argument("empty correlation sequence");
  std::vector<EpochStats> out;
  out.reserve(cs.size());
  for (const auto& c : cs) {
    try {
      out.push_back(epoch_stats(c, epsilon));
    } catch (const std::exception& e) {
      throw std::runtime_error("epoch " + c.epoch_end + ": " + e.what());
    }
  }
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("pearson needs two equal series of length >= 2");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return kNaN;
  return sxy / std::sqrt(sxx * syy);
}

LaggedRelation lagged_relation(std::span<const double> x,
                               std::span<const double> y, int lag) {
  if (lag < 0) throw std::invalid_argument("lag must be >= 0");
  if (x.size() != y.size() ||
      x.size() < static_cast<std::size_t>(lag) + 3) {
    throw std::invalid_argument("series too short for lag " +
                                std::to_string(lag));
  }
  LaggedRelation out;
  const std::size_t n_pairs = x.size() - lag;
  std::vector<double> xs, ys;
  xs.reserve(n_pairs);
  ys.reserve(n_pairs);
  for (std::size_t t = 0; t < n_pairs; ++t) {
    xs.push_back(x[t]);
    ys.push_back(y[t + lag]);
    out.points.emplace_back(x[t], y[t + lag]);
  }
  out.n_pairs = n_pairs;
  out.pearson_r = pearson(xs, ys);
  return out;
}

std::vector<double> lag1_effect_tstat(std::span<const double> mu,
                                      std::span<const double> lmin,
                                      int window) {
  if (window < 8) throw std::invalid_argument("window must be >= 8");
  if (mu.size() != lmin.size()) {
    throw std::invalid_argument("series must be aligned");
  }
  // Pairs (x, y) = (lmin(t-1), mu(t)).
  const std::size_t n_pairs = mu.size() >= 1 ? mu.size() - 1 : 0;
  if (n_pairs < static_cast<std::size_t>(window)) {
    throw std::invalid_argument("series too short for the requested window");
  }
  std::vector<double> tvals;
  for (std::size_t end = window; end <= n_pairs; ++end) {
    const std::size_t start = end - window;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = start; i < end; ++i) {
      mx += lmin[i];
      my += mu[i + 1];
    }
    mx /= window;
    my /= window;
    double sxx = 0.0, sxy = 0.0, syy = 0.0, sx2 = 0.0;
    for (std::size_t i = start; i < end; ++i) {
      sxx += (lmin[i] - mx) * (lmin[i] - mx);
      sxy += (lmin[i] - mx) * (mu[i + 1] - my);
      syy += (mu[i + 1] - my) * (mu[i + 1] - my);
      sx2 += lmin[i] * lmin[i];
    }
    // Degenerate regressor: an exactly constant window leaves only rounding
    // noise in sxx, so compare against the raw second moment.
    if (sxx <= 1e-24 * sx2) {
      tvals.push_back(kNaN);
      continue;
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double rss = 0.0;
    for (std::size_t i = start; i < end; ++i) {
      const double r = mu[i + 1] - intercept - slope * lmin[i];
      rss += r * r;
    }
    const double sigma2 = rss / (window - 2);
    // Exact fits leave residuals at rounding scale relative to the response.
    if (sigma2 <= 0.0 || rss <= 1e-24 * syy) {
      tvals.push_back(slope >= 0.0
                          ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity());
      continue;
    }
    tvals.push_back(slope / std::sqrt(sigma2 / sxx));
  }
  return tvals;
}

}  // namespace rmt::dynamics
