#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rmt/synth.hpp"

namespace rmt::ensembles {

struct WishartMatrix {
  Eigen::MatrixXd m;      // N x N symmetric PSD
  double q_ratio = 0.0;   // T / N
  bool correlated = false;
};

/// W = (1/T) B B'.
WishartMatrix wishart(const synth::GaussianPanel& panel,
                      bool correlated = false);

/// Marchenko-Pastur density at lambda for ratio Q and variance sigma^2.
/// Zero outside the support; the Q<=1 delta mass is reported separately by
/// mp_zero_mass.
double mp_density(double lambda, double q, double sigma2);

/// Support edges sigma^2 (1 -+ 1/sqrt(Q))^2.
std::pair<double, double> mp_bounds(double q, double sigma2);

/// Weight of the delta(lambda) term for Q <= 1: max(0, 1 - Q).
double mp_zero_mass(double q);

/// Uniform-bin histogram normalized to unit mass over its samples.
struct Histogram {
  std::vector<double> bin_edges;  // strictly increasing, size = bins + 1
  std::vector<double> density;    // probability per unit lambda
  std::size_t n_samples = 0;
  int n_ensemble = 0;
  std::string normalization = "unit";

  double bin_center(std::size_t i) const {
    return 0.5 * (bin_edges[i] + bin_edges[i + 1]);
  }
};

/// Bins span [min - 1 bin, max + 1 bin] with `bins` interior bins.
Histogram make_histogram(std::span<const double> values, int bins);

/// One ensemble member recipe. With demean=true (the default) the member is
/// the sample correlation matrix of the panel, C = (1/T) Z Z' for
/// row-standardized Z; with demean=false it is the raw Wishart (1/T) G G'.
/// An optional power-map distortion is applied elementwise.
struct GeneratorSpec {
  int n = 0;
  int t = 0;
  double sigma = 1.0;
  synth::CorrelationTarget target = synth::CorrelationTarget::identity(1);
  std::optional<double> epsilon;
  bool demean = true;
};

/// Deterministic member matrix for (spec, member seed).
Eigen::MatrixXd generate_member(const GeneratorSpec& spec, std::uint64_t seed);

/// Pooled eigenvalue density over n_ensemble independent members; member i
/// uses derive_seed(seed, i).
Histogram ensemble_spectrum(const GeneratorSpec& spec, int n_ensemble, int bins,
                            std::uint64_t seed);

/// Pooled distribution of off-diagonal elements W_ij (i < j).
Histogram element_distribution(const GeneratorSpec& spec, int n_ensemble,
                               int bins, std::uint64_t seed);

}  // namespace rmt::ensembles
