#include "rmt/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rmt/correlation.hpp"
#include "rmt/powermap.hpp"
#include "rmt/rng.hpp"

namespace rmt::ensembles {

WishartMatrix wishart(const synth::GaussianPanel& panel, bool correlated) {
  const int n = panel.rows();
  const int t = panel.cols();
  if (n < 1 || t < 1) throw std::invalid_argument("empty panel");
  WishartMatrix w;
  w.m = (panel.data * panel.data.transpose()) / static_cast<double>(t);
  w.q_ratio = static_cast<double>(t) / n;
  w.correlated = correlated;
  return w;
}

double mp_density(double lambda, double q, double sigma2) {
  if (!(q > 0.0) || !(sigma2 > 0.0)) {
    throw std::invalid_argument("mp_density requires q > 0 and sigma2 > 0");
  }
  const auto [lo, hi] = mp_bounds(q, sigma2);
  if (lambda <= lo || lambda >= hi || lambda <= 0.0) return 0.0;
  return q / (2.0 * std::numbers::pi * sigma2) *
         std::sqrt((hi - lambda) * (lambda - lo)) / lambda;
}

std::pair<double, double> mp_bounds(double q, double sigma2) {
  if (!(q > 0.0) || !(sigma2 > 0.0)) {
    throw std::invalid_argument("mp_bounds requires q > 0 and sigma2 > 0");
  }
  const double r = 1.0 / std::sqrt(q);
  return {sigma2 * (1.0 - r) * (1.0 - r), sigma2 * (1.0 + r) * (1.0 + r)};
}

double mp_zero_mass(double q) {
  if (!(q > 0.0)) throw std::invalid_argument("mp_zero_mass requires q > 0");
  return std::max(0.0, 1.0 - q);
}

Histogram make_histogram(std::span<const double> values, int bins) {
  if (bins < 1) throw std::invalid_argument("bin count must be >= 1");
  if (values.empty()) throw std::invalid_argument("no samples to histogram");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  double width = (hi - lo) / bins;
  if (width <= 0.0) width = std::max(1e-12, std::abs(lo) * 1e-12 + 1e-12);

  Histogram h;
  const int total_bins = bins + 2;  // one pad bin each side
  const double start = lo - width;
  h.bin_edges.resize(total_bins + 1);
  for (int i = 0; i <= total_bins; ++i) h.bin_edges[i] = start + i * width;
  std::vector<std::size_t> counts(total_bins, 0);
  for (double v : values) {
    auto idx = static_cast<long>((v - start) / width);
    idx = std::clamp<long>(idx, 0, total_bins - 1);
    ++counts[idx];
  }
  h.density.resize(total_bins);
  const double norm = 1.0 / (static_cast<double>(values.size()) * width);
  for (int i = 0; i < total_bins; ++i) h.density[i] = counts[i] * norm;
  h.n_samples = values.size();
  return h;
}

Eigen::MatrixXd generate_member(const GeneratorSpec& spec, std::uint64_t seed) {
  if (spec.n < 1 || spec.t < 1) {
    throw std::invalid_argument("generator spec needs n >= 1 and t >= 1");
  }
  synth::GaussianPanel panel =
      synth::gaussian_panel(spec.n, spec.t, spec.sigma, seed);
  if (!spec.target.is_identity()) {
    panel = synth::correlate_panel(panel, spec.target);
  }
  Eigen::MatrixXd m;
  if (spec.demean) {
    m = correlation_of(panel.data).c;
  } else {
    m = wishart(panel, !spec.target.is_identity()).m;
  }
  if (spec.epsilon) {
    m = powermap::power_map(m, *spec.epsilon);
  }
  return m;
}

Histogram ensemble_spectrum(const GeneratorSpec& spec, int n_ensemble, int bins,
                            std::uint64_t seed) {
  if (n_ensemble < 1) throw std::invalid_argument("n_ensemble must be >= 1");
  std::vector<double> eigenvalues;
  eigenvalues.reserve(static_cast<std::size_t>(spec.n) * n_ensemble);
  for (int member = 0; member < n_ensemble; ++member) {
    const Eigen::MatrixXd m = generate_member(spec, derive_seed(seed, member));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("eigensolver failed on ensemble member " +
                               std::to_string(member));
    }
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      eigenvalues.push_back(es.eigenvalues()(i));
    }
  }
  Histogram h = make_histogram(eigenvalues, bins);
  h.n_ensemble = n_ensemble;
  return h;
}

Histogram element_distribution(const GeneratorSpec& spec, int n_ensemble,
                               int bins, std::uint64_t seed) {
  if (n_ensemble < 1) throw std::invalid_argument("n_ensemble must be >= 1");
  std::vector<double> elements;
  elements.reserve(static_cast<std::size_t>(spec.n) * (spec.n - 1) / 2 *
                   n_ensemble);
  for (int member = 0; member < n_ensemble; ++member) {
    const Eigen::MatrixXd m = generate_member(spec, derive_seed(seed, member));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
        elements.push_back(m(i, j));
      }
    }
  }
  Histogram h = make_histogram(elements, bins);
  h.n_ensemble = n_ensemble;
  return h;
}

}  // namespace rmt::ensembles
