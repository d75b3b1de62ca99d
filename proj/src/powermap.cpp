#include "rmt/powermap.hpp"

#include <cmath>
#include <stdexcept>

#include "rmt/ensembles.hpp"
#include "rmt/rng.hpp"

namespace rmt::powermap {

Eigen::MatrixXd power_map(const Eigen::MatrixXd& m, double epsilon) {
  if (epsilon < 0.0) {
    throw std::invalid_argument("distortion epsilon must be >= 0, got " +
                                std::to_string(epsilon));
  }
  if (epsilon == 0.0) return m;
  return m.unaryExpr([epsilon](double x) {
    if (x == 0.0) return 0.0;
    const double mag = std::pow(std::abs(x), 1.0 + epsilon);
    return x < 0.0 ? -mag : mag;
  });
}

EmergingSpectrum emerging_from(const Eigen::MatrixXd& c, int epoch_len,
                               double epsilon) {
  const int n = static_cast<int>(c.rows());
  if (epoch_len >= n) {
    throw std::domain_error(
        "no degenerate zero cloud for M >= N (M=" + std::to_string(epoch_len) +
        ", N=" + std::to_string(n) + "); use a plain spectrum instead");
  }
  if (!(epsilon > 0.0) || epsilon > 1.0) {
    throw std::invalid_argument("emerging spectrum needs epsilon in (0, 1]");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(power_map(c, epsilon),
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigensolver failed in emerging_spectrum");
  }
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending

  EmergingSpectrum out;
  out.epsilon = epsilon;
  const int n_emerging = n - epoch_len + 1;
  out.emerging.assign(ev.data(), ev.data() + n_emerging);
  out.bulk.assign(ev.data() + n_emerging, ev.data() + n);
  out.lambda_min = out.emerging.front();
  for (double v : out.emerging) {
    if (v < 0.0) ++out.neg_count;
  }
  const double cloud_top = out.emerging.back();
  const double width = cloud_top - out.lambda_min;
  out.separated = !out.bulk.empty() && (out.bulk.front() - cloud_top) > width;
  return out;
}

EmergingSpectrum emerging_spectrum(const CorrelationMatrix& c, double epsilon) {
  return emerging_from(c.c, c.epoch_len, epsilon);
}

std::vector<EmergingShiftRow> emerging_shift_vs_m(int n, double u,
                                                  double epsilon,
                                                  const std::vector<int>& m_values,
                                                  int n_ensemble,
                                                  std::uint64_t seed) {
  if (n_ensemble < 1) throw std::invalid_argument("n_ensemble must be >= 1");
  std::vector<EmergingShiftRow> rows;
  for (std::size_t mi = 0; mi < m_values.size(); ++mi) {
    const int m = m_values[mi];
    if (m >= n) {
      throw std::invalid_argument("epoch length " + std::to_string(m) +
                                  " must be smaller than N=" + std::to_string(n));
    }
    ensembles::GeneratorSpec spec;
    spec.n = n;
    spec.t = m;
    spec.target = u > 0.0 ? synth::CorrelationTarget::constant(n, u)
                          : synth::CorrelationTarget::identity(n);
    EmergingShiftRow row;
    row.m = m;
    for (int member = 0; member < n_ensemble; ++member) {
      const Eigen::MatrixXd c = ensembles::generate_member(
          spec, derive_seed(seed, mi * static_cast<std::uint64_t>(n_ensemble) +
                                      member));
      const EmergingSpectrum em = emerging_from(c, m, epsilon);
      double mean = 0.0;
      for (double v : em.emerging) mean += v;
      row.mean_location += mean / em.emerging.size();
      row.lambda_min += em.lambda_min;
      row.neg_count += em.neg_count;
    }
    row.mean_location /= n_ensemble;
    row.lambda_min /= n_ensemble;
    row.neg_count /= n_ensemble;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rmt::powermap
