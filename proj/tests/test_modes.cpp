#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rmt/correlation.hpp"
#include "rmt/dynamics.hpp"
#include "rmt/ensembles.hpp"
#include "rmt/modes.hpp"
#include "rmt/rng.hpp"
#include "rmt/synth.hpp"

using namespace rmt::modes;

namespace {

// Independent eigenvalue oracle: cyclic Jacobi rotations, no shared code with
// the library's solver.
std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a) {
  const auto n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off < 1e-24) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-18) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index i = 0; i < n; ++i) {
          const double aip = a(i, p);
          const double aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
          const double api = a(p, i);
          const double aqi = a(q, i);
          a(p, i) = c * api - s * aqi;
          a(q, i) = s * api + c * aqi;
        }
      }
    }
  }
  std::vector<double> eigs(n);
  for (Eigen::Index i = 0; i < n; ++i) eigs[i] = a(i, i);
  std::sort(eigs.begin(), eigs.end(), std::greater<>());
  return eigs;
}

Eigen::MatrixXd random_correlation(int n, int t, std::uint64_t seed) {
  return rmt::correlation_of(rmt::synth::gaussian_panel(n, t, 1.0, seed).data).c;
}

}  // namespace

TEST_CASE("identity and constant matrices have the expected spectra") {
  const auto id = eigendecompose(Eigen::MatrixXd::Identity(5, 5));
  for (int i = 0; i < 5; ++i) {
    CHECK(id.values(i) == doctest::Approx(1.0).epsilon(1e-14));
  }

  const auto c = eigendecompose(
      rmt::synth::CorrelationTarget::constant(4, 0.5).zeta);
  CHECK(c.values(0) == doctest::Approx(2.5).epsilon(1e-12));
  for (int i = 1; i < 4; ++i) {
    CHECK(c.values(i) == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("eigenvalues match an independent rotation-based solver") {
  const Eigen::MatrixXd c = random_correlation(6, 30, 14);
  const auto es = eigendecompose(c);
  const auto oracle = jacobi_eigenvalues(c);
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(es.values(i) - oracle[i]) < 1e-9);
  }
}

TEST_CASE("decomposition trace, orthonormality and reconstruction") {
  const Eigen::MatrixXd c = random_correlation(12, 60, 25);
  const auto es = eigendecompose(c);
  CHECK(std::abs(es.values.sum() - 12.0) < 1e-8);
  CHECK((es.vectors.transpose() * es.vectors -
         Eigen::MatrixXd::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-8);
  Eigen::MatrixXd rebuilt = Eigen::MatrixXd::Zero(12, 12);
  for (int i = 0; i < 12; ++i) {
    rebuilt += es.values(i) * es.vectors.col(i) * es.vectors.col(i).transpose();
  }
  CHECK((rebuilt - c).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("sign convention pins each eigenvector") {
  const Eigen::MatrixXd c = random_correlation(7, 40, 33);
  const auto es = eigendecompose(c);
  for (int i = 0; i < 7; ++i) {
    Eigen::Index argmax = 0;
    es.vectors.col(i).cwiseAbs().maxCoeff(&argmax);
    CHECK(es.vectors(argmax, i) > 0.0);
  }
}

TEST_CASE("mode components always rebuild the input") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Eigen::MatrixXd c = random_correlation(10, 50, 100 + seed);
    for (int n_group : {1, 3, 9}) {
      const auto dec = decompose_modes(c, n_group);
      CHECK((dec.market + dec.group + dec.random_modes - c)
                .cwiseAbs()
                .maxCoeff() < 1e-10);
    }
  }
  CHECK_THROWS_AS(decompose_modes(random_correlation(4, 20, 1), 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(decompose_modes(random_correlation(4, 20, 1), 4),
                  std::invalid_argument);
}

TEST_CASE("a single group index leaves the group component empty") {
  const auto dec = decompose_modes(random_correlation(6, 30, 2), 1);
  CHECK(dec.group.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("the group component keeps the surrogate block structure") {
  const rmt::synth::BlockSpec spec = {{15, 0.2}, {18, 0.3}, {20, 0.4},
                                      {17, 0.5}, {22, 0.6}, {19, 0.25},
                                      {21, 0.35}, {23, 0.45}, {18, 0.55},
                                      {21, 0.65}};
  const auto panel = rmt::synth::block_surrogate(spec, 10000, 41);
  const Eigen::MatrixXd c = rmt::correlation_of(panel.data).c;
  const auto dec = decompose_modes(c, 10);

  std::vector<int> block_of;
  int b = 0;
  for (const auto& [size, u] : spec) {
    for (int i = 0; i < size; ++i) block_of.push_back(b);
    ++b;
  }
  double within = 0.0, cross = 0.0;
  int n_within = 0, n_cross = 0;
  const Eigen::MatrixXd& grouped = dec.group;
  for (int i = 0; i < 194; ++i) {
    for (int j = i + 1; j < 194; ++j) {
      if (block_of[i] == block_of[j]) {
        within += std::abs(grouped(i, j));
        ++n_within;
      } else {
        cross += std::abs(grouped(i, j));
        ++n_cross;
      }
    }
  }
  CHECK((within / n_within) / (cross / n_cross) >= 5.0);
}

TEST_CASE("group count suggestions follow the bulk edge") {
  Eigen::VectorXd inside(4);
  inside << 1.5, 1.1, 0.9, 0.5;  // all below the edge 1.732 at Q=10
  CHECK(suggest_n_group(inside, 10.0) == 1);

  const auto es = eigendecompose(
      rmt::synth::CorrelationTarget::constant(4, 0.5).zeta);
  CHECK(suggest_n_group(es.values, 10.0) == 1);

  Eigen::VectorXd three_above(6);
  three_above << 9.0, 3.0, 2.0, 1.0, 0.6, 0.4;
  CHECK(suggest_n_group(three_above, 10.0) == 2);
}

TEST_CASE("the leading eigenvalue tracks the mean correlation") {
  std::vector<double> lambda1, mean_c;
  for (int epoch = 0; epoch < 24; ++epoch) {
    const double u = 0.05 + 0.025 * epoch;
    const auto target = rmt::synth::CorrelationTarget::constant(20, u);
    const auto panel = rmt::synth::correlate_panel(
        rmt::synth::gaussian_panel(20, 300, 1.0, rmt::derive_seed(7, epoch)),
        target);
    const auto c = rmt::correlation_of(panel.data);
    lambda1.push_back(eigendecompose(c.c).values(0));
    mean_c.push_back(rmt::dynamics::epoch_stats(c, 0.0).mean_c);
  }
  CHECK(rmt::dynamics::pearson(lambda1, mean_c) > 0.95);
}
