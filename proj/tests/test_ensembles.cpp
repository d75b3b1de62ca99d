#include <doctest.h>

#include <cmath>
#include <numeric>

#include "rmt/ensembles.hpp"
#include "rmt/modes.hpp"
#include "rmt/rng.hpp"
#include "rmt/synth.hpp"

using namespace rmt::ensembles;

TEST_CASE("wishart of a single row of ones is the identity scalar") {
  rmt::synth::GaussianPanel panel;
  panel.data = Eigen::MatrixXd::Ones(1, 7);
  const auto w = wishart(panel);
  REQUIRE(w.m.rows() == 1);
  CHECK(w.m(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("wishart matches a hand-multiplied product") {
  rmt::synth::GaussianPanel panel;
  panel.data.resize(2, 3);
  panel.data << 1.0, 2.0, -1.0,
      0.5, -1.0, 2.0;
  const auto w = wishart(panel);
  // (1/3) B B' computed by hand.
  CHECK(w.m(0, 0) == doctest::Approx((1.0 + 4.0 + 1.0) / 3.0));
  CHECK(w.m(0, 1) == doctest::Approx((0.5 - 2.0 - 2.0) / 3.0));
  CHECK(w.m(1, 0) == w.m(0, 1));
  CHECK(w.m(1, 1) == doctest::Approx((0.25 + 1.0 + 4.0) / 3.0));
  CHECK(w.q_ratio == doctest::Approx(1.5));
}

TEST_CASE("density evaluation and support bounds") {
  const auto [lo, hi] = mp_bounds(10.0, 1.0);
  CHECK(std::abs(lo - 0.468) < 5e-4);
  CHECK(std::abs(hi - 1.732) < 5e-4);

  CHECK(mp_density(2.0, 10.0, 1.0) == 0.0);  // above the upper edge
  CHECK(mp_density(1.0, 10.0, 1.0) == doctest::Approx(0.9932).epsilon(1e-3));
  CHECK(mp_density(lo, 10.0, 1.0) == 0.0);
  CHECK(mp_density(hi, 10.0, 1.0) == 0.0);
  CHECK(mp_density(-0.5, 10.0, 1.0) == 0.0);

  const auto square = mp_bounds(1.0, 1.0);
  CHECK(square.first == doctest::Approx(0.0));
  CHECK(square.second == doctest::Approx(4.0));
  const auto scaled = mp_bounds(4.0, 2.0);
  CHECK(scaled.first == doctest::Approx(0.5));
  CHECK(scaled.second == doctest::Approx(4.5));
}

TEST_CASE("zero mass below the square ratio") {
  CHECK(mp_zero_mass(10.0) == 0.0);
  CHECK(mp_zero_mass(0.25) == doctest::Approx(0.75));
  CHECK(mp_zero_mass(1.0) == 0.0);
}

TEST_CASE("histograms integrate to one") {
  std::vector<double> values;
  rmt::Rng rng(44);
  for (int i = 0; i < 5000; ++i) values.push_back(rng.gaussian());
  const Histogram h = make_histogram(values, 40);
  REQUIRE(h.bin_edges.size() == h.density.size() + 1);
  double mass = 0.0;
  for (std::size_t i = 0; i < h.density.size(); ++i) {
    CHECK(h.density[i] >= 0.0);
    CHECK(h.bin_edges[i] < h.bin_edges[i + 1]);
    mass += h.density[i] * (h.bin_edges[i + 1] - h.bin_edges[i]);
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("single-member spectrum equals a direct computation") {
  GeneratorSpec spec;
  spec.n = 4;
  spec.t = 8;
  const std::uint64_t seed = 99;
  const Histogram h = ensemble_spectrum(spec, 1, 10, seed);

  const Eigen::MatrixXd m = generate_member(spec, rmt::derive_seed(seed, 0));
  const auto es = rmt::modes::eigendecompose(m);
  std::vector<double> eigs(es.values.data(), es.values.data() + 4);
  const Histogram direct = make_histogram(eigs, 10);
  CHECK(h.bin_edges == direct.bin_edges);
  CHECK(h.density == direct.density);
}

TEST_CASE("short demeaned epochs produce the degenerate zero cloud") {
  GeneratorSpec spec;
  spec.n = 64;
  spec.t = 16;
  for (int member = 0; member < 3; ++member) {
    const Eigen::MatrixXd m = generate_member(spec, rmt::derive_seed(5, member));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    int zeros = 0;
    for (Eigen::Index i = 0; i < 64; ++i) {
      if (std::abs(es.eigenvalues()(i)) < 1e-10) ++zeros;
    }
    CHECK(zeros == 64 - 16 + 1);
  }
}

TEST_CASE("spectrum density tracks the limiting law at large Q") {
  GeneratorSpec spec;
  spec.n = 128;
  spec.t = 1280;
  const Histogram h = ensemble_spectrum(spec, 50, 40, 17);
  const auto [lo, hi] = mp_bounds(10.0, 1.0);
  double worst = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < h.density.size(); ++i) {
    const double center = h.bin_center(i);
    if (center < lo + 0.05 || center > hi - 0.05) continue;
    worst = std::max(worst, std::abs(h.density[i] - mp_density(center, 10.0, 1.0)));
    ++used;
  }
  REQUIRE(used > 10);
  CHECK(worst < 0.15);
}

TEST_CASE("element distributions center on the population correlation") {
  GeneratorSpec identity_spec;
  identity_spec.n = 32;
  identity_spec.t = 128;
  const Histogram h0 = element_distribution(identity_spec, 20, 30, 23);
  double mean = 0.0, mass = 0.0;
  for (std::size_t i = 0; i < h0.density.size(); ++i) {
    const double w = h0.density[i] * (h0.bin_edges[i + 1] - h0.bin_edges[i]);
    mean += h0.bin_center(i) * w;
    mass += w;
  }
  mean /= mass;
  // standard error of the mean element is ~ (1/sqrt(T)) / sqrt(#pairs * members)
  CHECK(std::abs(mean) < 3.0 / std::sqrt(128.0 * 496 * 20));

  GeneratorSpec constant_spec = identity_spec;
  constant_spec.t = 256;
  constant_spec.target = rmt::synth::CorrelationTarget::constant(32, 0.3);
  const Histogram h1 = element_distribution(constant_spec, 40, 30, 23);
  double mean1 = 0.0, mass1 = 0.0;
  for (std::size_t i = 0; i < h1.density.size(); ++i) {
    const double w = h1.density[i] * (h1.bin_edges[i + 1] - h1.bin_edges[i]);
    mean1 += h1.bin_center(i) * w;
    mass1 += w;
  }
  CHECK(std::abs(mean1 / mass1 - 0.3) < 0.01);
}

TEST_CASE("element variance shrinks as N and T grow at fixed Q") {
  auto element_variance = [](int n, int t) {
    GeneratorSpec spec;
    spec.n = n;
    spec.t = t;
    spec.demean = false;
    double sum = 0.0, sum_sq = 0.0;
    std::size_t count = 0;
    for (int member = 0; member < 20; ++member) {
      const Eigen::MatrixXd m = generate_member(spec, rmt::derive_seed(61, member));
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          sum += m(i, j);
          sum_sq += m(i, j) * m(i, j);
          ++count;
        }
      }
    }
    const double mean = sum / count;
    return sum_sq / count - mean * mean;
  };
  CHECK(element_variance(64, 256) < element_variance(32, 128));
}

TEST_CASE("generated members satisfy the positive semi-definite contract") {
  GeneratorSpec spec;
  spec.n = 16;
  spec.t = 40;
  spec.target = rmt::synth::CorrelationTarget::constant(16, 0.4);
  for (int member = 0; member < 5; ++member) {
    const Eigen::MatrixXd m = generate_member(spec, rmt::derive_seed(2, member));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
    CHECK(std::abs(es.eigenvalues().sum() - m.trace()) < 1e-8 * 16);
  }
}
