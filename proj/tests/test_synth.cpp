#include <doctest.h>

#include <cmath>

#include "rmt/rng.hpp"
#include "rmt/synth.hpp"

using rmt::synth::BlockSpec;
using rmt::synth::CorrelationTarget;

namespace {

double sample_corr(const Eigen::MatrixXd& data, int a, int b) {
  const Eigen::RowVectorXd x = data.row(a).array() - data.row(a).mean();
  const Eigen::RowVectorXd y = data.row(b).array() - data.row(b).mean();
  return x.dot(y) / std::sqrt(x.squaredNorm() * y.squaredNorm());
}

}  // namespace

TEST_CASE("gaussian panel matches the requested moments") {
  const auto panel = rmt::synth::gaussian_panel(4, 100000, 1.0, 42);
  for (int i = 0; i < 4; ++i) {
    const double mean = panel.data.row(i).mean();
    const double var =
        (panel.data.row(i).array() - mean).square().sum() / panel.cols();
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.03);
  }
}

TEST_CASE("gaussian panel is deterministic in the seed") {
  const auto a = rmt::synth::gaussian_panel(1, 1, 1.0, 7);
  const auto b = rmt::synth::gaussian_panel(1, 1, 1.0, 7);
  CHECK(a.data(0, 0) == b.data(0, 0));

  const auto big_a = rmt::synth::gaussian_panel(3, 50, 2.0, 123);
  const auto big_b = rmt::synth::gaussian_panel(3, 50, 2.0, 123);
  CHECK(big_a.data == big_b.data);
}

TEST_CASE("gaussian panel rejects bad parameters") {
  CHECK_THROWS_AS(rmt::synth::gaussian_panel(2, 10, 0.0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(rmt::synth::gaussian_panel(0, 10, 1.0, 1),
                  std::invalid_argument);
}

TEST_CASE("identity target leaves the panel untouched") {
  const auto panel = rmt::synth::gaussian_panel(5, 40, 1.0, 9);
  const auto out =
      rmt::synth::correlate_panel(panel, CorrelationTarget::identity(5));
  CHECK(out.data.isApprox(panel.data, 1e-14));
}

TEST_CASE("constant target imposes the requested pair correlation") {
  const auto panel = rmt::synth::gaussian_panel(4, 100000, 1.0, 11);
  const auto out =
      rmt::synth::correlate_panel(panel, CorrelationTarget::constant(4, 0.5));
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      CHECK(std::abs(sample_corr(out.data, a, b) - 0.5) < 0.02);
    }
  }
}

TEST_CASE("constant target carries the analytic spectrum") {
  const auto target = CorrelationTarget::constant(6, 0.3);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(target.zeta);
  CHECK(es.eigenvalues()(5) == doctest::Approx(1.0 + 5 * 0.3).epsilon(1e-12));
  for (int i = 0; i < 5; ++i) {
    CHECK(es.eigenvalues()(i) == doctest::Approx(0.7).epsilon(1e-12));
  }
  CHECK_THROWS_AS(CorrelationTarget::constant(4, 1.0), std::invalid_argument);
}

TEST_CASE("non positive definite targets are rejected") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 1.0, 1.0, 1.0;  // eigenvalue 0
  CHECK_THROWS(CorrelationTarget::from_matrix(bad, "degenerate"));
}

TEST_CASE("mismatched target dimension is rejected") {
  const auto panel = rmt::synth::gaussian_panel(3, 10, 1.0, 5);
  CHECK_THROWS_AS(
      rmt::synth::correlate_panel(panel, CorrelationTarget::constant(4, 0.2)),
      std::invalid_argument);
}

TEST_CASE("a single block is a constant-correlation panel") {
  const auto block = rmt::synth::block_surrogate({{5, 0.4}}, 200, 77);
  const auto constant = rmt::synth::correlate_panel(
      rmt::synth::gaussian_panel(5, 200, 1.0, 77),
      CorrelationTarget::constant(5, 0.4));
  CHECK(block.data.isApprox(constant.data, 1e-12));
}

TEST_CASE("block surrogate recovers within-block correlations") {
  const BlockSpec spec = {{15, 0.2}, {18, 0.3}, {20, 0.4}, {17, 0.5},
                          {22, 0.6}, {19, 0.25}, {21, 0.35}, {23, 0.45},
                          {18, 0.55}, {21, 0.65}};  // sums to 194
  int n = 0;
  for (const auto& [size, u] : spec) n += size;
  REQUIRE(n == 194);

  const auto panel = rmt::synth::block_surrogate(spec, 10000, 3);
  int offset = 0;
  for (const auto& [size, u] : spec) {
    double sum = 0.0;
    int pairs = 0;
    for (int a = offset; a < offset + size; ++a) {
      for (int b = a + 1; b < offset + size; ++b) {
        sum += sample_corr(panel.data, a, b);
        ++pairs;
      }
    }
    CHECK(std::abs(sum / pairs - u) < 0.03);
    offset += size;
  }
}

TEST_CASE("block spec validation") {
  CHECK_THROWS_AS(CorrelationTarget::blocks({}), std::invalid_argument);
  CHECK_THROWS_AS(CorrelationTarget::blocks({{0, 0.2}}), std::invalid_argument);
  CHECK_THROWS_AS(CorrelationTarget::blocks({{3, 1.0}}), std::invalid_argument);
}

TEST_CASE("markov chain simulation starts at state zero and is stochastic") {
  Eigen::MatrixXd p(2, 2);
  p << 0.9, 0.1, 0.2, 0.8;
  const auto chain = rmt::synth::markov_chain(p, 2000, 15);
  REQUIRE(chain.size() == 2000);
  CHECK(chain.front() == 0);
  for (int s : chain) CHECK((s == 0 || s == 1));

  Eigen::MatrixXd bad(2, 2);
  bad << 0.5, 0.4, 0.2, 0.8;
  CHECK_THROWS_AS(rmt::synth::markov_chain(bad, 10, 1), std::invalid_argument);
}

TEST_CASE("derived seeds decorrelate ensemble members") {
  CHECK(rmt::derive_seed(1, 0) != rmt::derive_seed(1, 1));
  CHECK(rmt::derive_seed(1, 0) != rmt::derive_seed(2, 0));
  CHECK(rmt::derive_seed(5, 3) == rmt::derive_seed(5, 3));
}
