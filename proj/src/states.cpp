#include "rmt/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rmt/powermap.hpp"
#include "rmt/rng.hpp"

namespace rmt::states {

SimilarityMatrix similarity_matrix(const std::vector<CorrelationMatrix>& cs,
                                   double epsilon) {
  if (cs.empty()) throw std::invalid_argument("empty correlation sequence");
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be >= 0");
  const int n_epoch = static_cast<int>(cs.size());
  const int n = cs.front().size();

  // Flatten the upper triangle of each power-mapped matrix once.
  const std::size_t pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
  Eigen::MatrixXd flat(n_epoch, pairs);
  SimilarityMatrix out;
  for (int e = 0; e < n_epoch; ++e) {
    if (cs[e].size() != n) {
      throw std::invalid_argument("epoch " + std::to_string(e) +
                                  " has mismatched dimension");
    }
    const Eigen::MatrixXd m = powermap::power_map(cs[e].c, epsilon);
    std::size_t p = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) flat(e, p++) = m(i, j);
    }
    out.epoch_labels.push_back(cs[e].epoch_end);
  }

  out.d = Eigen::MatrixXd::Zero(n_epoch, n_epoch);
  for (int a = 0; a < n_epoch; ++a) {
    for (int b = a + 1; b < n_epoch; ++b) {
      const double d = (flat.row(a) - flat.row(b)).cwiseAbs().mean();
      out.d(a, b) = d;
      out.d(b, a) = d;
    }
  }
  return out;
}

MdsEmbedding classical_mds(const SimilarityMatrix& d, int k_dim) {
  if (k_dim < 1) throw std::invalid_argument("k_dim must be >= 1");
  const auto n = d.d.rows();
  if (n < 1 || d.d.cols() != n) {
    throw std::invalid_argument("similarity matrix must be square");
  }
  const Eigen::MatrixXd sq = d.d.cwiseProduct(d.d);
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(n, n) -
      Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  const Eigen::MatrixXd b = -0.5 * centering * sq * centering;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigensolver failed in classical_mds");
  }

  MdsEmbedding out;
  int available = 0;
  for (Eigen::Index i = n - 1; i >= 0 && available < k_dim; --i) {
    if (es.eigenvalues()(i) >= 0.0) ++available;
    else break;
  }
  if (available < k_dim) out.truncated = true;
  const int dims = std::max(available, 1);

  out.coords = Eigen::MatrixXd::Zero(n, dims);
  out.eigvals_used.resize(dims);
  for (int j = 0; j < dims; ++j) {
    const double ev = std::max(0.0, es.eigenvalues()(n - 1 - j));
    out.eigvals_used(j) = ev;
    out.coords.col(j) = es.eigenvectors().col(n - 1 - j) * std::sqrt(ev);
  }
  return out;
}

namespace {

// Greedy k-means++ seeding: D^2-weighted sampling with several candidates
// per step, keeping the candidate that minimizes the total potential.
Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& x, int k, Rng& rng) {
  const auto n = x.rows();
  constexpr int kCandidates = 8;
  Eigen::MatrixXd centroids(k, x.cols());
  centroids.row(0) = x.row(static_cast<Eigen::Index>(rng.uniform_index(n)));
  Eigen::VectorXd d2 =
      (x.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    long best_idx = -1;
    double best_potential = std::numeric_limits<double>::infinity();
    for (int cand = 0; cand < kCandidates; ++cand) {
      long idx = 0;
      if (total > 0.0) {
        double u = rng.uniform() * total;
        while (idx < n - 1 && u >= d2(idx)) u -= d2(idx++);
      } else {
        idx = static_cast<long>(rng.uniform_index(n));
      }
      const Eigen::VectorXd nd =
          d2.cwiseMin((x.rowwise() - x.row(idx)).rowwise().squaredNorm());
      if (nd.sum() < best_potential) {
        best_potential = nd.sum();
        best_idx = idx;
      }
    }
    centroids.row(c) = x.row(best_idx);
    d2 = d2.cwiseMin((x.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }
  return centroids;
}

struct LloydRun {
  std::vector<int> assignment;
  double inertia = 0.0;
  double intra = 0.0;  // mean point-to-centroid distance
  Eigen::MatrixXd centroids;
};

LloydRun lloyd(const Eigen::MatrixXd& x, int k, Rng& rng) {
  const auto n = x.rows();
  Eigen::MatrixXd centroids = kmeanspp_init(x, k, rng);
  std::vector<int> assignment(n, -1);
  for (int iter = 0; iter < 300; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (x.row(i) - centroids.row(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const double d = (x.row(i) - centroids.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assignment[i] != best) {
        assignment[i] = best;
        changed = true;
      }
    }
    if (!changed) break;
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
    std::vector<int> counts(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(assignment[i]) += x.row(i);
      ++counts[assignment[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) centroids.row(c) = sums.row(c) / counts[c];
    }
  }
  LloydRun run;
  run.assignment = std::move(assignment);
  run.centroids = std::move(centroids);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d2 = (x.row(i) - run.centroids.row(run.assignment[i])).squaredNorm();
    run.inertia += d2;
    run.intra += std::sqrt(d2);
  }
  run.intra /= static_cast<double>(n);
  return run;
}

}  // namespace

KmeansResult kmeans_ensemble(const MdsEmbedding& coords, int k, int n_init,
                             std::uint64_t seed) {
  const auto n = coords.coords.rows();
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (k > n) {
    throw std::invalid_argument("k=" + std::to_string(k) +
                                " exceeds number of points " + std::to_string(n));
  }
  if (n_init < 1) throw std::invalid_argument("n_init must be >= 1");

  KmeansResult out;
  double best_inertia = std::numeric_limits<double>::infinity();
  std::vector<double> intras;
  intras.reserve(n_init);
  for (int init = 0; init < n_init; ++init) {
    Rng rng(derive_seed(seed, init));
    LloydRun run = lloyd(coords.coords, k, rng);
    intras.push_back(run.intra);
    if (run.inertia < best_inertia) {
      best_inertia = run.inertia;
      out.assignment = run.assignment;
      out.inertia = run.inertia;
    }
  }
  // Two-pass moments: identical runs must give an exactly zero spread, which
  // the one-pass form destroys through cancellation.
  double sum = 0.0;
  for (double v : intras) sum += v;
  out.intra_mean = sum / n_init;
  double var = 0.0;
  for (double v : intras) var += (v - out.intra_mean) * (v - out.intra_mean);
  out.intra_sd = std::sqrt(var / n_init);
  return out;
}

std::pair<int, std::vector<IntraStats>> optimal_k(const MdsEmbedding& coords,
                                                  int k_lo, int k_hi,
                                                  int n_init,
                                                  std::uint64_t seed) {
  if (k_lo < 1 || k_lo > k_hi) {
    throw std::invalid_argument("invalid k range [" + std::to_string(k_lo) +
                                "," + std::to_string(k_hi) + "]");
  }
  if (n_init < 2) {
    throw std::invalid_argument("optimal_k needs n_init >= 2 for a defined sd");
  }
  std::vector<IntraStats> stats;
  for (int k = k_lo; k <= k_hi; ++k) {
    const KmeansResult r = kmeans_ensemble(coords, k, n_init, derive_seed(seed, k));
    stats.push_back({k, r.intra_mean, r.intra_sd});
  }
  double min_sd = std::numeric_limits<double>::infinity();
  for (const auto& s : stats) min_sd = std::min(min_sd, s.sd);
  int k_star = k_lo;
  for (const auto& s : stats) {
    if (s.sd <= min_sd + 1e-12) k_star = s.k;  // maximum k among minimizers
  }
  return {k_star, stats};
}

Eigen::MatrixXd transition_matrix(const std::vector<int>& assignments, int k,
                                  std::vector<bool>* empty_rows) {
  if (assignments.size() < 2) {
    throw std::invalid_argument("need at least 2 epochs for transitions");
  }
  for (int s : assignments) {
    if (s < 0 || s >= k) {
      throw std::runtime_error("state id " + std::to_string(s) +
                               " outside [0," + std::to_string(k - 1) + "]");
    }
  }
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t t = 0; t + 1 < assignments.size(); ++t) {
    counts(assignments[t], assignments[t + 1]) += 1.0;
  }
  if (empty_rows) empty_rows->assign(k, false);
  for (int a = 0; a < k; ++a) {
    const double total = counts.row(a).sum();
    if (total > 0.0) {
      counts.row(a) /= total;
    } else if (empty_rows) {
      (*empty_rows)[a] = true;
    }
  }
  return counts;
}

std::vector<int> order_states(const std::vector<int>& assignments,
                              const std::vector<CorrelationMatrix>& cs) {
  if (assignments.size() != cs.size()) {
    throw std::invalid_argument("assignments and epochs must align");
  }
  const int k = assignments.empty()
                    ? 0
                    : *std::max_element(assignments.begin(), assignments.end()) + 1;
  std::vector<double> mean_sum(k, 0.0);
  std::vector<int> count(k, 0), first_seen(k, std::numeric_limits<int>::max());
  for (std::size_t e = 0; e < cs.size(); ++e) {
    const int n = cs[e].size();
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) sum += cs[e].c(i, j);
    }
    const int cluster = assignments[e];
    mean_sum[cluster] += sum / (static_cast<double>(n) * (n - 1) / 2);
    ++count[cluster];
    first_seen[cluster] = std::min(first_seen[cluster], static_cast<int>(e));
  }
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ma = count[a] ? mean_sum[a] / count[a] : 0.0;
    const double mb = count[b] ? mean_sum[b] / count[b] : 0.0;
    if (ma != mb) return ma < mb;
    return first_seen[a] < first_seen[b];
  });
  std::vector<int> relabel(k);
  for (int rank = 0; rank < k; ++rank) relabel[order[rank]] = rank;
  std::vector<int> out(assignments.size());
  for (std::size_t e = 0; e < assignments.size(); ++e) {
    out[e] = relabel[assignments[e]];
  }
  return out;
}

MarketStateModel market_states(const std::vector<CorrelationMatrix>& cs,
                               double epsilon, int k_lo, int k_hi, int n_init,
                               std::uint64_t seed, int k_dim) {
  const SimilarityMatrix sim = similarity_matrix(cs, epsilon);
  MarketStateModel model;
  model.embedding = classical_mds(sim, k_dim);
  model.epoch_labels = sim.epoch_labels;

  if (k_lo == k_hi) {
    model.k_star = k_lo;
    const KmeansResult r =
        kmeans_ensemble(model.embedding, k_lo, n_init, derive_seed(seed, k_lo));
    model.intra_stats = {{k_lo, r.intra_mean, r.intra_sd}};
  } else {
    auto [k_star, stats] = optimal_k(model.embedding, k_lo, k_hi, n_init, seed);
    model.k_star = k_star;
    model.intra_stats = std::move(stats);
  }
  model.k = model.k_star;

  const KmeansResult best =
      kmeans_ensemble(model.embedding, model.k, n_init, derive_seed(seed, model.k));
  model.assignments = order_states(best.assignment, cs);

  model.centroids = Eigen::MatrixXd::Zero(model.k, model.embedding.coords.cols());
  std::vector<int> counts(model.k, 0);
  for (std::size_t e = 0; e < model.assignments.size(); ++e) {
    model.centroids.row(model.assignments[e]) += model.embedding.coords.row(e);
    ++counts[model.assignments[e]];
  }
  for (int c = 0; c < model.k; ++c) {
    if (counts[c] > 0) model.centroids.row(c) /= counts[c];
  }
  model.transition =
      transition_matrix(model.assignments, model.k, &model.empty_rows);
  return model;
}

}  // namespace rmt::states
