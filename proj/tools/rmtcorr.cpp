// Command-line driver: each subcommand runs one experiment family end to end
// and writes plot-ready CSV/JSON into --out, together with the resolved
// configuration (config.json). All randomness flows from --seed.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmt/correlation.hpp"
#include "rmt/dynamics.hpp"
#include "rmt/ensembles.hpp"
#include "rmt/ingest.hpp"
#include "rmt/io.hpp"
#include "rmt/modes.hpp"
#include "rmt/powermap.hpp"
#include "rmt/rng.hpp"
#include "rmt/states.hpp"
#include "rmt/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 20160109;

// Concurrent invocations writing into the same directory are unsupported;
// the lock file makes the collision loud instead of silent.
class OutputDir {
public:
  explicit OutputDir(const std::string& path) : dir_(path) {
    fs::create_directories(dir_);
    lock_ = dir_ / ".rmtcorr.lock";
    if (fs::exists(lock_)) {
      throw std::runtime_error("output directory " + path +
                               " is locked by another invocation (" +
                               lock_.string() + ")");
    }
    std::ofstream(lock_) << "locked\n";
  }
  ~OutputDir() {
    std::error_code ec;
    fs::remove(lock_, ec);
  }
  std::string file(const std::string& name) const {
    return (dir_ / name).string();
  }

private:
  fs::path dir_;
  fs::path lock_;
};

rmt::synth::BlockSpec parse_blocks(const std::string& text) {
  // "size:U,size:U,..."
  rmt::synth::BlockSpec spec;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw CLI::ValidationError("--blocks", "expected size:U entries");
    }
    spec.emplace_back(std::stoi(item.substr(0, colon)),
                      std::stod(item.substr(colon + 1)));
  }
  if (spec.empty()) throw CLI::ValidationError("--blocks", "empty block spec");
  return spec;
}

std::vector<double> parse_levels(const std::string& text) {
  std::vector<double> levels;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) levels.push_back(std::stod(item));
  return levels;
}

struct EnsemblesConfig {
  int n = 256;
  int t = 0;
  int m = 0;
  double sigma = 1.0;
  double u = 0.0;
  double epsilon = 0.0;
  int n_ensemble = 200;
  int bins = 100;
  std::uint64_t seed = kDefaultSeed;
  std::string out = "out";
  std::string format = "csv";
};

int cmd_ensembles(const EnsemblesConfig& cfg) {
  OutputDir out(cfg.out);
  const int length = cfg.m > 0 ? cfg.m : cfg.t;
  if (length < 2) {
    throw std::runtime_error("provide --t or --m with a value >= 2");
  }

  rmt::ensembles::GeneratorSpec spec;
  spec.n = cfg.n;
  spec.t = length;
  spec.sigma = cfg.sigma;
  spec.target = cfg.u > 0.0
                    ? rmt::synth::CorrelationTarget::constant(cfg.n, cfg.u)
                    : rmt::synth::CorrelationTarget::identity(cfg.n);

  const auto elements = rmt::ensembles::element_distribution(
      spec, cfg.n_ensemble, cfg.bins, rmt::derive_seed(cfg.seed, 1));

  rmt::ensembles::GeneratorSpec spectrum_spec = spec;
  if (cfg.epsilon > 0.0) spectrum_spec.epsilon = cfg.epsilon;
  const auto spectrum = rmt::ensembles::ensemble_spectrum(
      spectrum_spec, cfg.n_ensemble, cfg.bins, rmt::derive_seed(cfg.seed, 2));

  if (cfg.format == "json") {
    rmt::io::write_json(rmt::io::histogram_json(elements), out.file("elements.json"));
    rmt::io::write_json(rmt::io::histogram_json(spectrum), out.file("spectrum.json"));
  } else {
    rmt::io::write_histogram_csv(elements, out.file("elements.csv"));
    rmt::io::write_histogram_csv(spectrum, out.file("spectrum.csv"));
  }

  // MP reference curve at the spectrum's bin centers.
  {
    std::ofstream mp(out.file("mp_reference.csv"));
    mp << "lambda,density\n";
    const double q = static_cast<double>(length) / cfg.n;
    for (std::size_t i = 0; i < spectrum.density.size(); ++i) {
      const double lambda = spectrum.bin_center(i);
      mp << rmt::io::format_double(lambda, 17) << ","
         << rmt::io::format_double(
                rmt::ensembles::mp_density(lambda, q, cfg.sigma * cfg.sigma), 17)
         << "\n";
    }
  }

  if (cfg.epsilon > 0.0 && length < cfg.n) {
    const Eigen::MatrixXd member = rmt::ensembles::generate_member(
        spec, rmt::derive_seed(cfg.seed, 3));
    const auto em = rmt::powermap::emerging_from(member, length, cfg.epsilon);
    rmt::io::write_json(rmt::io::emerging_json(em, cfg.bins),
                        out.file("emerging.json"));
  }

  rmt::io::write_json(json{{"subcommand", "ensembles"},
                           {"n", cfg.n},
                           {"t", cfg.t},
                           {"m", cfg.m},
                           {"sigma", cfg.sigma},
                           {"u", cfg.u},
                           {"epsilon", cfg.epsilon},
                           {"ensemble", cfg.n_ensemble},
                           {"bins", cfg.bins},
                           {"seed", cfg.seed},
                           {"out", cfg.out},
                           {"format", cfg.format}},
                      out.file("config.json"));
  return 0;
}

struct PowermapConfig {
  std::string cache;
  double epsilon = 0.01;
  int bins = 50;
  std::string out = "out";
  std::uint64_t seed = kDefaultSeed;
};

int cmd_powermap(const PowermapConfig& cfg) {
  OutputDir out(cfg.out);
  const auto cs = rmt::ingest::load_correlation_cache(cfg.cache);
  json epochs = json::array();
  for (const auto& c : cs) {
    auto em = rmt::powermap::emerging_spectrum(c, cfg.epsilon);
    json j = rmt::io::emerging_json(em, cfg.bins);
    j["tau"] = c.epoch_end;
    epochs.push_back(std::move(j));
  }
  rmt::io::write_json(epochs, out.file("emerging.json"));
  rmt::io::write_json(json{{"subcommand", "powermap"},
                           {"cache", cfg.cache},
                           {"epsilon", cfg.epsilon},
                           {"bins", cfg.bins},
                           {"seed", cfg.seed},
                           {"out", cfg.out}},
                      out.file("config.json"));
  return 0;
}

struct DynamicsConfig {
  std::string input;
  int n = 0;
  int t = 0;
  double u = 0.0;
  double u2 = -1.0;  // optional regime switch level at T/2
  int m = 20;
  int shift = 10;
  double epsilon = 0.01;
  std::uint64_t seed = kDefaultSeed;
  std::string out = "out";
};

rmt::ReturnMatrix dynamics_returns(const DynamicsConfig& cfg) {
  if (!cfg.input.empty()) {
    rmt::ingest::LoadReport report;
    const auto panel = rmt::ingest::load_prices(cfg.input, &report);
    for (const auto& [asset, reason] : report.dropped) {
      std::fprintf(stderr, "dropped %s: %s\n", asset.c_str(), reason.c_str());
    }
    return rmt::log_returns(panel);
  }
  if (cfg.n < 2 || cfg.t < 2) {
    throw std::runtime_error("surrogate mode needs --n and --t");
  }
  auto make = [&](double u, int t, std::uint64_t s) {
    auto p = rmt::synth::gaussian_panel(cfg.n, t, 1.0, s);
    if (u > 0.0) {
      p = rmt::synth::correlate_panel(
          p, rmt::synth::CorrelationTarget::constant(cfg.n, u));
    }
    return p.data;
  };
  rmt::ReturnMatrix r;
  if (cfg.u2 >= 0.0) {
    const int half = cfg.t / 2;
    r.returns.resize(cfg.n, cfg.t);
    r.returns.leftCols(half) = make(cfg.u, half, rmt::derive_seed(cfg.seed, 1));
    r.returns.rightCols(cfg.t - half) =
        make(cfg.u2, cfg.t - half, rmt::derive_seed(cfg.seed, 2));
  } else {
    r.returns = make(cfg.u, cfg.t, rmt::derive_seed(cfg.seed, 1));
  }
  return r;
}

int cmd_dynamics(const DynamicsConfig& cfg) {
  OutputDir out(cfg.out);
  const auto returns = dynamics_returns(cfg);
  const auto cs = rmt::rolling_correlations(returns, cfg.m, cfg.shift);
  const auto stats = rmt::dynamics::stats_series(cs, cfg.epsilon);
  rmt::io::write_stats_csv(stats, out.file("stats.csv"));

  std::vector<double> mean_c, mean_abs;
  std::vector<std::string> taus;
  for (const auto& s : stats) {
    mean_c.push_back(s.mean_c);
    mean_abs.push_back(s.mean_abs_c);
    taus.push_back(s.tau);
  }
  for (int lag = 0; lag <= 3; ++lag) {
    if (mean_c.size() < static_cast<std::size_t>(lag) + 3) break;
    const auto rel = rmt::dynamics::lagged_relation(mean_c, mean_abs, lag);
    rmt::io::write_scatter_csv(
        rel, taus, out.file("scatter_mean_abs_lag" + std::to_string(lag) + ".csv"));
  }

  rmt::io::write_json(json{{"subcommand", "dynamics"},
                           {"input", cfg.input},
                           {"n", cfg.n},
                           {"t", cfg.t},
                           {"u", cfg.u},
                           {"u2", cfg.u2},
                           {"m", cfg.m},
                           {"shift", cfg.shift},
                           {"epsilon", cfg.epsilon},
                           {"seed", cfg.seed},
                           {"out", cfg.out}},
                      out.file("config.json"));
  return 0;
}

struct ModesConfig {
  std::string input;
  std::string sectors;
  std::string blocks;
  int t = 10000;
  int n_group = 0;  // 0 = choose with suggest_n_group
  std::uint64_t seed = kDefaultSeed;
  std::string out = "out";
};

int cmd_modes(const ModesConfig& cfg) {
  OutputDir out(cfg.out);
  rmt::CorrelationMatrix c;
  int series_len = 0;
  if (!cfg.input.empty()) {
    rmt::ingest::LoadReport report;
    auto panel = rmt::ingest::load_prices(cfg.input, &report);
    if (!cfg.sectors.empty()) {
      panel = rmt::ingest::sector_sort(panel, rmt::ingest::load_sectors(cfg.sectors));
    }
    const auto returns = rmt::log_returns(panel);
    series_len = static_cast<int>(returns.returns.cols());
    c = rmt::correlation_of(returns.returns);
    c.asset_ids = returns.asset_ids;
  } else if (!cfg.blocks.empty()) {
    const auto panel =
        rmt::synth::block_surrogate(parse_blocks(cfg.blocks), cfg.t, cfg.seed);
    series_len = cfg.t;
    c = rmt::correlation_of(panel.data);
  } else {
    throw std::runtime_error("provide --input or --blocks");
  }

  const auto es = rmt::modes::eigendecompose(c.c);
  const double q = static_cast<double>(series_len) / c.size();
  const int suggested = rmt::modes::suggest_n_group(es.values, q);
  const int n_group = cfg.n_group > 0 ? cfg.n_group : suggested;
  const auto dec = rmt::modes::decompose_modes(c.c, n_group);

  {
    std::ofstream ladder(out.file("eigenvalues.csv"));
    ladder << "rank,eigenvalue\n";
    for (Eigen::Index i = 0; i < es.values.size(); ++i) {
      ladder << i + 1 << "," << rmt::io::format_double(es.values(i), 17) << "\n";
    }
  }
  rmt::io::write_matrix_csv(dec.market, out.file("market.csv"), c.asset_ids);
  rmt::io::write_matrix_csv(dec.group, out.file("group.csv"), c.asset_ids);
  rmt::io::write_matrix_csv(dec.random_modes, out.file("random.csv"), c.asset_ids);
  rmt::io::write_json(json{{"n_group", n_group},
                           {"suggested_n_group", suggested},
                           {"q", q},
                           {"lambda_max", es.values(0)},
                           {"lambda_min", es.values(es.values.size() - 1)}},
                      out.file("summary.json"));

  rmt::io::write_json(json{{"subcommand", "modes"},
                           {"input", cfg.input},
                           {"sectors", cfg.sectors},
                           {"blocks", cfg.blocks},
                           {"t", cfg.t},
                           {"n_group", cfg.n_group},
                           {"seed", cfg.seed},
                           {"out", cfg.out}},
                      out.file("config.json"));
  return 0;
}

struct StatesConfig {
  std::string input;
  std::string cache;
  std::string regimes;  // comma-separated U levels
  int n = 40;
  int epochs = 100;
  int m = 20;
  int shift = 10;
  double self_prob = 0.85;
  double epsilon = 0.6;
  int k_min = 2;
  int k_max = 8;
  int n_init = 500;
  std::uint64_t seed = kDefaultSeed;
  std::string out = "out";
};

std::vector<rmt::CorrelationMatrix> states_correlations(const StatesConfig& cfg) {
  if (!cfg.cache.empty()) {
    return rmt::ingest::load_correlation_cache(cfg.cache);
  }
  if (!cfg.input.empty()) {
    rmt::ingest::LoadReport report;
    const auto panel = rmt::ingest::load_prices(cfg.input, &report);
    return rmt::rolling_correlations(rmt::log_returns(panel), cfg.m, cfg.shift);
  }
  if (!cfg.regimes.empty()) {
    const auto levels = parse_levels(cfg.regimes);
    const int k = static_cast<int>(levels.size());
    // Sticky nearest-neighbor chain over the regime levels.
    Eigen::MatrixXd chain = Eigen::MatrixXd::Zero(k, k);
    for (int a = 0; a < k; ++a) {
      chain(a, a) = cfg.self_prob;
      const double rest = 1.0 - cfg.self_prob;
      if (a == 0) chain(a, 1) = rest;
      else if (a == k - 1) chain(a, a - 1) = rest;
      else {
        chain(a, a - 1) = rest / 2;
        chain(a, a + 1) = rest / 2;
      }
    }
    const auto regime = rmt::synth::markov_chain(chain, cfg.epochs,
                                                 rmt::derive_seed(cfg.seed, 0));
    std::vector<rmt::CorrelationMatrix> cs;
    for (int e = 0; e < cfg.epochs; ++e) {
      rmt::ensembles::GeneratorSpec spec;
      spec.n = cfg.n;
      spec.t = cfg.m;
      const double u = levels[regime[e]];
      spec.target = u > 0.0 ? rmt::synth::CorrelationTarget::constant(cfg.n, u)
                            : rmt::synth::CorrelationTarget::identity(cfg.n);
      rmt::CorrelationMatrix c;
      c.c = rmt::ensembles::generate_member(spec,
                                            rmt::derive_seed(cfg.seed, 100 + e));
      c.epoch_len = cfg.m;
      c.epoch_end = std::to_string(e);
      cs.push_back(std::move(c));
    }
    return cs;
  }
  throw std::runtime_error("provide --cache, --input or --regimes");
}

int cmd_states(const StatesConfig& cfg) {
  OutputDir out(cfg.out);
  const auto cs = states_correlations(cfg);
  const auto model = rmt::states::market_states(cs, cfg.epsilon, cfg.k_min,
                                                cfg.k_max, cfg.n_init, cfg.seed);

  const auto sim = rmt::states::similarity_matrix(cs, cfg.epsilon);
  rmt::io::write_matrix_csv(sim.d, out.file("similarity.csv"), sim.epoch_labels);
  rmt::io::write_state_cloud_csv(model, out.file("mds.csv"));
  {
    std::ofstream intra(out.file("intra_stats.csv"));
    intra << "k,intra_mean,intra_sd\n";
    for (const auto& s : model.intra_stats) {
      intra << s.k << "," << rmt::io::format_double(s.mean, 17) << ","
            << rmt::io::format_double(s.sd, 17) << "\n";
    }
  }
  rmt::io::write_matrix_csv(model.transition, out.file("transitions.csv"));
  rmt::io::write_json(rmt::io::market_state_json(model), out.file("model.json"));

  rmt::io::write_json(json{{"subcommand", "states"},
                           {"input", cfg.input},
                           {"cache", cfg.cache},
                           {"regimes", cfg.regimes},
                           {"n", cfg.n},
                           {"epochs", cfg.epochs},
                           {"m", cfg.m},
                           {"shift", cfg.shift},
                           {"self_prob", cfg.self_prob},
                           {"epsilon", cfg.epsilon},
                           {"k_min", cfg.k_min},
                           {"k_max", cfg.k_max},
                           {"n_init", cfg.n_init},
                           {"seed", cfg.seed},
                           {"out", cfg.out}},
                      out.file("config.json"));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-matrix correlation analysis experiments"};
  app.require_subcommand(1);

  EnsemblesConfig ec;
  auto* ens = app.add_subcommand(
      "ensembles",
      "Wishart / correlated-Wishart spectra vs the Marchenko-Pastur law "
      "(long series: --n 1024 --t 10240 --ensemble 200; short epochs with an "
      "emerging spectrum: --n 1024 --m 64 --epsilon 0.001)");
  ens->add_option("--n", ec.n, "number of series")->envname("RMT_N");
  ens->add_option("--t", ec.t, "series length")->envname("RMT_T");
  ens->add_option("--m", ec.m, "short epoch length (overrides --t)")
      ->envname("RMT_M");
  ens->add_option("--sigma", ec.sigma, "per-series standard deviation");
  ens->add_option("--u", ec.u, "constant correlation strength")->envname("RMT_U");
  ens->add_option("--epsilon", ec.epsilon, "power-map distortion")
      ->envname("RMT_EPSILON");
  ens->add_option("--ensemble", ec.n_ensemble, "ensemble members")
      ->envname("RMT_ENSEMBLE");
  ens->add_option("--bins", ec.bins, "histogram bins")->envname("RMT_BINS");
  ens->add_option("--seed", ec.seed, "base seed")->envname("RMT_SEED");
  ens->add_option("--out", ec.out, "output directory")->envname("RMT_OUT");
  ens->add_option("--format", ec.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  PowermapConfig pc;
  auto* pow = app.add_subcommand(
      "powermap", "Emerging spectra of a cached correlation sequence");
  pow->add_option("--cache", pc.cache, "correlation cache file")->required();
  pow->add_option("--epsilon", pc.epsilon, "power-map distortion")
      ->envname("RMT_EPSILON");
  pow->add_option("--bins", pc.bins, "histogram bins");
  pow->add_option("--out", pc.out, "output directory")->envname("RMT_OUT");
  pow->add_option("--seed", pc.seed, "base seed")->envname("RMT_SEED");

  DynamicsConfig dc;
  auto* dyn = app.add_subcommand(
      "dynamics",
      "Rolling-epoch correlation statistics (empirical recipe: --input prices.csv "
      "--m 20 --shift 1; surrogate: --n 30 --t 2000 --u 0.1 --u2 0.7)");
  dyn->add_option("--input", dc.input, "price CSV")->envname("RMT_INPUT");
  dyn->add_option("--n", dc.n, "surrogate series count")->envname("RMT_N");
  dyn->add_option("--t", dc.t, "surrogate length")->envname("RMT_T");
  dyn->add_option("--u", dc.u, "surrogate correlation");
  dyn->add_option("--u2", dc.u2, "second-half correlation (regime switch)");
  dyn->add_option("--m", dc.m, "epoch length")->envname("RMT_M");
  dyn->add_option("--shift", dc.shift, "epoch shift")->envname("RMT_SHIFT");
  dyn->add_option("--epsilon", dc.epsilon, "power-map distortion")
      ->envname("RMT_EPSILON");
  dyn->add_option("--seed", dc.seed, "base seed")->envname("RMT_SEED");
  dyn->add_option("--out", dc.out, "output directory")->envname("RMT_OUT");

  ModesConfig mc;
  auto* mod = app.add_subcommand(
      "modes",
      "Market/group/random mode decomposition of a full-period correlation "
      "matrix (--input prices.csv, or --blocks 20:0.3,30:0.5 --t 10000)");
  mod->add_option("--input", mc.input, "price CSV")->envname("RMT_INPUT");
  mod->add_option("--sectors", mc.sectors, "sector map CSV")
      ->envname("RMT_SECTORS");
  mod->add_option("--blocks", mc.blocks, "surrogate block spec size:U,...");
  mod->add_option("--t", mc.t, "surrogate length")->envname("RMT_T");
  mod->add_option("--n-group", mc.n_group, "group mode count (0 = automatic)")
      ->check(CLI::NonNegativeNumber);
  mod->add_option("--seed", mc.seed, "base seed")->envname("RMT_SEED");
  mod->add_option("--out", mc.out, "output directory")->envname("RMT_OUT");

  StatesConfig sc;
  auto* sta = app.add_subcommand(
      "states",
      "Market-state pipeline: similarity, MDS, k-means, transitions "
      "(empirical recipe: --input prices.csv --m 20 --shift 10 --epsilon 0.6)");
  sta->add_option("--input", sc.input, "price CSV")->envname("RMT_INPUT");
  sta->add_option("--cache", sc.cache, "correlation cache file");
  sta->add_option("--regimes", sc.regimes, "surrogate U levels, e.g. 0.1,0.4");
  sta->add_option("--n", sc.n, "surrogate series count")->envname("RMT_N");
  sta->add_option("--epochs", sc.epochs, "surrogate epoch count");
  sta->add_option("--m", sc.m, "epoch length")->envname("RMT_M");
  sta->add_option("--shift", sc.shift, "epoch shift")->envname("RMT_SHIFT");
  sta->add_option("--self-prob", sc.self_prob, "surrogate chain self prob");
  sta->add_option("--epsilon", sc.epsilon, "noise suppression")
      ->envname("RMT_EPSILON");
  sta->add_option("--k-min", sc.k_min, "smallest k")->envname("RMT_K_MIN");
  sta->add_option("--k-max", sc.k_max, "largest k")->envname("RMT_K_MAX");
  sta->add_option("--n-init", sc.n_init, "k-means initial conditions")
      ->envname("RMT_N_INIT");
  sta->add_option("--seed", sc.seed, "base seed")->envname("RMT_SEED");
  sta->add_option("--out", sc.out, "output directory")->envname("RMT_OUT");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ens) return cmd_ensembles(ec);
    if (*pow) return cmd_powermap(pc);
    if (*dyn) return cmd_dynamics(dc);
    if (*mod) return cmd_modes(mc);
    if (*sta) return cmd_states(sc);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
