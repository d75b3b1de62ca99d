#include "rmt/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rmt::io {

std::string format_double(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

void write_panel_csv(const synth::GaussianPanel& panel, const std::string& path,
                     const std::vector<std::string>& ids) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < panel.data.rows(); ++i) {
    if (i) out << ",";
    out << (i < static_cast<Eigen::Index>(ids.size())
                ? ids[i]
                : "series" + std::to_string(i));
  }
  out << "\n";
  // rows = series
  for (Eigen::Index i = 0; i < panel.data.rows(); ++i) {
    for (Eigen::Index t = 0; t < panel.data.cols(); ++t) {
      if (t) out << ",";
      out << format_double(panel.data(i, t), 17);
    }
    out << "\n";
  }
}

void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path,
                      const std::vector<std::string>& ids) {
  auto out = open_out(path);
  auto id = [&](Eigen::Index i) {
    return i < static_cast<Eigen::Index>(ids.size()) ? ids[i]
                                                     : "a" + std::to_string(i);
  };
  out << "id";
  for (Eigen::Index j = 0; j < m.cols(); ++j) out << "," << id(j);
  out << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << id(i);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << "," << format_double(m(i, j), 17);
    }
    out << "\n";
  }
}

CorrelationMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  std::vector<std::string> ids;
  {
    std::stringstream ss(line);
    std::string f;
    bool first = true;
    while (std::getline(ss, f, ',')) {
      if (!first) ids.push_back(f);
      first = false;
    }
  }
  const auto n = static_cast<Eigen::Index>(ids.size());
  CorrelationMatrix c;
  c.asset_ids = ids;
  c.c.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error(path + ": truncated");
    std::stringstream ss(line);
    std::string f;
    std::getline(ss, f, ',');  // row id
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!std::getline(ss, f, ',')) {
        throw std::runtime_error(path + ": truncated row " + std::to_string(i));
      }
      c.c(i, j) = std::stod(f);
    }
  }
  return c;
}

void write_histogram_csv(const ensembles::Histogram& h, const std::string& path) {
  auto out = open_out(path);
  out << "bin_center,density\n";
  for (std::size_t i = 0; i < h.density.size(); ++i) {
    out << format_double(h.bin_center(i), 17) << ","
        << format_double(h.density[i], 17) << "\n";
  }
}

nlohmann::json histogram_json(const ensembles::Histogram& h) {
  return {{"bin_edges", h.bin_edges},
          {"density", h.density},
          {"n_samples", h.n_samples},
          {"n_ensemble", h.n_ensemble},
          {"normalization", h.normalization}};
}

nlohmann::json emerging_json(const powermap::EmergingSpectrum& em, int bins) {
  const ensembles::Histogram h = ensembles::make_histogram(em.emerging, bins);
  return {{"epsilon", em.epsilon},
          {"lambda_min", em.lambda_min},
          {"neg_count", em.neg_count},
          {"separated", em.separated},
          {"histogram", histogram_json(h)}};
}

void write_stats_csv(const std::vector<dynamics::EpochStats>& stats,
                     const std::string& path) {
  auto out = open_out(path);
  out << "tau,mean_c,mean_abs_c,df,variance,skewness,kurtosis,"
         "lambda_max,lambda_min_emerging,neg_count\n";
  for (const auto& s : stats) {
    out << s.tau << "," << format_double(s.mean_c, 17) << ","
        << format_double(s.mean_abs_c, 17) << "," << format_double(s.df, 17)
        << "," << format_double(s.variance, 17) << ","
        << (s.moments_degenerate ? "nan" : format_double(s.skewness, 17)) << ","
        << (s.moments_degenerate ? "nan" : format_double(s.kurtosis, 17)) << ","
        << format_double(s.lambda_max, 17) << ",";
    if (s.lambda_min_emerging) out << format_double(*s.lambda_min_emerging, 17);
    out << ",";
    if (s.neg_count) out << *s.neg_count;
    out << "\n";
  }
}

void write_scatter_csv(const dynamics::LaggedRelation& rel,
                       const std::vector<std::string>& taus,
                       const std::string& path) {
  auto out = open_out(path);
  out << "x,y,tau\n";
  for (std::size_t i = 0; i < rel.points.size(); ++i) {
    out << format_double(rel.points[i].first, 17) << ","
        << format_double(rel.points[i].second, 17) << ","
        << (i < taus.size() ? taus[i] : std::to_string(i)) << "\n";
  }
}

nlohmann::json market_state_json(const states::MarketStateModel& model) {
  nlohmann::json assignments = nlohmann::json::object();
  for (std::size_t e = 0; e < model.assignments.size(); ++e) {
    const std::string tau = e < model.epoch_labels.size()
                                ? model.epoch_labels[e]
                                : std::to_string(e);
    assignments[tau] = "S" + std::to_string(model.assignments[e] + 1);
  }
  nlohmann::json intra = nlohmann::json::array();
  for (const auto& s : model.intra_stats) {
    intra.push_back({{"k", s.k}, {"mean", s.mean}, {"sd", s.sd}});
  }
  nlohmann::json transition = nlohmann::json::array();
  for (Eigen::Index i = 0; i < model.transition.rows(); ++i) {
    std::vector<double> row(model.transition.cols());
    for (Eigen::Index j = 0; j < model.transition.cols(); ++j) {
      row[j] = model.transition(i, j);
    }
    transition.push_back(row);
  }
  return {{"k", model.k},
          {"k_star", model.k_star},
          {"assignments", assignments},
          {"intra_stats", intra},
          {"transition", transition},
          {"empty_rows", model.empty_rows}};
}

void write_state_cloud_csv(const states::MarketStateModel& model,
                           const std::string& path) {
  auto out = open_out(path);
  const auto dims = model.embedding.coords.cols();
  out << "tau";
  for (Eigen::Index d = 0; d < dims; ++d) {
    out << "," << static_cast<char>('x' + d);
  }
  out << ",state\n";
  for (std::size_t e = 0; e < model.assignments.size(); ++e) {
    out << (e < model.epoch_labels.size() ? model.epoch_labels[e]
                                          : std::to_string(e));
    for (Eigen::Index d = 0; d < dims; ++d) {
      out << "," << format_double(model.embedding.coords(e, d), 17);
    }
    out << ",S" << model.assignments[e] + 1 << "\n";
  }
}

void write_json(const nlohmann::json& j, const std::string& path) {
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace rmt::io
