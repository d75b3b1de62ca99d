#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "rmt/correlation.hpp"
#include "rmt/dynamics.hpp"
#include "rmt/ensembles.hpp"
#include "rmt/powermap.hpp"
#include "rmt/states.hpp"
#include "rmt/synth.hpp"

namespace rmt::io {

/// Shortest representation with the given significant digits; 17 round-trips
/// doubles exactly.
std::string format_double(double v, int precision = 12);

/// Panel CSV: header row of series ids, one row per series.
void write_panel_csv(const synth::GaussianPanel& panel, const std::string& path,
                     const std::vector<std::string>& ids = {});

/// Full matrix with a header row/column of asset ids.
void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path,
                      const std::vector<std::string>& ids = {});
CorrelationMatrix read_matrix_csv(const std::string& path);

/// (bin_center, density) rows.
void write_histogram_csv(const ensembles::Histogram& h, const std::string& path);
nlohmann::json histogram_json(const ensembles::Histogram& h);

nlohmann::json emerging_json(const powermap::EmergingSpectrum& em, int bins);

/// One row per epoch with every EpochStats field.
void write_stats_csv(const std::vector<dynamics::EpochStats>& stats,
                     const std::string& path);

/// (x, y, tau) scatter rows.
void write_scatter_csv(const dynamics::LaggedRelation& rel,
                       const std::vector<std::string>& taus,
                       const std::string& path);

nlohmann::json market_state_json(const states::MarketStateModel& model);

/// (tau, x, y, z..., state) point cloud.
void write_state_cloud_csv(const states::MarketStateModel& model,
                           const std::string& path);

void write_json(const nlohmann::json& j, const std::string& path);

}  // namespace rmt::io
