#pragma once

#include <map>
#include <string>
#include <vector>

#include "rmt/correlation.hpp"

namespace rmt::ingest {

/// asset id -> sector label (Table-1 style vocabulary plus "other").
using SectorMap = std::map<std::string, std::string>;

/// Canonical sector ordering used by sector_sort.
const std::vector<std::string>& sector_order();

struct LoadReport {
  // (asset id, reason) for every asset dropped during ingestion.
  std::vector<std::pair<std::string, std::string>> dropped;
};

/// Loads a price CSV: header `date,ASSET1,ASSET2,...`, one ISO-8601 date per
/// row. Assets with any missing or non-positive value are dropped and
/// reported; an empty panel after filtering is an error.
PricePanel load_prices(const std::string& path, LoadReport* report = nullptr);

/// Writes the same layout back out (17 significant digits, round-trip exact).
void save_prices(const PricePanel& panel, const std::string& path);

/// Two-column CSV `asset_id,sector`.
SectorMap load_sectors(const std::string& path);

/// Reorders rows by (sector rank, asset id); unmapped assets sort into a
/// trailing "other" block. Stable and deterministic.
PricePanel sector_sort(const PricePanel& panel, const SectorMap& sectors);

/// Fixed-layout binary cache of a correlation sequence: magic "RMTCACH1",
/// u64 epoch count, u64 matrix dim, u64 epoch length, then each matrix as
/// row-major f64, then a footer with epoch labels and asset ids
/// (u32 length-prefixed strings) and the closing magic "RMTCEND1".
void save_correlation_cache(const std::string& path,
                            const std::vector<CorrelationMatrix>& cs);
std::vector<CorrelationMatrix> load_correlation_cache(const std::string& path);

}  // namespace rmt::ingest
