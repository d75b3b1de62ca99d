#include "rmt/ingest.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rmt/io.hpp"

namespace rmt::ingest {

namespace {

constexpr char kCacheMagic[9] = "RMTCACH1";
constexpr char kCacheEnd[9] = "RMTCEND1";

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

void write_string(std::ostream& os, const std::string& s) {
  const auto len = static_cast<std::uint32_t>(s.size());
  os.write(reinterpret_cast<const char*>(&len), sizeof(len));
  os.write(s.data(), len);
}

std::string read_string(std::istream& is) {
  std::uint32_t len = 0;
  is.read(reinterpret_cast<char*>(&len), sizeof(len));
  std::string s(len, '\0');
  is.read(s.data(), len);
  if (!is) throw std::runtime_error("truncated correlation cache");
  return s;
}

}  // namespace

const std::vector<std::string>& sector_order() {
  static const std::vector<std::string> order = {
      "CD", "CS", "HC", "EG", "FN", "ID", "IT", "MT", "TC", "UT", "other"};
  return order;
}

PricePanel load_prices(const std::string& path, LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open price file " + path);

  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path + ":1: empty price file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "date") {
    throw std::runtime_error(path + ":1: expected header 'date,<asset>,...'");
  }
  const std::size_t n_assets = header.size() - 1;

  std::vector<std::string> dates;
  std::vector<std::vector<double>> rows;  // per date, one value per asset
  std::vector<std::vector<bool>> valid;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected " + std::to_string(header.size()) +
                               " fields, got " + std::to_string(fields.size()));
    }
    if (!dates.empty() && fields[0] <= dates.back()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": dates must be strictly increasing");
    }
    dates.push_back(fields[0]);
    std::vector<double> row(n_assets, 0.0);
    std::vector<bool> ok(n_assets, false);
    for (std::size_t a = 0; a < n_assets; ++a) {
      const std::string& f = fields[a + 1];
      if (f.empty()) continue;
      try {
        std::size_t pos = 0;
        row[a] = std::stod(f, &pos);
        ok[a] = pos == f.size();
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": unparsable value '" + f + "'");
      }
    }
    rows.push_back(std::move(row));
    valid.push_back(std::move(ok));
  }
  if (dates.size() < 2) {
    throw std::runtime_error(path + ": need at least 2 dates");
  }

  std::vector<std::size_t> kept;
  for (std::size_t a = 0; a < n_assets; ++a) {
    std::string reason;
    for (std::size_t t = 0; t < dates.size() && reason.empty(); ++t) {
      if (!valid[t][a]) {
        reason = "missing value on " + dates[t];
      } else if (!(rows[t][a] > 0.0)) {
        reason = "non-positive price on " + dates[t];
      }
    }
    if (reason.empty()) {
      kept.push_back(a);
    } else if (report) {
      report->dropped.emplace_back(header[a + 1], reason);
    }
  }
  if (kept.empty()) {
    throw std::runtime_error(path + ": no complete assets after filtering");
  }

  PricePanel panel;
  panel.dates = dates;
  panel.prices.resize(kept.size(), dates.size());
  for (std::size_t r = 0; r < kept.size(); ++r) {
    panel.asset_ids.push_back(header[kept[r] + 1]);
    panel.sector_labels.emplace_back("other");
    for (std::size_t t = 0; t < dates.size(); ++t) {
      panel.prices(r, t) = rows[t][kept[r]];
    }
  }
  return panel;
}

void save_prices(const PricePanel& panel, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "date";
  for (const auto& id : panel.asset_ids) out << "," << id;
  out << "\n";
  for (Eigen::Index t = 0; t < panel.prices.cols(); ++t) {
    out << panel.dates[t];
    for (Eigen::Index i = 0; i < panel.prices.rows(); ++i) {
      out << "," << io::format_double(panel.prices(i, t), 17);
    }
    out << "\n";
  }
}

SectorMap load_sectors(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sector file " + path);
  SectorMap map;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == "asset_id,sector") continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 2) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 'asset_id,sector'");
    }
    map[fields[0]] = fields[1];
  }
  return map;
}

PricePanel sector_sort(const PricePanel& panel, const SectorMap& sectors) {
  const auto& order = sector_order();
  auto rank = [&](const std::string& sector) -> std::size_t {
    const auto it = std::find(order.begin(), order.end(), sector);
    return it == order.end() ? order.size() - 1
                             : static_cast<std::size_t>(it - order.begin());
  };

  const auto n = panel.prices.rows();
  std::vector<Eigen::Index> perm(n);
  std::vector<std::string> labels(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    perm[i] = i;
    const auto it = sectors.find(panel.asset_ids[i]);
    labels[i] = it == sectors.end() ? "other" : it->second;
  }
  std::stable_sort(perm.begin(), perm.end(), [&](Eigen::Index a, Eigen::Index b) {
    const auto ra = rank(labels[a]);
    const auto rb = rank(labels[b]);
    if (ra != rb) return ra < rb;
    return panel.asset_ids[a] < panel.asset_ids[b];
  });

  PricePanel out;
  out.dates = panel.dates;
  out.prices.resize(n, panel.prices.cols());
  for (Eigen::Index r = 0; r < n; ++r) {
    out.prices.row(r) = panel.prices.row(perm[r]);
    out.asset_ids.push_back(panel.asset_ids[perm[r]]);
    out.sector_labels.push_back(labels[perm[r]]);
  }
  return out;
}

void save_correlation_cache(const std::string& path,
                            const std::vector<CorrelationMatrix>& cs) {
  if (cs.empty()) throw std::invalid_argument("nothing to cache");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(kCacheMagic, 8);
  const std::uint64_t count = cs.size();
  const std::uint64_t dim = cs.front().size();
  const std::uint64_t epoch_len = cs.front().epoch_len;
  out.write(reinterpret_cast<const char*>(&count), 8);
  out.write(reinterpret_cast<const char*>(&dim), 8);
  out.write(reinterpret_cast<const char*>(&epoch_len), 8);
  for (const auto& c : cs) {
    if (static_cast<std::uint64_t>(c.size()) != dim) {
      throw std::invalid_argument("mixed matrix dimensions in cache");
    }
    for (Eigen::Index i = 0; i < c.c.rows(); ++i) {
      for (Eigen::Index j = 0; j < c.c.cols(); ++j) {
        const double v = c.c(i, j);
        out.write(reinterpret_cast<const char*>(&v), sizeof(v));
      }
    }
  }
  for (const auto& c : cs) write_string(out, c.epoch_end);
  const std::uint64_t n_ids = cs.front().asset_ids.size();
  out.write(reinterpret_cast<const char*>(&n_ids), 8);
  for (const auto& id : cs.front().asset_ids) write_string(out, id);
  out.write(kCacheEnd, 8);
}

std::vector<CorrelationMatrix> load_correlation_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open cache " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kCacheMagic, 8) != 0) {
    throw std::runtime_error(path + " is not a correlation cache");
  }
  std::uint64_t count = 0, dim = 0, epoch_len = 0;
  in.read(reinterpret_cast<char*>(&count), 8);
  in.read(reinterpret_cast<char*>(&dim), 8);
  in.read(reinterpret_cast<char*>(&epoch_len), 8);
  if (!in || count == 0 || dim == 0) {
    throw std::runtime_error("corrupt cache header in " + path);
  }
  std::vector<CorrelationMatrix> cs(count);
  for (auto& c : cs) {
    c.epoch_len = static_cast<int>(epoch_len);
    c.c.resize(dim, dim);
    for (std::uint64_t i = 0; i < dim; ++i) {
      for (std::uint64_t j = 0; j < dim; ++j) {
        double v = 0.0;
        in.read(reinterpret_cast<char*>(&v), sizeof(v));
        c.c(i, j) = v;
      }
    }
  }
  for (auto& c : cs) c.epoch_end = read_string(in);
  std::uint64_t n_ids = 0;
  in.read(reinterpret_cast<char*>(&n_ids), 8);
  std::vector<std::string> ids;
  for (std::uint64_t i = 0; i < n_ids; ++i) ids.push_back(read_string(in));
  for (auto& c : cs) c.asset_ids = ids;
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kCacheEnd, 8) != 0) {
    throw std::runtime_error("corrupt cache footer in " + path);
  }
  return cs;
}

}  // namespace rmt::ingest
