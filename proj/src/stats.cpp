#include "tabalign/stats.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tabalign/errors.hpp"
#include "tabalign/grid.hpp"

namespace tabalign {

DatasetStats dataset_stats(std::span<const TableAnnotation> tables) {
  if (tables.empty()) throw Error(ErrorCode::EmptyDataset, "no tables to summarize");

  DatasetStats stats;
  stats.n_tables = tables.size();
  std::set<std::string> topologies;
  long long rows = 0, cols = 0, spanning = 0;
  for (const TableAnnotation& t : tables) {
    topologies.insert(topology_signature(t));
    rows += t.n_rows;
    cols += t.n_cols;
    for (const Cell& c : t.cells)
      if (c.is_spanning()) ++spanning;
  }
  stats.n_unique_topologies = topologies.size();
  const double n = static_cast<double>(stats.n_tables);
  stats.avg_tables_per_topology = n / static_cast<double>(stats.n_unique_topologies);
  stats.avg_rows = static_cast<double>(rows) / n;
  stats.avg_cols = static_cast<double>(cols) / n;
  stats.avg_spanning_cells = static_cast<double>(spanning) / n;
  return stats;
}

std::string stats_text(const DatasetStats& s, const std::string& dataset_name) {
  std::ostringstream out;
  char line[512];
  std::snprintf(line, sizeof(line), "%-20s %10s %20s %22s %18s %18s %28s\n", "Dataset", "# Tables",
                "# Unique Topologies", "Avg. Tables / Topology", "Avg. Rows / Table",
                "Avg. Cols. / Table", "Avg. Spanning Cells / Table");
  out << line;
  std::snprintf(line, sizeof(line), "%-20s %10zu %20zu %22.2f %18.2f %18.2f %28.2f\n",
                dataset_name.c_str(), s.n_tables, s.n_unique_topologies,
                s.avg_tables_per_topology, s.avg_rows, s.avg_cols, s.avg_spanning_cells);
  out << line;
  return out.str();
}

std::string stats_json(const DatasetStats& s, const std::string& dataset_name) {
  nlohmann::ordered_json j;
  j["dataset"] = dataset_name;
  j["n_tables"] = s.n_tables;
  j["n_unique_topologies"] = s.n_unique_topologies;
  j["avg_tables_per_topology"] = s.avg_tables_per_topology;
  j["avg_rows"] = s.avg_rows;
  j["avg_cols"] = s.avg_cols;
  j["avg_spanning_cells"] = s.avg_spanning_cells;
  return j.dump(2) + "\n";
}

}  // namespace tabalign
