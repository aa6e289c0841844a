#pragma once

#include <span>
#include <string>

#include "tabalign/model.hpp"

namespace tabalign {

struct DatasetStats {
  std::size_t n_tables = 0;
  std::size_t n_unique_topologies = 0;
  double avg_tables_per_topology = 0.0;
  double avg_rows = 0.0;
  double avg_cols = 0.0;
  double avg_spanning_cells = 0.0;

  bool operator==(const DatasetStats&) const = default;
};

// Counts and per-table averages over a snapshot. A spanning cell covers more
// than one row or column; topologies are counted by layout signature.
// Throws Error(EmptyDataset) on an empty input.
DatasetStats dataset_stats(std::span<const TableAnnotation> tables);

// Aligned text block, averages to two decimals.
std::string stats_text(const DatasetStats& stats, const std::string& dataset_name);
std::string stats_json(const DatasetStats& stats, const std::string& dataset_name);

}  // namespace tabalign
