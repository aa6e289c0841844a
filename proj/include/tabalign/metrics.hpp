#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tabalign/grid.hpp"
#include "tabalign/model.hpp"

namespace tabalign {

enum class SimilarityKind { Content, Location, Topology };

// Normalized longest-common-subsequence ratio on already-normalized texts:
// 2*LCS(a,b)/(|a|+|b|), 1.0 when both are empty.
double lcs_similarity(std::string_view a, std::string_view b);

// Symmetric per-entry similarity in [0,1].
//   Content:  LCS ratio of normalized texts.
//   Location: IoU of boxes; 1 when both entries are boxless, 0 for exactly one.
//   Topology: IoU of the rel_extent rectangles in grid coordinates.
double entry_similarity(SimilarityKind kind, const GridEntry& a, const GridEntry& b);

// Grid table similarity: an F-score over the best-matching pair of
// row/column substructures of the two grids. This is the factored
// alternating-DP heuristic (identity-prefix initialization, 20-round cap);
// the returned value never exceeds the exact optimum.
double grits(SimilarityKind kind, const TableGrid& gt, const TableGrid& pred);

// Exhaustive maximization over all row/column subsequence selections of both
// grids. Dimensions are capped at 4x4 per grid; throws Error(TooLarge) above.
double grits_exact(SimilarityKind kind, const TableGrid& gt, const TableGrid& pred);

// Directed adjacency relations scored by content: F1 between the multisets of
// (cell text, nearest non-blank neighbor text, direction) relations.
double dar_con(const TableGrid& gt, const TableGrid& pred);

// True iff grids have equal dimensions and every position agrees on
// normalized text and rel_extent. Location is not compared.
bool exact_match(const TableGrid& gt, const TableGrid& pred);

struct TableMetrics {
  std::string table_id;
  bool has_prediction = false;
  double grits_con = 0.0;
  double grits_loc = 0.0;
  double grits_top = 0.0;
  double dar_con = 0.0;
  bool exact = false;
};

struct MetricReport {
  std::vector<TableMetrics> per_table;  // sorted by table_id
  std::size_t n_tables = 0;
  double mean_grits_con = 0.0;
  double mean_grits_loc = 0.0;
  double mean_grits_top = 0.0;
  double mean_dar_con = 0.0;
  double acc_con = 0.0;  // fraction of exact matches
};

// Joins predictions to ground truth by table_id. A missing prediction scores
// zero on all metrics; a duplicate prediction id throws
// Error(DuplicatePrediction); a prediction id absent from the ground truth
// throws Error(JoinError). `threads` <= 1 runs the serial reference path.
MetricReport evaluate_corpus(std::span<const TableAnnotation> gt,
                             std::span<const TableAnnotation> pred, int threads = 1);

std::string metric_report_text(const MetricReport& report, const std::string& corpus_name);
std::string metric_report_csv(const MetricReport& report);
std::string metric_report_json(const MetricReport& report, const std::string& corpus_name);

}  // namespace tabalign
