#include "tabalign/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include <json.hpp>

#include "tabalign/errors.hpp"
#include "tabalign/parallel.hpp"

namespace tabalign {

double lcs_similarity(std::string_view a, std::string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const std::size_t n = b.size();
  std::vector<int> prev(n + 1, 0), cur(n + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      if (a[i - 1] == b[j - 1])
        cur[j] = prev[j - 1] + 1;
      else
        cur[j] = std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  const double lcs = prev[n];
  return 2.0 * lcs / static_cast<double>(a.size() + b.size());
}

namespace {

double topology_iou(const RelExtent& a, const RelExtent& b) {
  // Rectangle of entry e: rows [row_start, row_end+1) x cols [col_start, col_end+1)
  // relative to the shared position. Both rectangles contain the unit square
  // at the origin, so the intersection is never empty.
  const int r_lo = std::max(a.row_start, b.row_start);
  const int r_hi = std::min(a.row_end, b.row_end) + 1;
  const int c_lo = std::max(a.col_start, b.col_start);
  const int c_hi = std::min(a.col_end, b.col_end) + 1;
  const int inter = std::max(0, r_hi - r_lo) * std::max(0, c_hi - c_lo);
  const int area_a = (a.row_end - a.row_start + 1) * (a.col_end - a.col_start + 1);
  const int area_b = (b.row_end - b.row_start + 1) * (b.col_end - b.col_start + 1);
  const int uni = area_a + area_b - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

double entry_similarity(SimilarityKind kind, const GridEntry& a, const GridEntry& b) {
  switch (kind) {
    case SimilarityKind::Content:
      return lcs_similarity(normalize_text(a.text), normalize_text(b.text));
    case SimilarityKind::Location:
      if (a.box && b.box) return iou(*a.box, *b.box);
      if (!a.box && !b.box) return 1.0;
      return 0.0;
    case SimilarityKind::Topology:
      return topology_iou(a.rel, b.rel);
  }
  return 0.0;
}

namespace {

// Pairwise entry similarities, indexed [i1*n1+j1][i2*n2+j2]. Materialized up
// front except for enormous grid pairs, where entries are computed on demand
// to keep memory bounded.
struct SimTensor {
  int m1, n1, m2, n2;
  std::vector<double> values;
  SimilarityKind kind;
  const TableGrid* a = nullptr;
  const TableGrid* b = nullptr;

  static constexpr std::size_t kMaterializeLimit = 10'000'000;

  SimTensor(SimilarityKind k, const TableGrid& ga, const TableGrid& gb)
      : m1(ga.n_rows), n1(ga.n_cols), m2(gb.n_rows), n2(gb.n_cols), kind(k), a(&ga), b(&gb) {
    const std::size_t total = static_cast<std::size_t>(m1) * n1 * m2 * n2;
    if (total > kMaterializeLimit) return;
    values.resize(total);
    std::size_t idx = 0;
    for (int i1 = 0; i1 < m1; ++i1)
      for (int j1 = 0; j1 < n1; ++j1)
        for (int i2 = 0; i2 < m2; ++i2)
          for (int j2 = 0; j2 < n2; ++j2)
            values[idx++] = entry_similarity(kind, ga.at(i1, j1), gb.at(i2, j2));
  }

  double at(int i1, int j1, int i2, int j2) const {
    if (values.empty()) return entry_similarity(kind, a->at(i1, j1), b->at(i2, j2));
    return values[((static_cast<std::size_t>(i1) * n1 + j1) * m2 + i2) * n2 + j2];
  }
};

using Pairs = std::vector<std::pair<int, int>>;

struct AlignResult {
  Pairs pairs;
  double total = 0.0;
};

// Max-sum order-preserving alignment of [0,m) with [0,n); score(i,j) >= 0.
// Backtracking prefers a strictly improving diagonal, giving one
// deterministic correspondence per score matrix.
template <class Score>
AlignResult align_sequences(int m, int n, Score&& score) {
  std::vector<std::vector<double>> dp(m + 1, std::vector<double>(n + 1, 0.0));
  std::vector<std::vector<double>> gain(m, std::vector<double>(n, 0.0));
  for (int i = 1; i <= m; ++i) {
    for (int j = 1; j <= n; ++j) {
      const double s = score(i - 1, j - 1);
      gain[i - 1][j - 1] = s;
      dp[i][j] = std::max({dp[i - 1][j], dp[i][j - 1], dp[i - 1][j - 1] + s});
    }
  }
  AlignResult result;
  result.total = dp[m][n];
  int i = m, j = n;
  while (i > 0 && j > 0) {
    const double s = gain[i - 1][j - 1];
    if (s > 0.0 && dp[i][j] == dp[i - 1][j - 1] + s) {
      result.pairs.emplace_back(i - 1, j - 1);
      --i;
      --j;
    } else if (dp[i][j] == dp[i - 1][j]) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(result.pairs.begin(), result.pairs.end());
  return result;
}

void require_non_empty(const TableGrid& g, const char* which) {
  if (g.n_rows <= 0 || g.n_cols <= 0)
    throw Error(ErrorCode::EmptyGrid, std::string(which) + " grid has no entries");
}

}  // namespace

namespace {

// One run of the alternating factored optimization from an initial
// correspondence on one axis. Each round optimizes the other axis exactly by
// DP, so totals never decrease; the best matching found is always achievable
// and therefore a lower bound on the exact optimum.
double alternate_factored(const SimTensor& sim, Pairs init, bool init_is_cols) {
  Pairs fixed = std::move(init);
  bool fixed_is_cols = init_is_cols;
  double total = -1.0;
  for (int round = 0; round < 20; ++round) {
    AlignResult next;
    if (fixed_is_cols) {
      next = align_sequences(sim.m1, sim.m2, [&](int i1, int i2) {
        double s = 0.0;
        for (const auto& [c1, c2] : fixed) s += sim.at(i1, c1, i2, c2);
        return s;
      });
    } else {
      next = align_sequences(sim.n1, sim.n2, [&](int j1, int j2) {
        double s = 0.0;
        for (const auto& [r1, r2] : fixed) s += sim.at(r1, j1, r2, j2);
        return s;
      });
    }
    if (round >= 2 && next.total == total) break;  // alternation reached a fixed point
    total = next.total;
    fixed = std::move(next.pairs);
    fixed_is_cols = !fixed_is_cols;
  }
  return std::max(total, 0.0);
}

Pairs identity_prefix(int a, int b) {
  Pairs pairs;
  for (int i = 0; i < std::min(a, b); ++i) pairs.emplace_back(i, i);
  return pairs;
}

}  // namespace

double grits(SimilarityKind kind, const TableGrid& gt, const TableGrid& pred) {
  require_non_empty(gt, "ground-truth");
  require_non_empty(pred, "predicted");
  const SimTensor sim(kind, gt, pred);

  // Marginal seeds: align one axis by total similarity over all pairs of the
  // other axis. Together with the identity prefixes this gives four starts;
  // the best converged matching wins.
  const AlignResult marginal_cols = align_sequences(sim.n1, sim.n2, [&](int j1, int j2) {
    double s = 0.0;
    for (int i1 = 0; i1 < sim.m1; ++i1)
      for (int i2 = 0; i2 < sim.m2; ++i2) s += sim.at(i1, j1, i2, j2);
    return s;
  });
  const AlignResult marginal_rows = align_sequences(sim.m1, sim.m2, [&](int i1, int i2) {
    double s = 0.0;
    for (int j1 = 0; j1 < sim.n1; ++j1)
      for (int j2 = 0; j2 < sim.n2; ++j2) s += sim.at(i1, j1, i2, j2);
    return s;
  });

  double best = 0.0;
  best = std::max(best, alternate_factored(sim, identity_prefix(sim.n1, sim.n2), true));
  best = std::max(best, alternate_factored(sim, identity_prefix(sim.m1, sim.m2), false));
  best = std::max(best, alternate_factored(sim, marginal_cols.pairs, true));
  best = std::max(best, alternate_factored(sim, marginal_rows.pairs, false));

  // Small grids afford exhaustive single-pair restarts, which escape the
  // rare local optima the seeded starts share.
  if (std::max({sim.m1, sim.n1, sim.m2, sim.n2}) <= 6) {
    for (int j1 = 0; j1 < sim.n1; ++j1)
      for (int j2 = 0; j2 < sim.n2; ++j2)
        best = std::max(best, alternate_factored(sim, Pairs{{j1, j2}}, true));
    for (int i1 = 0; i1 < sim.m1; ++i1)
      for (int i2 = 0; i2 < sim.m2; ++i2)
        best = std::max(best, alternate_factored(sim, Pairs{{i1, i2}}, false));
  }
  return 2.0 * best / static_cast<double>(gt.size() + pred.size());
}

namespace {

// All index subsequences of [0,n) grouped by length.
std::vector<std::vector<std::vector<int>>> subsequences_by_size(int n) {
  std::vector<std::vector<std::vector<int>>> by_size(n + 1);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> seq;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) seq.push_back(i);
    by_size[seq.size()].push_back(std::move(seq));
  }
  return by_size;
}

}  // namespace

double grits_exact(SimilarityKind kind, const TableGrid& gt, const TableGrid& pred) {
  require_non_empty(gt, "ground-truth");
  require_non_empty(pred, "predicted");
  constexpr int kMaxDim = 4;
  if (gt.n_rows > kMaxDim || gt.n_cols > kMaxDim || pred.n_rows > kMaxDim ||
      pred.n_cols > kMaxDim)
    throw Error(ErrorCode::TooLarge, "exhaustive search is capped at 4x4 grids");

  const SimTensor sim(kind, gt, pred);
  const auto rows1 = subsequences_by_size(gt.n_rows);
  const auto rows2 = subsequences_by_size(pred.n_rows);
  const auto cols1 = subsequences_by_size(gt.n_cols);
  const auto cols2 = subsequences_by_size(pred.n_cols);

  double best = 0.0;
  const int max_r = std::min(gt.n_rows, pred.n_rows);
  const int max_c = std::min(gt.n_cols, pred.n_cols);
  for (int kr = 1; kr <= max_r; ++kr) {
    for (const auto& r1 : rows1[kr]) {
      for (const auto& r2 : rows2[kr]) {
        for (int kc = 1; kc <= max_c; ++kc) {
          for (const auto& c1 : cols1[kc]) {
            for (const auto& c2 : cols2[kc]) {
              double s = 0.0;
              for (int i = 0; i < kr; ++i)
                for (int j = 0; j < kc; ++j) s += sim.at(r1[i], c1[j], r2[i], c2[j]);
              best = std::max(best, s);
            }
          }
        }
      }
    }
  }
  return 2.0 * best / static_cast<double>(gt.size() + pred.size());
}

namespace {

enum class Direction { Right = 0, Below = 1 };

using Relation = std::tuple<std::string, std::string, int>;

// Anchor position (top-left) of the covering cell at (r,c).
std::pair<int, int> anchor_of(const TableGrid& g, int r, int c) {
  const GridEntry& e = g.at(r, c);
  return {r + e.rel.row_start, c + e.rel.col_start};
}

std::vector<Relation> adjacency_relations(const TableGrid& g) {
  std::vector<Relation> relations;
  for (int r = 0; r < g.n_rows; ++r) {
    for (int c = 0; c < g.n_cols; ++c) {
      const GridEntry& e = g.at(r, c);
      if (e.is_blank()) continue;
      if (!(e.rel.row_start == 0 && e.rel.col_start == 0)) continue;  // anchor only
      const int row_end = r + e.rel.row_end;
      const int col_end = c + e.rel.col_end;
      const std::string text = normalize_text(e.text);

      std::vector<std::pair<int, int>> right_neighbors;
      for (int rr = r; rr <= row_end; ++rr) {
        for (int cc = col_end + 1; cc < g.n_cols; ++cc) {
          if (g.at(rr, cc).is_blank()) continue;
          const auto a = anchor_of(g, rr, cc);
          if (std::find(right_neighbors.begin(), right_neighbors.end(), a) ==
              right_neighbors.end())
            right_neighbors.push_back(a);
          break;
        }
      }
      for (const auto& [ar, ac] : right_neighbors)
        relations.emplace_back(text, normalize_text(g.at(ar, ac).text),
                               static_cast<int>(Direction::Right));

      std::vector<std::pair<int, int>> below_neighbors;
      for (int cc = c; cc <= col_end; ++cc) {
        for (int rr = row_end + 1; rr < g.n_rows; ++rr) {
          if (g.at(rr, cc).is_blank()) continue;
          const auto a = anchor_of(g, rr, cc);
          if (std::find(below_neighbors.begin(), below_neighbors.end(), a) ==
              below_neighbors.end())
            below_neighbors.push_back(a);
          break;
        }
      }
      for (const auto& [ar, ac] : below_neighbors)
        relations.emplace_back(text, normalize_text(g.at(ar, ac).text),
                               static_cast<int>(Direction::Below));
    }
  }
  std::sort(relations.begin(), relations.end());
  return relations;
}

}  // namespace

double dar_con(const TableGrid& gt, const TableGrid& pred) {
  const std::vector<Relation> a = adjacency_relations(gt);
  const std::vector<Relation> b = adjacency_relations(pred);
  if (a.empty() && b.empty()) return 1.0;
  // Multiset intersection of the two sorted relation lists.
  std::size_t matches = 0, i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++matches;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return 2.0 * static_cast<double>(matches) / static_cast<double>(a.size() + b.size());
}

bool exact_match(const TableGrid& gt, const TableGrid& pred) {
  if (gt.n_rows != pred.n_rows || gt.n_cols != pred.n_cols) return false;
  for (std::size_t k = 0; k < gt.entries.size(); ++k) {
    const GridEntry& a = gt.entries[k];
    const GridEntry& b = pred.entries[k];
    if (a.rel != b.rel) return false;
    if (normalize_text(a.text) != normalize_text(b.text)) return false;
  }
  return true;
}

MetricReport evaluate_corpus(std::span<const TableAnnotation> gt,
                             std::span<const TableAnnotation> pred, int threads) {
  std::unordered_map<std::string, const TableAnnotation*> by_id;
  for (const TableAnnotation& p : pred) {
    if (!by_id.emplace(p.table_id, &p).second)
      throw Error(ErrorCode::DuplicatePrediction, "prediction '" + p.table_id + "' appears twice");
  }
  {
    std::unordered_map<std::string, int> gt_ids;
    for (const TableAnnotation& g : gt) ++gt_ids[g.table_id];
    for (const auto& [id, cnt] : gt_ids)
      if (cnt > 1) throw Error(ErrorCode::JoinError, "ground truth id '" + id + "' appears twice");
    for (const TableAnnotation& p : pred)
      if (!gt_ids.count(p.table_id))
        throw Error(ErrorCode::JoinError,
                    "prediction '" + p.table_id + "' has no ground-truth table");
  }

  MetricReport report;
  report.per_table.resize(gt.size());
  parallel_for_index(gt.size(), threads, [&](std::size_t i) {
    const TableAnnotation& g = gt[i];
    TableMetrics row;
    row.table_id = g.table_id;
    const auto it = by_id.find(g.table_id);
    if (it != by_id.end()) {
      const TableGrid gt_grid = build_grid(g);
      const TableGrid pred_grid = build_grid(*it->second);
      row.has_prediction = true;
      row.grits_con = grits(SimilarityKind::Content, gt_grid, pred_grid);
      row.grits_loc = grits(SimilarityKind::Location, gt_grid, pred_grid);
      row.grits_top = grits(SimilarityKind::Topology, gt_grid, pred_grid);
      row.dar_con = dar_con(gt_grid, pred_grid);
      row.exact = exact_match(gt_grid, pred_grid);
    }
    report.per_table[i] = std::move(row);
  });

  std::sort(report.per_table.begin(), report.per_table.end(),
            [](const TableMetrics& a, const TableMetrics& b) { return a.table_id < b.table_id; });

  report.n_tables = report.per_table.size();
  std::size_t exact_count = 0;
  for (const TableMetrics& row : report.per_table) {
    report.mean_grits_con += row.grits_con;
    report.mean_grits_loc += row.grits_loc;
    report.mean_grits_top += row.grits_top;
    report.mean_dar_con += row.dar_con;
    if (row.exact) ++exact_count;
  }
  if (report.n_tables > 0) {
    const double n = static_cast<double>(report.n_tables);
    report.mean_grits_con /= n;
    report.mean_grits_loc /= n;
    report.mean_grits_top /= n;
    report.mean_dar_con /= n;
    report.acc_con = static_cast<double>(exact_count) / n;
  }
  return report;
}

std::string metric_report_text(const MetricReport& report, const std::string& corpus_name) {
  char line[256];
  std::ostringstream out;
  std::snprintf(line, sizeof(line), "%-24s %9s %9s %9s %9s %9s\n", "Test Data", "GriTS_Con",
                "GriTS_Loc", "GriTS_Top", "DAR_C", "Acc_C");
  out << line;
  std::snprintf(line, sizeof(line), "%-24s %9.4f %9.4f %9.4f %9.4f %9.4f\n", corpus_name.c_str(),
                report.mean_grits_con, report.mean_grits_loc, report.mean_grits_top,
                report.mean_dar_con, report.acc_con);
  out << line;
  out << "tables: " << report.n_tables << "\n";
  return out.str();
}

std::string metric_report_csv(const MetricReport& report) {
  std::ostringstream out;
  out << "table_id,grits_con,grits_loc,grits_top,dar_con,exact_match,has_prediction\n";
  for (const TableMetrics& row : report.per_table) {
    char line[256];
    std::snprintf(line, sizeof(line), "%.10g,%.10g,%.10g,%.10g,%d,%d\n", row.grits_con,
                  row.grits_loc, row.grits_top, row.dar_con, row.exact ? 1 : 0,
                  row.has_prediction ? 1 : 0);
    out << row.table_id << ',' << line;
  }
  return out.str();
}

std::string metric_report_json(const MetricReport& report, const std::string& corpus_name) {
  nlohmann::ordered_json j;
  j["corpus"] = corpus_name;
  j["n_tables"] = report.n_tables;
  j["grits_con"] = report.mean_grits_con;
  j["grits_loc"] = report.mean_grits_loc;
  j["grits_top"] = report.mean_grits_top;
  j["dar_con"] = report.mean_dar_con;
  j["acc_con"] = report.acc_con;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const TableMetrics& row : report.per_table) {
    nlohmann::ordered_json r;
    r["table_id"] = row.table_id;
    r["has_prediction"] = row.has_prediction;
    r["grits_con"] = row.grits_con;
    r["grits_loc"] = row.grits_loc;
    r["grits_top"] = row.grits_top;
    r["dar_con"] = row.dar_con;
    r["exact_match"] = row.exact;
    rows.push_back(std::move(r));
  }
  j["tables"] = std::move(rows);
  return j.dump(2) + "\n";
}

}  // namespace tabalign
