#include "tabalign/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tabalign/errors.hpp"
#include "tabalign/grid.hpp"
#include "tabalign/parallel.hpp"

namespace tabalign {

const char* removal_reason_name(RemovalReason reason) {
  switch (reason) {
    case RemovalReason::UndefinedExtent: return "UndefinedExtent";
    case RemovalReason::InvertedOrder: return "InvertedOrder";
    case RemovalReason::AmbiguousWord: return "AmbiguousWord";
    case RemovalReason::NoConvergence: return "NoConvergence";
    case RemovalReason::LeaderAmbiguity: return "LeaderAmbiguity";
    case RemovalReason::AllEmpty: return "AllEmpty";
    case RemovalReason::CurrencySplitColumn: return "CurrencySplitColumn";
    case RemovalReason::TwoColumnAmbiguous: return "TwoColumnAmbiguous";
    case RemovalReason::WordCellCoincidence: return "WordCellCoincidence";
    case RemovalReason::CaptionAsRow: return "CaptionAsRow";
    case RemovalReason::FooterAsRow: return "FooterAsRow";
    case RemovalReason::HeaderOnly: return "HeaderOnly";
  }
  return "Unknown";
}

const char* change_code_name(ChangeCode code) {
  switch (code) {
    case ChangeCode::RowColumnBoxesCompleted: return "RowColumnBoxesCompleted";
    case ChangeCode::BoxesRefined: return "BoxesRefined";
    case ChangeCode::DotLeadersStripped: return "DotLeadersStripped";
    case ChangeCode::EmptyRowsRemoved: return "EmptyRowsRemoved";
    case ChangeCode::EmptyColumnsRemoved: return "EmptyColumnsRemoved";
    case ChangeCode::HeaderRowsMerged: return "HeaderRowsMerged";
    case ChangeCode::HeadersInferred: return "HeadersInferred";
    case ChangeCode::TwoColumnHeaderInferred: return "TwoColumnHeaderInferred";
    case ChangeCode::CanonicalCellsMerged: return "CanonicalCellsMerged";
    case ChangeCode::ManuallyCorrected: return "ManuallyCorrected";
  }
  return "Unknown";
}

const char* flag_code_name(FlagCode code) {
  switch (code) {
    case FlagCode::HeaderUndetermined: return "HeaderUndetermined";
  }
  return "Unknown";
}

bool is_structural_change(ChangeCode code) {
  switch (code) {
    case ChangeCode::DotLeadersStripped:
    case ChangeCode::EmptyRowsRemoved:
    case ChangeCode::EmptyColumnsRemoved:
    case ChangeCode::HeaderRowsMerged:
    case ChangeCode::CanonicalCellsMerged:
    case ChangeCode::ManuallyCorrected:
      return true;
    default:
      return false;
  }
}

bool TableOutcome::modified() const {
  if (!kept) return false;
  return std::any_of(changes.begin(), changes.end(), is_structural_change);
}

namespace {

void merge_interval(std::optional<Interval>& slot, const Interval& value) {
  if (slot)
    slot->merge(value);
  else
    slot = value;
}

struct Boundaries {
  std::vector<double> values;  // size n+1

  bool operator==(const Boundaries&) const = default;
};

// Shared boundaries from per-index text extents: outer edges tight, interior
// boundaries at the mid-gap between neighboring extents.
std::optional<Boundaries> boundaries_from_extents(const std::vector<Interval>& ext) {
  Boundaries b;
  const std::size_t n = ext.size();
  b.values.resize(n + 1);
  b.values[0] = ext[0].lo;
  for (std::size_t i = 1; i < n; ++i) b.values[i] = (ext[i - 1].hi + ext[i].lo) / 2.0;
  b.values[n] = ext[n - 1].hi;
  for (std::size_t i = 0; i < n; ++i)
    if (b.values[i + 1] < b.values[i]) return std::nullopt;
  return b;
}

bool rows_boxed(const TableAnnotation& t) {
  if (static_cast<int>(t.rows.size()) != t.n_rows ||
      static_cast<int>(t.columns.size()) != t.n_cols)
    return false;
  for (const RowAnnotation& r : t.rows)
    if (!r.box) return false;
  for (const ColumnAnnotation& c : t.columns)
    if (!c.box) return false;
  return true;
}

}  // namespace

StepResult complete_rows_columns(TableAnnotation& t, const PipelineOptions&) {
  StepResult result;
  std::vector<std::optional<Interval>> row_direct(t.n_rows), row_fallback(t.n_rows);
  std::vector<std::optional<Interval>> col_direct(t.n_cols), col_fallback(t.n_cols);

  for (const Cell& c : t.cells) {
    if (!c.box) continue;
    if (c.row_start == c.row_end) {
      merge_interval(row_direct[c.row_start], Interval{c.box->y_min, c.box->y_max});
    } else {
      // Spanning-cell extent distributed uniformly across its rows.
      const double h = c.box->height() / c.row_span();
      for (int r = c.row_start; r <= c.row_end; ++r) {
        const double lo = c.box->y_min + (r - c.row_start) * h;
        merge_interval(row_fallback[r], Interval{lo, lo + h});
      }
    }
    if (c.col_start == c.col_end) {
      merge_interval(col_direct[c.col_start], Interval{c.box->x_min, c.box->x_max});
    } else {
      const double w = c.box->width() / c.col_span();
      for (int col = c.col_start; col <= c.col_end; ++col) {
        const double lo = c.box->x_min + (col - c.col_start) * w;
        merge_interval(col_fallback[col], Interval{lo, lo + w});
      }
    }
  }

  std::vector<Interval> row_ext(t.n_rows), col_ext(t.n_cols);
  for (int r = 0; r < t.n_rows; ++r) {
    if (row_direct[r])
      row_ext[r] = *row_direct[r];
    else if (row_fallback[r])
      row_ext[r] = *row_fallback[r];
    else {
      result.removal = RemovalReason::UndefinedExtent;
      return result;
    }
  }
  for (int c = 0; c < t.n_cols; ++c) {
    if (col_direct[c])
      col_ext[c] = *col_direct[c];
    else if (col_fallback[c])
      col_ext[c] = *col_fallback[c];
    else {
      result.removal = RemovalReason::UndefinedExtent;
      return result;
    }
  }

  for (int r = 1; r < t.n_rows; ++r) {
    if (row_ext[r].center() <= row_ext[r - 1].center()) {
      result.removal = RemovalReason::InvertedOrder;
      return result;
    }
  }
  for (int c = 1; c < t.n_cols; ++c) {
    if (col_ext[c].center() <= col_ext[c - 1].center()) {
      result.removal = RemovalReason::InvertedOrder;
      return result;
    }
  }

  const auto row_bounds = boundaries_from_extents(row_ext);
  const auto col_bounds = boundaries_from_extents(col_ext);
  if (!row_bounds || !col_bounds) {
    result.removal = RemovalReason::InvertedOrder;
    return result;
  }

  if (t.rows.empty()) t.rows.resize(t.n_rows);
  if (t.columns.empty()) t.columns.resize(t.n_cols);
  const double x_lo = col_bounds->values.front();
  const double x_hi = col_bounds->values.back();
  const double y_lo = row_bounds->values.front();
  const double y_hi = row_bounds->values.back();
  for (int r = 0; r < t.n_rows; ++r)
    t.rows[r].box = BBox{x_lo, row_bounds->values[r], x_hi, row_bounds->values[r + 1]};
  for (int c = 0; c < t.n_cols; ++c)
    t.columns[c].box = BBox{col_bounds->values[c], y_lo, col_bounds->values[c + 1], y_hi};

  result.changes.push_back(ChangeCode::RowColumnBoxesCompleted);
  return result;
}

namespace {

// Word -> (row, col) grid-cell assignment by maximum overlap; ties go to the
// first position in row-major order; no overlap leaves a word unassigned.
std::vector<std::optional<std::pair<int, int>>> assign_words_to_grid_cells(
    const TableAnnotation& t, const Boundaries& row_b, const Boundaries& col_b) {
  std::vector<std::optional<std::pair<int, int>>> assignment(t.words.size());
  for (std::size_t w = 0; w < t.words.size(); ++w) {
    const BBox& box = t.words[w].box;
    double best = 0.0;
    std::optional<std::pair<int, int>> pos;
    for (int r = 0; r < t.n_rows; ++r) {
      for (int c = 0; c < t.n_cols; ++c) {
        const BBox cell{col_b.values[c], row_b.values[r], col_b.values[c + 1],
                        row_b.values[r + 1]};
        const double a = intersection_area(box, cell);
        if (a > best) {
          best = a;
          pos = std::make_pair(r, c);
        }
      }
    }
    assignment[w] = pos;
  }
  return assignment;
}

Boundaries boundaries_from_tiled_boxes(const std::vector<Interval>& boxes) {
  Boundaries b;
  const std::size_t n = boxes.size();
  b.values.resize(n + 1);
  b.values[0] = boxes[0].lo;
  for (std::size_t i = 1; i < n; ++i) b.values[i] = (boxes[i - 1].hi + boxes[i].lo) / 2.0;
  b.values[n] = boxes[n - 1].hi;
  return b;
}

}  // namespace

StepResult refine_boxes(TableAnnotation& t, const PipelineOptions& options) {
  StepResult result;
  if (!rows_boxed(t))
    throw Error(ErrorCode::ValidationFailure,
                "refine_boxes requires row and column boxes on '" + t.table_id + "'");
  if (t.words.empty()) return result;

  const TableAnnotation before = t;

  std::vector<Interval> row_boxes(t.n_rows), col_boxes(t.n_cols);
  for (int r = 0; r < t.n_rows; ++r) row_boxes[r] = Interval{t.rows[r].box->y_min, t.rows[r].box->y_max};
  for (int c = 0; c < t.n_cols; ++c)
    col_boxes[c] = Interval{t.columns[c].box->x_min, t.columns[c].box->x_max};
  Boundaries row_b = boundaries_from_tiled_boxes(row_boxes);
  Boundaries col_b = boundaries_from_tiled_boxes(col_boxes);

  // Extents of wordless rows/columns stay pinned: cell-box evidence when
  // available, the incoming box otherwise.
  std::vector<Interval> row_pin(t.n_rows), col_pin(t.n_cols);
  {
    std::vector<std::optional<Interval>> rp(t.n_rows), cp(t.n_cols);
    for (const Cell& c : t.cells) {
      if (!c.box) continue;
      if (c.row_start == c.row_end)
        merge_interval(rp[c.row_start], Interval{c.box->y_min, c.box->y_max});
      if (c.col_start == c.col_end)
        merge_interval(cp[c.col_start], Interval{c.box->x_min, c.box->x_max});
    }
    for (int r = 0; r < t.n_rows; ++r) row_pin[r] = rp[r] ? *rp[r] : row_boxes[r];
    for (int c = 0; c < t.n_cols; ++c) col_pin[c] = cp[c] ? *cp[c] : col_boxes[c];
  }

  std::vector<std::optional<std::pair<int, int>>> assignment;
  bool converged = false;
  for (int iteration = 0; iteration < options.refine_iteration_cap; ++iteration) {
    assignment = assign_words_to_grid_cells(t, row_b, col_b);

    std::vector<std::optional<Interval>> row_words(t.n_rows), col_words(t.n_cols);
    for (std::size_t w = 0; w < t.words.size(); ++w) {
      if (!assignment[w]) continue;
      const auto [r, c] = *assignment[w];
      const BBox& box = t.words[w].box;
      merge_interval(row_words[r], Interval{box.y_min, box.y_max});
      merge_interval(col_words[c], Interval{box.x_min, box.x_max});
    }
    std::vector<Interval> row_ext(t.n_rows), col_ext(t.n_cols);
    for (int r = 0; r < t.n_rows; ++r) row_ext[r] = row_words[r] ? *row_words[r] : row_pin[r];
    for (int c = 0; c < t.n_cols; ++c) col_ext[c] = col_words[c] ? *col_words[c] : col_pin[c];

    const auto new_row_b = boundaries_from_extents(row_ext);
    const auto new_col_b = boundaries_from_extents(col_ext);
    if (!new_row_b || !new_col_b) break;  // extents crossed over; no fixed point
    if (*new_row_b == row_b && *new_col_b == col_b) {
      converged = true;
      break;
    }
    row_b = *new_row_b;
    col_b = *new_col_b;
  }
  if (!converged) {
    result.removal = RemovalReason::NoConvergence;
    return result;
  }

  // A word whose area lands >= threshold in two or more grid cells is
  // irrecoverably ambiguous.
  for (const Word& word : t.words) {
    const double area = word.box.area();
    if (area <= 0.0) continue;
    int hits = 0;
    for (int r = 0; r < t.n_rows && hits < 2; ++r) {
      for (int c = 0; c < t.n_cols && hits < 2; ++c) {
        const BBox cell{col_b.values[c], row_b.values[r], col_b.values[c + 1],
                        row_b.values[r + 1]};
        if (intersection_area(word.box, cell) >= options.word_overlap_threshold * area) ++hits;
      }
    }
    if (hits >= 2) {
      result.removal = RemovalReason::AmbiguousWord;
      return result;
    }
  }

  const double x_lo = col_b.values.front();
  const double x_hi = col_b.values.back();
  const double y_lo = row_b.values.front();
  const double y_hi = row_b.values.back();
  for (int r = 0; r < t.n_rows; ++r)
    t.rows[r].box = BBox{x_lo, row_b.values[r], x_hi, row_b.values[r + 1]};
  for (int c = 0; c < t.n_cols; ++c)
    t.columns[c].box = BBox{col_b.values[c], y_lo, col_b.values[c + 1], y_hi};

  // Non-blank cell boxes become the union of their assigned words.
  for (Cell& cell : t.cells) {
    if (cell.is_blank()) continue;
    std::optional<BBox> box;
    for (std::size_t w = 0; w < t.words.size(); ++w) {
      if (!assignment[w]) continue;
      const auto [r, c] = *assignment[w];
      if (cell.covers(r, c)) box = box ? box_union(*box, t.words[w].box) : t.words[w].box;
    }
    if (box) cell.box = box;
  }

  if (!(t == before)) result.changes.push_back(ChangeCode::BoxesRefined);
  return result;
}

namespace {

// Dots in a leader token: whitespace-stripped text consisting only of '.'.
int leader_dot_count(const std::string& text) {
  int dots = 0;
  for (char c : text) {
    if (c == '.')
      ++dots;
    else if (!std::isspace(static_cast<unsigned char>(c)))
      return 0;
  }
  return dots;
}

void trim_edge_dots(std::string& text, bool right) {
  auto is_trimmable = [](char c) {
    return c == '.' || std::isspace(static_cast<unsigned char>(c));
  };
  if (right) {
    while (!text.empty() && is_trimmable(text.back())) text.pop_back();
  } else {
    std::size_t i = 0;
    while (i < text.size() && is_trimmable(text[i])) ++i;
    text.erase(0, i);
  }
}

}  // namespace

StepResult strip_dot_leaders(TableAnnotation& t, const PipelineOptions& options) {
  StepResult result;
  if (t.words.empty()) return result;

  const auto assignment = slot_words(t.cells, t.words);
  std::vector<std::vector<std::size_t>> cell_words(t.cells.size());
  for (std::size_t w = 0; w < t.words.size(); ++w)
    if (assignment[w]) cell_words[*assignment[w]].push_back(w);

  std::set<std::size_t> words_to_drop;
  bool changed = false;

  for (std::size_t ci = 0; ci < t.cells.size(); ++ci) {
    Cell& cell = t.cells[ci];
    if (cell.is_blank() || cell_words[ci].empty()) continue;

    std::vector<std::size_t> ordered = cell_words[ci];
    std::sort(ordered.begin(), ordered.end(), [&](std::size_t a, std::size_t b) {
      if (t.words[a].box.x_min != t.words[b].box.x_min)
        return t.words[a].box.x_min < t.words[b].box.x_min;
      return a < b;
    });

    // Maximal leader runs at the right and left edges.
    std::size_t right_run = 0;
    int right_dots = 0;
    while (right_run < ordered.size()) {
      const int d = leader_dot_count(t.words[ordered[ordered.size() - 1 - right_run]].text);
      if (d == 0) break;
      right_dots += d;
      ++right_run;
    }
    std::size_t left_run = 0;
    int left_dots = 0;
    while (left_run + right_run < ordered.size()) {
      const int d = leader_dot_count(t.words[ordered[left_run]].text);
      if (d == 0) break;
      left_dots += d;
      ++left_run;
    }

    const bool strip_right = right_run > 0 && right_dots >= options.dot_leader_min_dots;
    const bool strip_left = left_run > 0 && left_dots >= options.dot_leader_min_dots;
    if (!strip_right && !strip_left) continue;

    std::vector<std::size_t> remaining;
    for (std::size_t k = 0; k < ordered.size(); ++k) {
      const bool in_left = strip_left && k < left_run;
      const bool in_right = strip_right && k >= ordered.size() - right_run;
      if (in_left || in_right)
        words_to_drop.insert(ordered[k]);
      else
        remaining.push_back(ordered[k]);
    }
    if (remaining.empty()) {
      result.removal = RemovalReason::LeaderAmbiguity;
      return result;
    }

    std::string text = cell.text;
    if (strip_right) trim_edge_dots(text, true);
    if (strip_left) trim_edge_dots(text, false);
    if (is_blank_text(text)) {
      result.removal = RemovalReason::LeaderAmbiguity;
      return result;
    }
    cell.text = std::move(text);

    std::optional<BBox> box;
    for (std::size_t w : remaining) box = box ? box_union(*box, t.words[w].box) : t.words[w].box;
    if (box) {
      // Never grow past the previous box.
      if (cell.box) {
        box->x_min = std::max(box->x_min, cell.box->x_min);
        box->y_min = std::max(box->y_min, cell.box->y_min);
        box->x_max = std::min(box->x_max, cell.box->x_max);
        box->y_max = std::min(box->y_max, cell.box->y_max);
      }
      cell.box = box;
    }
    changed = true;
  }

  if (!words_to_drop.empty()) {
    std::vector<Word> kept;
    kept.reserve(t.words.size() - words_to_drop.size());
    for (std::size_t w = 0; w < t.words.size(); ++w)
      if (!words_to_drop.count(w)) kept.push_back(std::move(t.words[w]));
    t.words = std::move(kept);
  }
  if (changed) result.changes.push_back(ChangeCode::DotLeadersStripped);
  return result;
}

StepResult remove_empty_rows_columns(TableAnnotation& t) {
  StepResult result;
  const TableGrid grid = build_grid(t);

  std::vector<bool> row_blank(t.n_rows, true), col_blank(t.n_cols, true);
  for (int r = 0; r < t.n_rows; ++r) {
    for (int c = 0; c < t.n_cols; ++c) {
      if (!grid.at(r, c).is_blank()) {
        row_blank[r] = false;
        col_blank[c] = false;
      }
    }
  }
  const int blank_rows = static_cast<int>(std::count(row_blank.begin(), row_blank.end(), true));
  const int blank_cols = static_cast<int>(std::count(col_blank.begin(), col_blank.end(), true));
  if (blank_rows == 0 && blank_cols == 0) return result;
  if (blank_rows == t.n_rows || blank_cols == t.n_cols) {
    result.removal = RemovalReason::AllEmpty;
    return result;
  }

  std::vector<int> new_row(t.n_rows, -1), new_col(t.n_cols, -1);
  int nr = 0, nc = 0;
  for (int r = 0; r < t.n_rows; ++r)
    if (!row_blank[r]) new_row[r] = nr++;
  for (int c = 0; c < t.n_cols; ++c)
    if (!col_blank[c]) new_col[c] = nc++;

  std::vector<Cell> cells;
  cells.reserve(t.cells.size());
  for (Cell cell : t.cells) {
    int rs = -1, re = -1, cs = -1, ce = -1;
    for (int r = cell.row_start; r <= cell.row_end; ++r) {
      if (new_row[r] < 0) continue;
      if (rs < 0) rs = new_row[r];
      re = new_row[r];
    }
    for (int c = cell.col_start; c <= cell.col_end; ++c) {
      if (new_col[c] < 0) continue;
      if (cs < 0) cs = new_col[c];
      ce = new_col[c];
    }
    if (rs < 0 || cs < 0) continue;  // the cell lived entirely in removed rows/columns
    cell.row_start = rs;
    cell.row_end = re;
    cell.col_start = cs;
    cell.col_end = ce;
    cells.push_back(std::move(cell));
  }
  t.cells = std::move(cells);

  if (!t.rows.empty()) {
    std::vector<RowAnnotation> rows;
    for (int r = 0; r < t.n_rows; ++r)
      if (!row_blank[r]) rows.push_back(t.rows[r]);
    t.rows = std::move(rows);
  }
  if (!t.columns.empty()) {
    std::vector<ColumnAnnotation> columns;
    for (int c = 0; c < t.n_cols; ++c)
      if (!col_blank[c]) columns.push_back(t.columns[c]);
    t.columns = std::move(columns);
  }
  t.n_rows = nr;
  t.n_cols = nc;

  if (blank_rows > 0) result.changes.push_back(ChangeCode::EmptyRowsRemoved);
  if (blank_cols > 0) result.changes.push_back(ChangeCode::EmptyColumnsRemoved);
  return result;
}

namespace {

std::string join_header_texts(const std::string& top, const std::string& bottom) {
  const std::string a = normalize_text(top);
  const std::string b = normalize_text(bottom);
  if (a.empty()) return b;
  if (b.empty()) return a;
  return a + " " + b;
}

}  // namespace

StepResult merge_adjacent_header_rows(TableAnnotation& t) {
  StepResult result;
  if (static_cast<int>(t.rows.size()) != t.n_rows) return result;

  bool merged_any = false;
  bool merged = true;
  while (merged) {
    merged = false;
    for (int r = 0; r + 1 < t.n_rows && !merged; ++r) {
      if (!t.rows[r].is_column_header || !t.rows[r + 1].is_column_header) continue;

      std::vector<std::size_t> top, bottom, spanning;
      bool outside = false;
      for (std::size_t i = 0; i < t.cells.size(); ++i) {
        const Cell& c = t.cells[i];
        if (c.row_end < r || c.row_start > r + 1) continue;
        if (c.row_start < r || c.row_end > r + 1) {
          outside = true;
          break;
        }
        if (c.row_start == r && c.row_end == r)
          top.push_back(i);
        else if (c.row_start == r + 1 && c.row_end == r + 1)
          bottom.push_back(i);
        else
          spanning.push_back(i);
      }
      if (outside || top.empty() || bottom.empty()) continue;

      auto by_col = [&](std::size_t a, std::size_t b) {
        return t.cells[a].col_start < t.cells[b].col_start;
      };
      std::sort(top.begin(), top.end(), by_col);
      std::sort(bottom.begin(), bottom.end(), by_col);
      if (top.size() != bottom.size()) continue;
      bool same = true;
      for (std::size_t k = 0; k < top.size(); ++k) {
        if (t.cells[top[k]].col_start != t.cells[bottom[k]].col_start ||
            t.cells[top[k]].col_end != t.cells[bottom[k]].col_end) {
          same = false;
          break;
        }
      }
      if (!same) continue;

      for (std::size_t k = 0; k < top.size(); ++k) {
        Cell& a = t.cells[top[k]];
        const Cell& b = t.cells[bottom[k]];
        a.text = join_header_texts(a.text, b.text);
        a.box = maybe_union(a.box, b.box);
        a.is_column_header = true;
      }
      for (std::size_t i : spanning) t.cells[i].row_end = r;

      std::vector<Cell> cells;
      cells.reserve(t.cells.size() - bottom.size());
      const std::set<std::size_t> drop(bottom.begin(), bottom.end());
      for (std::size_t i = 0; i < t.cells.size(); ++i) {
        if (drop.count(i)) continue;
        Cell c = t.cells[i];
        if (c.row_start > r + 1) --c.row_start;
        if (c.row_end > r + 1) --c.row_end;
        cells.push_back(std::move(c));
      }
      t.cells = std::move(cells);

      t.rows[r].box = maybe_union(t.rows[r].box, t.rows[r + 1].box);
      t.rows.erase(t.rows.begin() + r + 1);
      --t.n_rows;
      merged = true;
      merged_any = true;
    }
  }
  if (merged_any) result.changes.push_back(ChangeCode::HeaderRowsMerged);
  return result;
}

namespace {

bool consume_glyph(const std::string& text, std::size_t& pos,
                   const std::vector<std::string>& glyphs) {
  for (const std::string& g : glyphs) {
    if (!g.empty() && text.compare(pos, g.size(), g) == 0) {
      pos += g.size();
      return true;
    }
  }
  return false;
}

// Text made of currency glyphs only, ignoring whitespace and parentheses.
bool is_currency_only(const std::string& text, const std::vector<std::string>& glyphs) {
  std::string stripped;
  for (char c : text) {
    if (c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c))) continue;
    stripped.push_back(c);
  }
  if (stripped.empty()) return false;
  std::size_t pos = 0;
  while (pos < stripped.size()) {
    if (!consume_glyph(stripped, pos, glyphs)) return false;
  }
  return true;
}

bool cell_in_header(const TableAnnotation& t, const Cell& c) {
  if (c.is_column_header) return true;
  if (static_cast<int>(t.rows.size()) == t.n_rows && t.rows[c.row_start].is_column_header)
    return true;
  return false;
}

}  // namespace

StepResult detect_currency_column_removal(TableAnnotation& t, const PipelineOptions& options) {
  StepResult result;
  for (int col = 0; col < t.n_cols; ++col) {
    bool has_body_cell = false;
    bool all_currency = true;
    for (const Cell& c : t.cells) {
      if (col < c.col_start || col > c.col_end) continue;
      if (c.is_blank()) continue;
      if (cell_in_header(t, c)) continue;
      has_body_cell = true;
      if (!is_currency_only(c.text, options.currency_glyphs)) {
        all_currency = false;
        break;
      }
    }
    if (has_body_cell && all_currency) {
      result.removal = RemovalReason::CurrencySplitColumn;
      return result;
    }
  }
  return result;
}

namespace {

struct RowScan {
  bool prh_candidate = false;     // exactly one non-blank single-row cell, rest blank
  std::optional<std::size_t> prh_cell;
  bool complete = false;  // fully covered by non-blank colspan-1 cells, none continuing below
};

std::vector<RowScan> scan_rows(const TableAnnotation& t, const TableGrid& grid) {
  std::vector<RowScan> scans(t.n_rows);
  for (int r = 0; r < t.n_rows; ++r) {
    RowScan& scan = scans[r];
    std::set<std::size_t> non_blank;
    bool covered = true, simple = true, continues = false;
    for (int c = 0; c < t.n_cols; ++c) {
      const GridEntry& e = grid.at(r, c);
      if (!e.cell_ref) {
        covered = false;
        continue;
      }
      if (e.is_blank()) {
        covered = false;  // a blank cell does not complete a header row
        continue;
      }
      non_blank.insert(*e.cell_ref);
      if (e.rel.col_start != 0 || e.rel.col_end != 0) simple = false;
      if (r + e.rel.row_end > r) continues = true;
    }
    scan.complete = covered && simple && !continues;
    if (non_blank.size() == 1) {
      const Cell& only = t.cells[*non_blank.begin()];
      if (only.row_start == r && only.row_end == r) {
        scan.prh_candidate = true;
        scan.prh_cell = *non_blank.begin();
      }
    }
  }
  return scans;
}

}  // namespace

StepResult infer_headers(TableAnnotation& t, bool trust_existing_two_col_header) {
  StepResult result;
  if (t.rows.empty()) t.rows.resize(t.n_rows);
  if (static_cast<int>(t.rows.size()) != t.n_rows)
    throw Error(ErrorCode::ValidationFailure,
                "row list length mismatch on '" + t.table_id + "'");

  const TableAnnotation before = t;
  const bool two_col = t.n_cols == 2;

  if (!(two_col && trust_existing_two_col_header)) {
    for (RowAnnotation& r : t.rows) r.is_column_header = false;
    for (Cell& c : t.cells) c.is_column_header = false;
  }
  for (Cell& c : t.cells) c.is_projected_row_header = false;

  const TableGrid grid = build_grid(t);
  const std::vector<RowScan> scans = scan_rows(t, grid);

  int header_end = -1;  // inclusive index of the last column-header row
  if (t.n_cols >= 3) {
    const int first_half = (t.n_rows + 1) / 2;
    bool blocked = false;
    for (int r = 0; r < first_half; ++r) {
      if (scans[r].prh_candidate) {
        blocked = true;  // a section label (or caption) interrupts the header
        break;
      }
      if (scans[r].complete) {
        header_end = r;
        break;
      }
    }
    if (header_end >= 0) {
      for (int r = 0; r <= header_end; ++r) t.rows[r].is_column_header = true;
      for (Cell& c : t.cells)
        if (c.row_end <= header_end) c.is_column_header = true;
    } else if (!blocked) {
      result.flags.push_back(FlagCode::HeaderUndetermined);
    }
  } else if (two_col && trust_existing_two_col_header) {
    for (int r = 0; r < t.n_rows; ++r)
      if (t.rows[r].is_column_header) header_end = r;
  }

  // Full-width section labels outside the header.
  for (int r = 0; r < t.n_rows; ++r) {
    if (r <= header_end) continue;
    if (!scans[r].prh_candidate) continue;
    Cell& c = t.cells[*scans[r].prh_cell];
    if (c.col_start == 0 && c.col_end == t.n_cols - 1) c.is_projected_row_header = true;
  }

  if (!(t == before)) result.changes.push_back(ChangeCode::HeadersInferred);
  return result;
}

StepResult infer_two_column_header(TableAnnotation& t, const PipelineOptions& options) {
  StepResult result;
  if (t.n_cols != 2) return result;
  if (t.rows.empty()) t.rows.resize(t.n_rows);

  // Markup hints do not survive: the a4 removal rule only honors headers
  // established by this text-based test.
  for (RowAnnotation& r : t.rows) r.is_column_header = false;
  for (Cell& c : t.cells) c.is_column_header = false;

  auto numeric_like = [&](const std::string& raw) {
    std::string s = normalize_text(raw);
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
    std::string rest;
    std::size_t pos = 0;
    while (pos < s.size()) {
      if (consume_glyph(s, pos, options.currency_glyphs)) continue;
      const char c = s[pos];
      if (c == ',' || c == '%' || std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
        continue;
      }
      rest.push_back(c);
      ++pos;
    }
    if (rest.empty()) return false;
    std::size_t i = 0;
    if (rest[i] == '+' || rest[i] == '-') ++i;
    int digits = 0, dots = 0;
    for (; i < rest.size(); ++i) {
      if (std::isdigit(static_cast<unsigned char>(rest[i])))
        ++digits;
      else if (rest[i] == '.')
        ++dots;
      else
        return false;
    }
    return digits > 0 && dots <= 1;
  };

  bool first_row_texty = false;
  {
    int non_blank = 0;
    bool any_numeric = false;
    for (const Cell& c : t.cells) {
      if (c.row_start != 0) continue;
      if (c.is_blank()) continue;
      ++non_blank;
      if (numeric_like(c.text)) any_numeric = true;
    }
    first_row_texty = non_blank > 0 && !any_numeric;
  }

  bool numeric_column = false;
  for (int col = 0; col < 2 && !numeric_column; ++col) {
    int non_blank = 0, numeric = 0;
    for (const Cell& c : t.cells) {
      if (c.row_start == 0) continue;  // body only
      if (col < c.col_start || col > c.col_end) continue;
      if (c.is_blank()) continue;
      ++non_blank;
      if (numeric_like(c.text)) ++numeric;
    }
    if (non_blank > 0 && numeric > options.numeric_majority_threshold * non_blank)
      numeric_column = true;
  }

  if (first_row_texty && numeric_column) {
    t.rows[0].is_column_header = true;
    for (Cell& c : t.cells)
      if (c.row_end == 0) c.is_column_header = true;
    result.changes.push_back(ChangeCode::TwoColumnHeaderInferred);
  }
  return result;
}

namespace {

bool row_is_header(const TableAnnotation& t, int r) {
  return static_cast<int>(t.rows.size()) == t.n_rows && t.rows[r].is_column_header;
}

bool cell_rows_in_header(const TableAnnotation& t, const Cell& c) {
  for (int r = c.row_start; r <= c.row_end; ++r)
    if (!row_is_header(t, r)) return false;
  return true;
}

}  // namespace

StepResult canonicalize(TableAnnotation& t) {
  StepResult result;
  bool has_header = false;
  for (const RowAnnotation& r : t.rows) has_header = has_header || r.is_column_header;
  if (t.n_cols == 2 && !has_header) {
    result.removal = RemovalReason::TwoColumnAmbiguous;
    return result;
  }

  bool changed = false;

  // R1: blank header strips directly beneath a multi-column header cell merge
  // into it when they lie within its column extent.
  for (bool again = true; again;) {
    again = false;
    const TableGrid grid = build_grid(t);
    for (std::size_t i = 0; i < t.cells.size() && !again; ++i) {
      Cell& cell = t.cells[i];
      if (cell.col_span() < 2) continue;
      if (!cell_rows_in_header(t, cell)) continue;
      const int below = cell.row_end + 1;
      if (below >= t.n_rows || !row_is_header(t, below)) continue;

      bool absorbable = true;
      std::set<std::size_t> absorbed;
      for (int c = cell.col_start; c <= cell.col_end && absorbable; ++c) {
        const GridEntry& e = grid.at(below, c);
        if (!e.is_blank()) {
          absorbable = false;
          break;
        }
        if (e.cell_ref) {
          const Cell& b = t.cells[*e.cell_ref];
          if (b.row_start != below || b.row_end != below || b.col_start < cell.col_start ||
              b.col_end > cell.col_end)
            absorbable = false;
          else
            absorbed.insert(*e.cell_ref);
        }
      }
      if (!absorbable) continue;

      for (std::size_t ref : absorbed) {
        if (!t.cells[ref].is_blank())
          throw Error(ErrorCode::CanonicalizationConflict,
                      "merge would join two non-blank cells in '" + t.table_id + "'");
        cell.box = maybe_union(cell.box, t.cells[ref].box);
      }
      cell.row_end = below;
      std::vector<Cell> cells;
      cells.reserve(t.cells.size());
      for (std::size_t k = 0; k < t.cells.size(); ++k)
        if (!absorbed.count(k)) cells.push_back(t.cells[k]);
      t.cells = std::move(cells);
      changed = true;
      again = true;
    }
  }

  // R2: blank header cells merge into their non-blank left neighbor when both
  // sit under the same covering cell.
  for (bool again = true; again;) {
    again = false;
    const TableGrid grid = build_grid(t);
    for (int r = 1; r < t.n_rows && !again; ++r) {
      if (!row_is_header(t, r)) continue;
      for (int c = 1; c < t.n_cols && !again; ++c) {
        const GridEntry& e = grid.at(r, c);
        if (!e.cell_ref || !e.is_blank()) continue;
        if (e.rel.row_start != 0 || e.rel.col_start != 0) continue;  // anchor only
        const std::size_t blank_ref = *e.cell_ref;
        const Cell blank = t.cells[blank_ref];
        if (blank.row_start != r || blank.row_end != r) continue;

        const GridEntry& left = grid.at(r, c - 1);
        if (!left.cell_ref || left.is_blank()) continue;
        const std::size_t left_ref = *left.cell_ref;
        if (t.cells[left_ref].row_start != blank.row_start ||
            t.cells[left_ref].row_end != blank.row_end)
          continue;

        const GridEntry& above_blank = grid.at(r - 1, c);
        const GridEntry& above_left = grid.at(r - 1, c - 1);
        if (!above_blank.cell_ref || !above_left.cell_ref ||
            *above_blank.cell_ref != *above_left.cell_ref)
          continue;

        t.cells[left_ref].col_end = blank.col_end;
        t.cells[left_ref].box = maybe_union(t.cells[left_ref].box, blank.box);
        t.cells.erase(t.cells.begin() + static_cast<long>(blank_ref));
        changed = true;
        again = true;
      }
    }
  }

  // R3: in a section-label row the non-blank cell absorbs the row's blanks
  // and spans all columns.
  if (t.n_cols >= 2) {
    for (bool again = true; again;) {
      again = false;
      const TableGrid grid = build_grid(t);
      for (int r = 0; r < t.n_rows && !again; ++r) {
        if (row_is_header(t, r)) continue;
        std::set<std::size_t> non_blank, blanks;
        for (int c = 0; c < t.n_cols; ++c) {
          const GridEntry& e = grid.at(r, c);
          if (!e.cell_ref) continue;
          if (e.is_blank())
            blanks.insert(*e.cell_ref);
          else
            non_blank.insert(*e.cell_ref);
        }
        if (non_blank.size() != 1) continue;
        const std::size_t ref = *non_blank.begin();
        if (t.cells[ref].row_start != r || t.cells[ref].row_end != r) continue;
        bool contained = true;
        for (std::size_t b : blanks)
          if (t.cells[b].row_start != r || t.cells[b].row_end != r) contained = false;
        if (!contained) continue;

        Cell& cell = t.cells[ref];
        const bool full = cell.col_start == 0 && cell.col_end == t.n_cols - 1;
        if (full) {
          if (!cell.is_projected_row_header) {
            cell.is_projected_row_header = true;
            changed = true;
          }
          continue;
        }
        for (std::size_t b : blanks) cell.box = maybe_union(cell.box, t.cells[b].box);
        cell.col_start = 0;
        cell.col_end = t.n_cols - 1;
        cell.is_projected_row_header = true;
        std::vector<Cell> cells;
        cells.reserve(t.cells.size());
        for (std::size_t k = 0; k < t.cells.size(); ++k)
          if (!blanks.count(k)) cells.push_back(t.cells[k]);
        t.cells = std::move(cells);
        changed = true;
        again = true;
      }
    }
  }

  validate(t);
  if (changed) result.changes.push_back(ChangeCode::CanonicalCellsMerged);
  return result;
}

StepResult quality_control(const TableAnnotation& t, const PipelineOptions& options) {
  StepResult result;

  for (const Word& word : t.words) {
    const double area = word.box.area();
    if (area <= 0.0) continue;
    double best = 0.0;
    int coincident = 0;
    for (const Cell& c : t.cells) {
      if (!c.box) continue;
      const double overlap = intersection_area(word.box, *c.box);
      best = std::max(best, overlap);
      if (overlap >= options.word_overlap_threshold * area) ++coincident;
    }
    if (best <= options.qc_coverage_threshold * area || coincident >= 2) {
      result.removal = RemovalReason::WordCellCoincidence;
      return result;
    }
  }

  for (const Cell& c : t.cells) {
    if (!c.is_projected_row_header) continue;
    if (c.row_start == 0) {
      result.removal = RemovalReason::CaptionAsRow;
      return result;
    }
    if (c.row_end == t.n_rows - 1) {
      result.removal = RemovalReason::FooterAsRow;
      return result;
    }
  }

  if (static_cast<int>(t.rows.size()) == t.n_rows) {
    bool has_body = false;
    for (const RowAnnotation& r : t.rows) has_body = has_body || !r.is_column_header;
    if (!has_body) {
      result.removal = RemovalReason::HeaderOnly;
      return result;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Corpus driver.

namespace {

struct PerTableResult {
  std::optional<TableAnnotation> table;
  TableOutcome outcome;
};

using StepFn = std::function<StepResult(TableAnnotation&)>;

struct Step {
  std::string stage;  // label used in the report ("a1".."a6")
  StepFn fn;
  bool rerun_refine_on_change = false;
};

// The execution plan, already in execution order (a5 precedes a4).
std::vector<Step> build_steps(PipelineMode mode, const std::string& target,
                              const PipelineOptions& options) {
  const auto stage_rank = [](const std::string& s) { return s[1] - '0'; };
  std::vector<Step> steps;
  const int target_rank = stage_rank(target);

  auto add = [&](const std::string& stage, StepFn fn, bool rerun = false) {
    steps.push_back(Step{stage, std::move(fn), rerun});
  };

  if (mode == PipelineMode::Fintabnet) {
    add("a1", [&options](TableAnnotation& t) { return complete_rows_columns(t, options); });
    if (target_rank >= 2)
      add("a2", [&options](TableAnnotation& t) { return refine_boxes(t, options); });
    if (target_rank >= 3) {
      add("a3", [&options](TableAnnotation& t) { return strip_dot_leaders(t, options); }, true);
      add("a3", [](TableAnnotation& t) { return remove_empty_rows_columns(t); }, true);
      add("a3", [](TableAnnotation& t) { return merge_adjacent_header_rows(t); }, true);
      add("a3",
          [&options](TableAnnotation& t) { return detect_currency_column_removal(t, options); });
    }
    const bool with_a5 = target_rank >= 5;
    if (with_a5)
      add("a5", [&options](TableAnnotation& t) { return infer_two_column_header(t, options); });
    if (target_rank >= 4) {
      add("a4", [with_a5](TableAnnotation& t) {
        const bool trusted = with_a5 && t.n_cols == 2 && !t.rows.empty() &&
                             t.rows[0].is_column_header;
        return infer_headers(t, trusted);
      });
      add("a4", [](TableAnnotation& t) { return canonicalize(t); });
    }
    if (target_rank >= 6)
      add("a6", [&options](TableAnnotation& t) { return quality_control(t, options); });
  } else {
    // ICDAR: a1 completion; a2 is the manual overlay (driver-level); a3 runs
    // the automated a2..a4 steps.
    add("a1", [&options](TableAnnotation& t) { return complete_rows_columns(t, options); });
    if (target_rank >= 3) {
      add("a3", [&options](TableAnnotation& t) { return refine_boxes(t, options); });
      add("a3", [&options](TableAnnotation& t) { return strip_dot_leaders(t, options); }, true);
      add("a3", [](TableAnnotation& t) { return remove_empty_rows_columns(t); }, true);
      add("a3", [](TableAnnotation& t) { return merge_adjacent_header_rows(t); }, true);
      add("a3",
          [&options](TableAnnotation& t) { return detect_currency_column_removal(t, options); });
      add("a3", [&options](TableAnnotation& t) { return infer_two_column_header(t, options); });
      add("a3", [](TableAnnotation& t) {
        const bool trusted = t.n_cols == 2 && !t.rows.empty() && t.rows[0].is_column_header;
        return infer_headers(t, trusted);
      });
      add("a3", [](TableAnnotation& t) { return canonicalize(t); });
    }
  }
  return steps;
}

PerTableResult process_one(TableAnnotation t, PipelineMode mode, const std::string& target,
                           const PipelineOptions& options, const std::vector<Step>& steps) {
  PerTableResult result;
  result.outcome.table_id = t.table_id;

  auto record = [&](const Step& step, const StepResult& r) {
    for (ChangeCode code : r.changes) result.outcome.changes.push_back(code);
    for (FlagCode flag : r.flags)
      result.outcome.flags.push_back(StageFlag{step.stage, flag_code_name(flag)});
  };

  for (const Step& step : steps) {
    if (mode == PipelineMode::Fintabnet) {
      StepResult r = step.fn(t);
      if (r.removal) {
        result.outcome.kept = false;
        result.outcome.removal_reason = r.removal;
        result.outcome.removal_stage = step.stage;
        return result;
      }
      record(step, r);
      if (step.rerun_refine_on_change && !r.changes.empty()) {
        StepResult rr = refine_boxes(t, options);
        if (rr.removal) {
          result.outcome.kept = false;
          result.outcome.removal_reason = rr.removal;
          result.outcome.removal_stage = step.stage;
          return result;
        }
        record(step, rr);
      }
    } else {
      // Flag mode: a failed step leaves the table at its pre-step state.
      TableAnnotation copy = t;
      StepResult r = step.fn(copy);
      if (r.removal) {
        result.outcome.flags.push_back(StageFlag{step.stage, removal_reason_name(*r.removal)});
        if (step.stage == "a1") break;  // nothing downstream can run without boxes
        continue;
      }
      t = std::move(copy);
      record(step, r);
      if (step.rerun_refine_on_change && !r.changes.empty()) {
        TableAnnotation copy2 = t;
        StepResult rr = refine_boxes(t, options);
        if (rr.removal) {
          result.outcome.flags.push_back(
              StageFlag{step.stage, removal_reason_name(*rr.removal)});
          t = std::move(copy2);
        } else {
          record(step, rr);
        }
      }
    }
  }
  t.stage = target;
  result.table = std::move(t);
  return result;
}

std::vector<std::string> executed_stage_labels(PipelineMode mode, const std::string& target) {
  const int rank = target[1] - '0';
  std::vector<std::string> labels;
  if (mode == PipelineMode::Fintabnet) {
    labels.push_back("a1");
    if (rank >= 2) labels.push_back("a2");
    if (rank >= 3) labels.push_back("a3");
    if (rank >= 5) labels.push_back("a5");
    if (rank >= 4) labels.push_back("a4");
    if (rank >= 6) labels.push_back("a6");
  } else {
    labels.push_back("a1");
    if (rank >= 2) labels.push_back("a2");
    if (rank >= 3) labels.push_back("a3");
  }
  return labels;
}

}  // namespace

std::vector<std::string> stages_for_mode(PipelineMode mode) {
  if (mode == PipelineMode::Fintabnet) return {"a1", "a2", "a3", "a4", "a5", "a6"};
  return {"a1", "a2", "a3"};
}

std::string stage_display_name(PipelineMode mode, const std::string& stage) {
  if (mode == PipelineMode::Fintabnet) {
    if (stage == "a1") return "Completion";
    if (stage == "a2") return "Cell box adjustment";
    if (stage == "a3") return "Consistency adjustments";
    if (stage == "a4") return "Canonicalization";
    if (stage == "a5") return "Additional column header inference";
    if (stage == "a6") return "Quality control";
  } else {
    if (stage == "a1") return "Completion";
    if (stage == "a2") return "Manual correction";
    if (stage == "a3") return "Consistency adjustments and canonicalization";
  }
  return stage;
}

PipelineResult run_pipeline(std::vector<TableAnnotation> tables, PipelineMode mode,
                            const std::string& target_stage, const PipelineOptions& options,
                            int threads, const std::vector<ManualCorrection>* overlay,
                            const std::string& dataset_name) {
  const auto valid = stages_for_mode(mode);
  if (std::find(valid.begin(), valid.end(), target_stage) == valid.end())
    throw Error(ErrorCode::ManifestError,
                "stage '" + target_stage + "' is not valid for this dataset kind");

  PipelineResult result;
  result.report.dataset = dataset_name;
  result.report.mode = mode;
  result.report.target_stage = target_stage;
  result.report.input_count = tables.size();
  if (!tables.empty()) result.report.stats_before = dataset_stats(tables);

  const int target_rank = target_stage[1] - '0';
  std::map<std::string, TableOutcome> corrected;  // outcomes seeded by the overlay step

  // ICDAR a2: manual-correction overlay, applied corpus-wide before the
  // automated steps.
  if (mode == PipelineMode::Icdar && target_rank >= 2 && overlay && !overlay->empty()) {
    std::set<std::string> targeted;
    for (const ManualCorrection& mc : *overlay) targeted.insert(mc.table_id);
    tables = apply_corrections(std::move(tables), *overlay);
    for (const TableAnnotation& t : tables) {
      std::string original = t.table_id;
      // Split parts carry the original id plus a _k suffix.
      if (!targeted.count(original)) {
        const std::size_t us = original.find_last_of('_');
        if (us != std::string::npos && targeted.count(original.substr(0, us)))
          original = original.substr(0, us);
      }
      if (targeted.count(original)) {
        TableOutcome o;
        o.table_id = t.table_id;
        o.changes.push_back(ChangeCode::ManuallyCorrected);
        corrected.emplace(t.table_id, std::move(o));
      }
    }
  }

  const std::vector<Step> steps = build_steps(mode, target_stage, options);
  std::vector<PerTableResult> slots(tables.size());
  parallel_for_index(tables.size(), threads, [&](std::size_t i) {
    slots[i] = process_one(tables[i], mode, target_stage, options, steps);
    const auto it = corrected.find(tables[i].table_id);
    if (it != corrected.end()) {
      auto& changes = slots[i].outcome.changes;
      changes.insert(changes.begin(), it->second.changes.begin(), it->second.changes.end());
    }
  });

  for (PerTableResult& slot : slots) {
    if (slot.table) result.tables.push_back(std::move(*slot.table));
    result.report.outcomes.push_back(std::move(slot.outcome));
  }
  std::sort(result.report.outcomes.begin(), result.report.outcomes.end(),
            [](const TableOutcome& a, const TableOutcome& b) { return a.table_id < b.table_id; });

  // Stage summaries in execution order.
  PipelineReport& report = result.report;
  report.output_count = result.tables.size();
  for (const std::string& label : executed_stage_labels(mode, target_stage))
    report.stages.push_back(StageSummary{label, stage_display_name(mode, label), {}, {}});
  auto stage_summary = [&](const std::string& label) -> StageSummary& {
    for (StageSummary& s : report.stages)
      if (s.stage == label) return s;
    report.stages.push_back(StageSummary{label, stage_display_name(mode, label), {}, {}});
    return report.stages.back();
  };

  for (const TableOutcome& o : report.outcomes) {
    if (o.kept) {
      ++report.kept_count;
      if (o.modified()) ++report.modified_count;
      std::set<std::string> seen;
      for (ChangeCode code : o.changes) {
        if (seen.insert(change_code_name(code)).second)
          ++report.modified_by_change[change_code_name(code)];
      }
    } else {
      ++report.removed_count;
      ++report.removed_by_reason[removal_reason_name(*o.removal_reason)];
      ++stage_summary(o.removal_stage).removed_by_reason[removal_reason_name(*o.removal_reason)];
    }
    for (const StageFlag& f : o.flags) ++stage_summary(f.stage).flagged_by_reason[f.code];
  }
  if (!result.tables.empty()) report.stats_after = dataset_stats(result.tables);
  return result;
}

namespace {

std::string counts_to_string(const std::map<std::string, int>& counts) {
  if (counts.empty()) return "-";
  std::string out;
  for (const auto& [k, v] : counts) {
    if (!out.empty()) out += ", ";
    out += k + " " + std::to_string(v);
  }
  return out;
}

}  // namespace

std::string pipeline_report_text(const PipelineReport& report) {
  std::ostringstream out;
  out << "dataset: " << report.dataset
      << "  mode: " << (report.mode == PipelineMode::Fintabnet ? "fintabnet" : "icdar")
      << "  target stage: " << report.target_stage << "\n";
  for (const StageSummary& s : report.stages) {
    char line[512];
    std::snprintf(line, sizeof(line), "stage %-3s %-45s removed: %-28s flagged: %s\n",
                  s.stage.c_str(), s.name.c_str(), counts_to_string(s.removed_by_reason).c_str(),
                  counts_to_string(s.flagged_by_reason).c_str());
    out << line;
  }
  out << "tables: input " << report.input_count << ", output " << report.output_count << ", kept "
      << report.kept_count << " (modified " << report.modified_count << "), removed "
      << report.removed_count << "\n";
  out << "removed by reason: " << counts_to_string(report.removed_by_reason) << "\n";
  out << "changes applied: " << counts_to_string(report.modified_by_change) << "\n";
  return out.str();
}

std::string pipeline_report_json(const PipelineReport& report) {
  nlohmann::ordered_json j;
  j["dataset"] = report.dataset;
  j["mode"] = report.mode == PipelineMode::Fintabnet ? "fintabnet" : "icdar";
  j["target_stage"] = report.target_stage;
  j["input_count"] = report.input_count;
  j["output_count"] = report.output_count;
  j["kept_count"] = report.kept_count;
  j["removed_count"] = report.removed_count;
  j["modified_count"] = report.modified_count;

  nlohmann::ordered_json stages = nlohmann::ordered_json::array();
  for (const StageSummary& s : report.stages) {
    nlohmann::ordered_json sj;
    sj["stage"] = s.stage;
    sj["name"] = s.name;
    sj["removed_by_reason"] = s.removed_by_reason;
    sj["flagged_by_reason"] = s.flagged_by_reason;
    stages.push_back(std::move(sj));
  }
  j["stages"] = std::move(stages);
  j["removed_by_reason"] = report.removed_by_reason;
  j["changes_applied"] = report.modified_by_change;

  nlohmann::ordered_json outcomes = nlohmann::ordered_json::array();
  for (const TableOutcome& o : report.outcomes) {
    nlohmann::ordered_json oj;
    oj["table_id"] = o.table_id;
    oj["outcome"] = !o.kept ? "removed" : (o.modified() ? "modified" : "kept");
    if (!o.kept) {
      oj["stage"] = o.removal_stage;
      oj["reason"] = removal_reason_name(*o.removal_reason);
    }
    nlohmann::ordered_json changes = nlohmann::ordered_json::array();
    std::set<std::string> seen;
    for (ChangeCode code : o.changes)
      if (seen.insert(change_code_name(code)).second) changes.push_back(change_code_name(code));
    oj["changes"] = std::move(changes);
    nlohmann::ordered_json flags = nlohmann::ordered_json::array();
    for (const StageFlag& f : o.flags)
      flags.push_back(nlohmann::ordered_json{{"stage", f.stage}, {"code", f.code}});
    oj["flags"] = std::move(flags);
    outcomes.push_back(std::move(oj));
  }
  j["tables"] = std::move(outcomes);

  auto stats_json_obj = [](const DatasetStats& s) {
    return nlohmann::ordered_json{{"n_tables", s.n_tables},
                                  {"n_unique_topologies", s.n_unique_topologies},
                                  {"avg_tables_per_topology", s.avg_tables_per_topology},
                                  {"avg_rows", s.avg_rows},
                                  {"avg_cols", s.avg_cols},
                                  {"avg_spanning_cells", s.avg_spanning_cells}};
  };
  j["stats_before"] =
      report.stats_before ? stats_json_obj(*report.stats_before) : nlohmann::ordered_json(nullptr);
  j["stats_after"] =
      report.stats_after ? stats_json_obj(*report.stats_after) : nlohmann::ordered_json(nullptr);
  return j.dump(2) + "\n";
}

}  // namespace tabalign
