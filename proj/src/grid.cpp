#include "tabalign/grid.hpp"

#include <sstream>

#include "tabalign/errors.hpp"

namespace tabalign {

TableGrid build_grid(const TableAnnotation& t) {
  TableGrid grid;
  grid.n_rows = t.n_rows;
  grid.n_cols = t.n_cols;
  grid.entries.assign(static_cast<std::size_t>(t.n_rows) * t.n_cols, GridEntry{});

  std::vector<int> owner(grid.entries.size(), -1);
  for (std::size_t i = 0; i < t.cells.size(); ++i) {
    const Cell& c = t.cells[i];
    if (c.row_start < 0 || c.row_end >= t.n_rows || c.col_start < 0 || c.col_end >= t.n_cols ||
        c.row_start > c.row_end || c.col_start > c.col_end) {
      throw Error(ErrorCode::OutOfRange,
                  "cell " + std::to_string(i) + " extent exceeds " + std::to_string(t.n_rows) +
                      "x" + std::to_string(t.n_cols) + " grid of table '" + t.table_id + "'");
    }
    for (int r = c.row_start; r <= c.row_end; ++r) {
      for (int col = c.col_start; col <= c.col_end; ++col) {
        int& slot = owner[static_cast<std::size_t>(r) * t.n_cols + col];
        if (slot >= 0) {
          throw Error(ErrorCode::OverlappingCells,
                      "cells " + std::to_string(slot) + " and " + std::to_string(i) +
                          " both cover (" + std::to_string(r) + "," + std::to_string(col) +
                          ") in table '" + t.table_id + "'");
        }
        slot = static_cast<int>(i);
        GridEntry& e = grid.at(r, col);
        e.cell_ref = i;
        e.text = c.text;
        e.box = c.box;
        e.rel = RelExtent{c.row_start - r, c.row_end - r, c.col_start - col, c.col_end - col};
      }
    }
  }
  return grid;
}

std::vector<std::optional<std::size_t>> slot_words(std::span<const Cell> cells,
                                                   std::span<const Word> words) {
  std::vector<std::optional<std::size_t>> assignment(words.size());
  for (std::size_t w = 0; w < words.size(); ++w) {
    double best_area = 0.0;
    std::optional<std::size_t> best;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!cells[c].box) continue;
      const double a = intersection_area(words[w].box, *cells[c].box);
      if (a > best_area) {
        best_area = a;
        best = c;
      }
    }
    assignment[w] = best;
  }
  return assignment;
}

std::string topology_signature(const TableGrid& grid) {
  std::ostringstream out;
  out << grid.n_rows << 'x' << grid.n_cols;
  for (const GridEntry& e : grid.entries) {
    out << '|' << e.rel.row_start << ',' << e.rel.row_end << ',' << e.rel.col_start << ','
        << e.rel.col_end;
  }
  return out.str();
}

std::string topology_signature(const TableAnnotation& table) {
  return topology_signature(build_grid(table));
}

}  // namespace tabalign
