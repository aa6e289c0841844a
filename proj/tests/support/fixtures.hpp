#pragma once

// Hand-built fixture tables on a 100x20 lattice: column c spans
// x [100c, 100(c+1)], row r spans y [20r, 20(r+1)], cell boxes are inset by 2.
// The regular geometry keeps every mid-gap computation exact in doubles.

#include <string>
#include <vector>

#include "tabalign/model.hpp"

namespace fixtures {

inline constexpr double kColW = 100.0;
inline constexpr double kRowH = 20.0;

inline tabalign::BBox cell_region(int r0, int r1, int c0, int c1) {
  return tabalign::BBox{kColW * c0 + 2, kRowH * r0 + 2, kColW * (c1 + 1) - 2,
                        kRowH * (r1 + 1) - 2};
}

inline tabalign::TableAnnotation make_table(int rows, int cols, const std::string& id = "t") {
  tabalign::TableAnnotation t;
  t.table_id = id;
  t.split = tabalign::Split::Train;
  t.n_rows = rows;
  t.n_cols = cols;
  t.rows.resize(rows);
  t.columns.resize(cols);
  t.provenance = tabalign::Provenance{"fixture", id};
  t.stage = "raw";
  return t;
}

// Boxed cell with one word covering the box.
inline void add_cell(tabalign::TableAnnotation& t, int r0, int r1, int c0, int c1,
                     const std::string& text) {
  tabalign::Cell cell;
  cell.row_start = r0;
  cell.row_end = r1;
  cell.col_start = c0;
  cell.col_end = c1;
  cell.box = cell_region(r0, r1, c0, c1);
  cell.text = text;
  t.cells.push_back(cell);
  if (!text.empty()) t.words.push_back(tabalign::Word{text, *t.cells.back().box});
}

inline void add_blank_boxed_cell(tabalign::TableAnnotation& t, int r0, int r1, int c0, int c1) {
  tabalign::Cell cell;
  cell.row_start = r0;
  cell.row_end = r1;
  cell.col_start = c0;
  cell.col_end = c1;
  cell.box = cell_region(r0, r1, c0, c1);
  t.cells.push_back(cell);
}

// Fills every uncovered position with a simple boxed cell "r<r>c<c>".
inline void fill_simple(tabalign::TableAnnotation& t) {
  std::vector<bool> taken(static_cast<std::size_t>(t.n_rows) * t.n_cols, false);
  for (const tabalign::Cell& c : t.cells)
    for (int r = c.row_start; r <= c.row_end; ++r)
      for (int col = c.col_start; col <= c.col_end; ++col)
        taken[static_cast<std::size_t>(r) * t.n_cols + col] = true;
  for (int r = 0; r < t.n_rows; ++r)
    for (int c = 0; c < t.n_cols; ++c)
      if (!taken[static_cast<std::size_t>(r) * t.n_cols + c])
        add_cell(t, r, r, c, c, "r" + std::to_string(r) + "c" + std::to_string(c));
}

// A clean table: row 0 holds header-style labels, the body holds plain text.
inline tabalign::TableAnnotation clean_table(int rows, int cols, const std::string& id) {
  tabalign::TableAnnotation t = make_table(rows, cols, id);
  for (int c = 0; c < cols; ++c) add_cell(t, 0, 0, c, c, "Label" + std::to_string(c));
  for (int r = 1; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      add_cell(t, r, r, c, c, "r" + std::to_string(r) + "c" + std::to_string(c));
  return t;
}

// A table whose cell (1,0) carries a trailing dot-leader word.
inline tabalign::TableAnnotation dot_leader_table(const std::string& id) {
  tabalign::TableAnnotation t = make_table(3, 3, id);
  for (int c = 0; c < 3; ++c) add_cell(t, 0, 0, c, c, "Label" + std::to_string(c));
  {
    tabalign::Cell cell;
    cell.row_start = cell.row_end = 1;
    cell.col_start = cell.col_end = 0;
    cell.text = "Revenue ......";
    const tabalign::BBox word1{4, 24, 48, 36};
    const tabalign::BBox leader{52, 24, 96, 36};
    cell.box = tabalign::box_union(word1, leader);
    t.cells.push_back(cell);
    t.words.push_back(tabalign::Word{"Revenue", word1});
    t.words.push_back(tabalign::Word{"......", leader});
  }
  for (int c = 1; c < 3; ++c) add_cell(t, 1, 1, c, c, "r1c" + std::to_string(c));
  for (int c = 0; c < 3; ++c) add_cell(t, 2, 2, c, c, "r2c" + std::to_string(c));
  return t;
}

// 4x3 table whose row 2 is a spacing row of boxed blank cells.
inline tabalign::TableAnnotation empty_row_table(const std::string& id) {
  tabalign::TableAnnotation t = make_table(4, 3, id);
  for (int c = 0; c < 3; ++c) add_cell(t, 0, 0, c, c, "Label" + std::to_string(c));
  for (int c = 0; c < 3; ++c) add_cell(t, 1, 1, c, c, "r1c" + std::to_string(c));
  for (int c = 0; c < 3; ++c) add_blank_boxed_cell(t, 2, 2, c, c);
  for (int c = 0; c < 3; ++c) add_cell(t, 3, 3, c, c, "r3c" + std::to_string(c));
  return t;
}

// Column 1 contains only dollar glyphs.
inline tabalign::TableAnnotation currency_column_table(const std::string& id) {
  tabalign::TableAnnotation t = make_table(3, 3, id);
  for (int r = 0; r < 3; ++r) {
    add_cell(t, r, r, 0, 0, "name" + std::to_string(r));
    add_cell(t, r, r, 1, 1, "$");
    add_cell(t, r, r, 2, 2, std::to_string(100 + r));
  }
  return t;
}

// Full-width caption row above an otherwise clean table. The caption text is
// two word tokens, the way an extractor would deliver it.
inline tabalign::TableAnnotation caption_table(const std::string& id) {
  tabalign::TableAnnotation t = make_table(4, 3, id);
  {
    tabalign::Cell cell;
    cell.row_start = cell.row_end = 0;
    cell.col_start = 0;
    cell.col_end = 2;
    cell.text = "Quarterly overview";
    const tabalign::BBox w1{2, 2, 148, 18};
    const tabalign::BBox w2{152, 2, 298, 18};
    cell.box = tabalign::box_union(w1, w2);
    t.cells.push_back(cell);
    t.words.push_back(tabalign::Word{"Quarterly", w1});
    t.words.push_back(tabalign::Word{"overview", w2});
  }
  for (int c = 0; c < 3; ++c) add_cell(t, 1, 1, c, c, "Label" + std::to_string(c));
  for (int r = 2; r < 4; ++r)
    for (int c = 0; c < 3; ++c)
      add_cell(t, r, r, c, c, "r" + std::to_string(r) + "c" + std::to_string(c));
  return t;
}

// The seeded-defect corpus: 2 empty-row, 2 dot-leader, 1 currency-column,
// 1 caption, 6 clean tables.
inline std::vector<tabalign::TableAnnotation> seeded_defect_corpus() {
  std::vector<tabalign::TableAnnotation> tables;
  tables.push_back(empty_row_table("seed-empty-1"));
  tables.push_back(empty_row_table("seed-empty-2"));
  tables.push_back(dot_leader_table("seed-leader-1"));
  tables.push_back(dot_leader_table("seed-leader-2"));
  tables.push_back(currency_column_table("seed-currency-1"));
  tables.push_back(caption_table("seed-caption-1"));
  for (int k = 1; k <= 6; ++k)
    tables.push_back(clean_table(3, 3, "seed-clean-" + std::to_string(k)));
  return tables;
}

}  // namespace fixtures
