#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabalign/geometry.hpp"

namespace tabalign {

enum class Split { Train, Val, Test };

const char* split_name(Split s);
Split split_from_name(std::string_view name);

struct Word {
  std::string text;
  BBox box;

  bool operator==(const Word&) const = default;
};

// Grid extents are 0-based inclusive on both ends.
struct Cell {
  int row_start = 0;
  int row_end = 0;
  int col_start = 0;
  int col_end = 0;
  std::optional<BBox> box;
  std::string text;
  bool is_column_header = false;
  bool is_projected_row_header = false;

  int row_span() const { return row_end - row_start + 1; }
  int col_span() const { return col_end - col_start + 1; }
  bool is_spanning() const { return row_span() > 1 || col_span() > 1; }
  bool is_blank() const;
  bool covers(int row, int col) const {
    return row >= row_start && row <= row_end && col >= col_start && col <= col_end;
  }

  bool operator==(const Cell&) const = default;
};

struct RowAnnotation {
  std::optional<BBox> box;
  bool is_column_header = false;

  bool operator==(const RowAnnotation&) const = default;
};

struct ColumnAnnotation {
  std::optional<BBox> box;

  bool operator==(const ColumnAnnotation&) const = default;
};

struct Provenance {
  std::string dataset;
  std::string document;

  bool operator==(const Provenance&) const = default;
};

struct TableAnnotation {
  std::string table_id;
  Split split = Split::Train;
  int n_rows = 0;
  int n_cols = 0;
  std::vector<Cell> cells;
  std::vector<RowAnnotation> rows;        // empty or length n_rows
  std::vector<ColumnAnnotation> columns;  // empty or length n_cols
  std::vector<Word> words;
  std::string stage;
  Provenance provenance;

  bool operator==(const TableAnnotation&) const = default;
};

// Trims surrounding whitespace and collapses internal runs to single spaces.
std::string normalize_text(std::string_view text);

// Blank means empty after trimming; blank cells are the gaps of the grid.
bool is_blank_text(std::string_view text);

// Throws Error(ValidationFailure) naming the table and the offending field.
void validate(const TableAnnotation& table);

}  // namespace tabalign
