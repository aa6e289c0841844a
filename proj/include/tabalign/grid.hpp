#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tabalign/model.hpp"

namespace tabalign {

// Span extents of the covering cell relative to a grid position. A simple
// cell reads (0,0,0,0); the position one column into a two-column span reads
// (0,0,-1,0).
struct RelExtent {
  int row_start = 0;
  int row_end = 0;
  int col_start = 0;
  int col_end = 0;

  bool operator==(const RelExtent&) const = default;
};

struct GridEntry {
  std::optional<std::size_t> cell_ref;  // index into the source cell list
  std::string text;
  std::optional<BBox> box;
  RelExtent rel;

  bool is_blank() const { return is_blank_text(text); }
};

// Dense M x N expansion of a table; uncovered positions are synthesized as
// blank entries.
struct TableGrid {
  int n_rows = 0;
  int n_cols = 0;
  std::vector<GridEntry> entries;

  const GridEntry& at(int row, int col) const {
    return entries[static_cast<std::size_t>(row) * n_cols + col];
  }
  GridEntry& at(int row, int col) {
    return entries[static_cast<std::size_t>(row) * n_cols + col];
  }
  int size() const { return n_rows * n_cols; }
};

// Throws Error(OutOfRange) / Error(OverlappingCells).
TableGrid build_grid(const TableAnnotation& table);

// Maximum-overlap word slotting. Returns one entry per word: the index of the
// cell with the largest intersection area, ties broken by lowest cell index,
// nullopt when no cell overlaps.
std::vector<std::optional<std::size_t>> slot_words(std::span<const Cell> cells,
                                                   std::span<const Word> words);

// Layout fingerprint: dimensions plus the row-major rel_extent stream.
// Invariant to text, geometry, and header flags.
std::string topology_signature(const TableAnnotation& table);
std::string topology_signature(const TableGrid& grid);

}  // namespace tabalign
