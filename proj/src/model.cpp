#include "tabalign/model.hpp"

#include <cctype>

#include "tabalign/errors.hpp"

namespace tabalign {

const char* split_name(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "train";
}

Split split_from_name(std::string_view name) {
  if (name == "train") return Split::Train;
  if (name == "val") return Split::Val;
  if (name == "test") return Split::Test;
  throw Error(ErrorCode::ValidationFailure, "unknown split '" + std::string(name) + "'");
}

std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(c);
  }
  return out;
}

bool is_blank_text(std::string_view text) {
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

bool Cell::is_blank() const { return is_blank_text(text); }

namespace {

void fail(const TableAnnotation& t, const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ValidationFailure,
              "table '" + t.table_id + "' " + path + ": " + what);
}

}  // namespace

void validate(const TableAnnotation& t) {
  if (t.n_rows <= 0) fail(t, "n_rows", "must be positive");
  if (t.n_cols <= 0) fail(t, "n_cols", "must be positive");
  if (!t.rows.empty() && static_cast<int>(t.rows.size()) != t.n_rows)
    fail(t, "rows", "length differs from n_rows");
  if (!t.columns.empty() && static_cast<int>(t.columns.size()) != t.n_cols)
    fail(t, "columns", "length differs from n_cols");

  std::vector<int> owner(static_cast<std::size_t>(t.n_rows) * t.n_cols, -1);
  for (std::size_t i = 0; i < t.cells.size(); ++i) {
    const Cell& c = t.cells[i];
    const std::string path = "cells[" + std::to_string(i) + "]";
    if (c.row_start > c.row_end) fail(t, path + ".row_end", "row_start > row_end");
    if (c.col_start > c.col_end) fail(t, path + ".col_end", "col_start > col_end");
    if (c.row_start < 0 || c.row_end >= t.n_rows) fail(t, path, "row extent out of range");
    if (c.col_start < 0 || c.col_end >= t.n_cols) fail(t, path, "column extent out of range");
    if (c.box && !c.box->valid()) fail(t, path + ".box", "invalid bounding box");
    if (c.is_projected_row_header && !(c.col_start == 0 && c.col_end == t.n_cols - 1))
      fail(t, path, "projected row header must span all columns");
    for (int r = c.row_start; r <= c.row_end; ++r) {
      for (int col = c.col_start; col <= c.col_end; ++col) {
        int& slot = owner[static_cast<std::size_t>(r) * t.n_cols + col];
        if (slot >= 0)
          fail(t, path, "overlaps cells[" + std::to_string(slot) + "] at (" + std::to_string(r) +
                            "," + std::to_string(col) + ")");
        slot = static_cast<int>(i);
      }
    }
  }

  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.rows[i].box && !t.rows[i].box->valid())
      fail(t, "rows[" + std::to_string(i) + "].box", "invalid bounding box");
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (t.columns[i].box && !t.columns[i].box->valid())
      fail(t, "columns[" + std::to_string(i) + "].box", "invalid bounding box");
  }
  for (std::size_t i = 0; i < t.words.size(); ++i) {
    const std::string path = "words[" + std::to_string(i) + "]";
    if (is_blank_text(t.words[i].text)) fail(t, path + ".text", "empty word text");
    if (!t.words[i].box.valid()) fail(t, path + ".box", "invalid bounding box");
  }
}

}  // namespace tabalign
