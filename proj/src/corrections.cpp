#include "tabalign/corrections.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tabalign/errors.hpp"

namespace tabalign {

namespace {

using nlohmann::json;

CellMatch match_from_json(const json& j) {
  CellMatch m;
  m.row_start = j.at("row_start").get<int>();
  m.row_end = j.at("row_end").get<int>();
  m.col_start = j.at("col_start").get<int>();
  m.col_end = j.at("col_end").get<int>();
  return m;
}

Cell cell_from_json(const json& j) {
  Cell c;
  c.row_start = j.at("row_start").get<int>();
  c.row_end = j.at("row_end").get<int>();
  c.col_start = j.at("col_start").get<int>();
  c.col_end = j.at("col_end").get<int>();
  if (j.contains("bbox") && !j["bbox"].is_null()) {
    const auto& b = j["bbox"];
    c.box = BBox{b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
  }
  c.text = j.value("text", std::string());
  c.is_column_header = j.value("is_column_header", false);
  c.is_projected_row_header = j.value("is_projected_row_header", false);
  return c;
}

std::size_t find_cell(const TableAnnotation& t, const CellMatch& m, const std::string& what) {
  for (std::size_t i = 0; i < t.cells.size(); ++i) {
    const Cell& c = t.cells[i];
    if (c.row_start == m.row_start && c.row_end == m.row_end && c.col_start == m.col_start &&
        c.col_end == m.col_end)
      return i;
  }
  throw Error(ErrorCode::TargetNotFound,
              what + ": no cell with extent (" + std::to_string(m.row_start) + "," +
                  std::to_string(m.row_end) + "," + std::to_string(m.col_start) + "," +
                  std::to_string(m.col_end) + ") in table '" + t.table_id + "'");
}

void revalidate(const TableAnnotation& t, const std::string& what) {
  try {
    validate(t);
  } catch (const Error& e) {
    throw Error(ErrorCode::ResultInvalid, what + " left an invalid table: " + e.what());
  }
}

Interval part_y_extent(const TableAnnotation& part) {
  Interval ext{0.0, 0.0};
  bool seen = false;
  for (const Cell& c : part.cells) {
    if (!c.box) continue;
    if (!seen) {
      ext = Interval{c.box->y_min, c.box->y_max};
      seen = true;
    } else {
      ext.merge(Interval{c.box->y_min, c.box->y_max});
    }
  }
  return ext;
}

std::vector<TableAnnotation> split_table(const TableAnnotation& t, const SplitTableOp& op) {
  std::vector<int> bounds = op.row_boundaries;
  std::sort(bounds.begin(), bounds.end());
  for (int b : bounds) {
    if (b <= 0 || b >= t.n_rows)
      throw Error(ErrorCode::ResultInvalid, "split boundary " + std::to_string(b) +
                                                " outside (0," + std::to_string(t.n_rows) +
                                                ") for table '" + t.table_id + "'");
  }
  std::vector<std::pair<int, int>> ranges;  // [first, last] row of each part
  int start = 0;
  for (int b : bounds) {
    ranges.emplace_back(start, b - 1);
    start = b;
  }
  ranges.emplace_back(start, t.n_rows - 1);

  std::vector<TableAnnotation> parts;
  for (std::size_t p = 0; p < ranges.size(); ++p) {
    const auto [lo, hi] = ranges[p];
    TableAnnotation part;
    part.table_id = t.table_id + "_" + std::to_string(p + 1);
    part.split = t.split;
    part.n_rows = hi - lo + 1;
    part.n_cols = t.n_cols;
    part.stage = t.stage;
    part.provenance = t.provenance;
    for (const Cell& c : t.cells) {
      if (c.row_end < lo || c.row_start > hi) continue;
      if (c.row_start < lo || c.row_end > hi)
        throw Error(ErrorCode::ResultInvalid, "cell spanning rows " + std::to_string(c.row_start) +
                                                  ".." + std::to_string(c.row_end) +
                                                  " crosses a split boundary in '" + t.table_id +
                                                  "'");
      Cell shifted = c;
      shifted.row_start -= lo;
      shifted.row_end -= lo;
      part.cells.push_back(std::move(shifted));
    }
    if (!t.rows.empty())
      part.rows.assign(t.rows.begin() + lo, t.rows.begin() + hi + 1);
    part.columns = t.columns;
    parts.push_back(std::move(part));
  }

  // Words go to the part whose vertical extent they overlap the most;
  // ties and strays go to the nearest part by center distance.
  std::vector<Interval> extents;
  extents.reserve(parts.size());
  for (const TableAnnotation& part : parts) extents.push_back(part_y_extent(part));
  for (const Word& w : t.words) {
    double best_overlap = 0.0;
    std::size_t best = 0;
    bool assigned = false;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      const double lo = std::max(w.box.y_min, extents[p].lo);
      const double hi = std::min(w.box.y_max, extents[p].hi);
      const double overlap = hi - lo;
      if (overlap > best_overlap) {
        best_overlap = overlap;
        best = p;
        assigned = true;
      }
    }
    if (!assigned) {
      double best_dist = 0.0;
      const double wc = (w.box.y_min + w.box.y_max) / 2.0;
      for (std::size_t p = 0; p < parts.size(); ++p) {
        const double d = std::abs(wc - extents[p].center());
        if (p == 0 || d < best_dist) {
          best_dist = d;
          best = p;
        }
      }
    }
    parts[best].words.push_back(w);
  }
  return parts;
}

}  // namespace

std::vector<ManualCorrection> parse_corrections(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ManifestError, std::string("corrections overlay: ") + e.what());
  }
  if (!j.is_array()) throw Error(ErrorCode::ManifestError, "corrections overlay must be an array");
  std::vector<ManualCorrection> overlay;
  for (const auto& entry : j) {
    ManualCorrection mc;
    mc.table_id = entry.at("table_id").get<std::string>();
    for (const auto& op : entry.at("ops")) {
      if (op.contains("replace_cell")) {
        ReplaceCellOp r;
        r.match = match_from_json(op["replace_cell"].at("match"));
        r.replacement = cell_from_json(op["replace_cell"].at("new"));
        mc.ops.emplace_back(std::move(r));
      } else if (op.contains("set_text")) {
        SetTextOp s;
        s.match = match_from_json(op["set_text"].at("match"));
        s.text = op["set_text"].at("text").get<std::string>();
        mc.ops.emplace_back(std::move(s));
      } else if (op.contains("split_table")) {
        SplitTableOp s;
        for (const auto& b : op["split_table"].at("row_boundaries"))
          s.row_boundaries.push_back(b.get<int>());
        mc.ops.emplace_back(std::move(s));
      } else {
        throw Error(ErrorCode::ManifestError, "unknown correction op for '" + mc.table_id + "'");
      }
    }
    overlay.push_back(std::move(mc));
  }
  return overlay;
}

std::vector<ManualCorrection> load_corrections_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open corrections overlay '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corrections(buf.str());
}

std::vector<TableAnnotation> apply_corrections(std::vector<TableAnnotation> tables,
                                               const std::vector<ManualCorrection>& overlay) {
  for (const ManualCorrection& mc : overlay) {
    std::size_t index = tables.size();
    std::size_t matches = 0;
    for (std::size_t i = 0; i < tables.size(); ++i) {
      if (tables[i].table_id == mc.table_id) {
        index = i;
        ++matches;
      }
    }
    if (matches == 0)
      throw Error(ErrorCode::TargetNotFound, "no table '" + mc.table_id + "' in dataset");
    if (matches > 1)
      throw Error(ErrorCode::TargetNotFound, "table id '" + mc.table_id + "' is ambiguous");

    for (const CorrectionOp& op : mc.ops) {
      TableAnnotation& t = tables[index];
      if (const auto* r = std::get_if<ReplaceCellOp>(&op)) {
        const std::size_t c = find_cell(t, r->match, "replace_cell");
        t.cells[c] = r->replacement;
        revalidate(t, "replace_cell on '" + mc.table_id + "'");
      } else if (const auto* s = std::get_if<SetTextOp>(&op)) {
        const std::size_t c = find_cell(t, s->match, "set_text");
        t.cells[c].text = s->text;
        revalidate(t, "set_text on '" + mc.table_id + "'");
      } else if (const auto* sp = std::get_if<SplitTableOp>(&op)) {
        std::vector<TableAnnotation> parts = split_table(t, *sp);
        for (TableAnnotation& part : parts) revalidate(part, "split_table on '" + mc.table_id + "'");
        tables.erase(tables.begin() + static_cast<long>(index));
        tables.insert(tables.begin() + static_cast<long>(index),
                      std::make_move_iterator(parts.begin()), std::make_move_iterator(parts.end()));
        break;  // the original id is gone; later ops for it would be stale
      }
    }
  }
  return tables;
}

}  // namespace tabalign
