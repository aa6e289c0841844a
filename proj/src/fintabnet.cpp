#include "tabalign/fintabnet.hpp"

#include <algorithm>
#include <optional>
#include <vector>

#include <json.hpp>

#include "tabalign/errors.hpp"

namespace tabalign {

namespace {

using nlohmann::json;

struct TdToken {
  int rowspan = 1;
  int colspan = 1;
  bool in_header = false;
  int row = -1;  // row index at placement time
};

int parse_span_attr(const std::string& token, std::string_view attr) {
  const std::size_t at = token.find(attr);
  if (at == std::string::npos) return 1;
  std::size_t i = token.find('"', at);
  if (i == std::string::npos) return 1;
  ++i;
  const std::size_t end = token.find('"', i);
  if (end == std::string::npos) return 1;
  try {
    const int v = std::stoi(token.substr(i, end - i));
    return v >= 1 ? v : 1;
  } catch (...) {
    return 1;
  }
}

bool is_format_tag(const std::string& tok) {
  static const char* kTags[] = {"<b>", "</b>", "<i>", "</i>", "<sup>", "</sup>",
                                "<sub>", "</sub>", "<u>", "</u>", "<overline>", "</overline>"};
  return std::find(std::begin(kTags), std::end(kTags), tok) != std::end(kTags);
}

std::string join_cell_tokens(const json& tokens) {
  std::string text;
  for (const auto& tok : tokens) {
    const std::string s = tok.get<std::string>();
    if (is_format_tag(s)) continue;
    if (!text.empty()) text.push_back(' ');
    text += s;
  }
  return normalize_text(text);
}

[[noreturn]] void invalid(const std::string& id, const std::string& what) {
  throw Error(ErrorCode::TokenStreamInvalid, "record '" + id + "': " + what);
}

}  // namespace

namespace {
TableAnnotation parse_fintabnet_record_impl(const json& record, Split default_split,
                                            const std::string& fallback_id);
}

TableAnnotation parse_fintabnet_record(std::string_view json_line, Split default_split,
                                       const std::string& fallback_id) {
  json record;
  try {
    record = json::parse(json_line);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::TokenStreamInvalid, "record is not valid JSON: " + std::string(e.what()));
  }
  try {
    return parse_fintabnet_record_impl(record, default_split, fallback_id);
  } catch (const json::exception& e) {
    // Wrong field types or missing keys surface as one malformed-record error.
    throw Error(ErrorCode::TokenStreamInvalid, "record '" + fallback_id + "': " + e.what());
  }
}

namespace {

TableAnnotation parse_fintabnet_record_impl(const json& record, Split default_split,
                                            const std::string& fallback_id) {
  const std::string filename = record.value("filename", std::string("unknown"));
  std::string table_id;
  if (record.contains("table_id")) {
    const auto& tid = record["table_id"];
    table_id = filename + "#" + (tid.is_string() ? tid.get<std::string>()
                                                 : std::to_string(tid.get<long long>()));
  } else {
    table_id = fallback_id.empty() ? filename : fallback_id;
  }

  Split split = default_split;
  if (record.contains("split")) split = split_from_name(record["split"].get<std::string>());

  if (!record.contains("html") || !record["html"].contains("structure") ||
      !record["html"]["structure"].contains("tokens"))
    invalid(table_id, "missing html.structure.tokens");
  const json& tokens = record["html"]["structure"]["tokens"];

  // Walk the token stream, expanding td tokens against a growing occupancy
  // grid; spans claim the first free position of the current row.
  std::vector<TdToken> tds;
  std::vector<std::vector<int>> occupancy;  // -1 free, else td index
  std::vector<bool> header_rows;
  bool in_thead = false;
  bool in_row = false;
  int current_row = -1;
  std::optional<TdToken> pending;  // a split "<td" awaiting its ">"

  auto ensure_row_width = [&](int row, int width) {
    auto& r = occupancy[row];
    if (static_cast<int>(r.size()) < width) r.resize(width, -1);
  };

  auto place_td = [&](TdToken td) {
    if (!in_row) invalid(table_id, "<td> outside of a row");
    td.row = current_row;
    int col = 0;
    auto& row = occupancy[current_row];
    while (true) {
      ensure_row_width(current_row, col + 1);
      if (row[col] < 0) break;
      ++col;
    }
    const int id = static_cast<int>(tds.size());
    for (int r = current_row; r < current_row + td.rowspan; ++r) {
      if (r >= static_cast<int>(occupancy.size())) {
        occupancy.emplace_back();
        header_rows.push_back(false);
      }
      ensure_row_width(r, col + td.colspan);
      for (int c = col; c < col + td.colspan; ++c) {
        if (occupancy[r][c] >= 0) invalid(table_id, "span collision at row " + std::to_string(r));
        occupancy[r][c] = id;
      }
    }
    tds.push_back(td);
  };

  for (const auto& tok_json : tokens) {
    const std::string tok = tok_json.get<std::string>();
    if (pending) {
      // Attribute tokens of a split "<td" ... ">" sequence.
      if (tok == ">") {
        TdToken td = *pending;
        pending.reset();
        place_td(td);
      } else {
        pending->rowspan = std::max(pending->rowspan, parse_span_attr(tok, "rowspan="));
        pending->colspan = std::max(pending->colspan, parse_span_attr(tok, "colspan="));
      }
      continue;
    }
    if (tok == "<thead>") {
      in_thead = true;
    } else if (tok == "</thead>") {
      in_thead = false;
    } else if (tok == "<tbody>" || tok == "</tbody>") {
      // section markers only
    } else if (tok == "<tr>") {
      if (in_row) invalid(table_id, "nested <tr>");
      in_row = true;
      ++current_row;
      if (current_row >= static_cast<int>(occupancy.size())) {
        occupancy.emplace_back();
        header_rows.push_back(false);
      }
      if (in_thead) header_rows[current_row] = true;
    } else if (tok == "</tr>") {
      if (!in_row) invalid(table_id, "</tr> without <tr>");
      in_row = false;
    } else if (tok == "</td>") {
      // closing marker; nothing to do
    } else if (tok == "<td>" || tok == "<td" || tok.rfind("<td ", 0) == 0) {
      TdToken td;
      td.rowspan = parse_span_attr(tok, "rowspan=");
      td.colspan = parse_span_attr(tok, "colspan=");
      td.in_header = in_thead;
      if (tok.back() == '>')
        place_td(td);
      else
        pending = td;
    }
    // Other tokens are ignored.
  }
  if (in_row) invalid(table_id, "unterminated row");
  if (pending) invalid(table_id, "unterminated <td");
  if (occupancy.empty() || tds.empty()) invalid(table_id, "no rows or cells");
  if (static_cast<int>(occupancy.size()) > current_row + 1)
    invalid(table_id, "rowspan extends beyond the last row");

  const int n_rows = static_cast<int>(occupancy.size());
  int n_cols = 0;
  for (const auto& row : occupancy) {
    int width = static_cast<int>(row.size());
    while (width > 0 && row[width - 1] < 0) --width;
    n_cols = std::max(n_cols, width);
  }
  if (n_cols == 0) invalid(table_id, "no columns");
  for (int r = 0; r < n_rows; ++r) {
    int width = static_cast<int>(occupancy[r].size());
    while (width > 0 && occupancy[r][width - 1] < 0) --width;
    if (width == 0) continue;  // spacing row with no cells; grid synthesizes blanks
    if (width != n_cols) invalid(table_id, "unbalanced rows: row " + std::to_string(r) + " has " +
                                               std::to_string(width) + " of " +
                                               std::to_string(n_cols) + " columns");
    for (int c = 0; c < width; ++c)
      if (occupancy[r][c] < 0)
        invalid(table_id, "hole at (" + std::to_string(r) + "," + std::to_string(c) + ")");
  }

  // Cell metadata: one entry per td, aligned by order.
  if (!record["html"].contains("cells"))
    throw Error(ErrorCode::BoxCountMismatch, "record '" + table_id + "' has no html.cells");
  const json& cell_meta = record["html"]["cells"];
  if (cell_meta.size() != tds.size())
    throw Error(ErrorCode::BoxCountMismatch,
                "record '" + table_id + "': " + std::to_string(cell_meta.size()) +
                    " cell entries for " + std::to_string(tds.size()) + " <td> tokens");

  const std::optional<double> page_height =
      record.contains("page_height") ? std::optional<double>(record["page_height"].get<double>())
                                     : std::nullopt;
  auto read_box = [&](const json& arr) {
    BBox b{arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>(), arr[3].get<double>()};
    if (b.x_min > b.x_max) std::swap(b.x_min, b.x_max);
    if (b.y_min > b.y_max) std::swap(b.y_min, b.y_max);
    return page_height ? flip_y(b, *page_height) : b;
  };

  TableAnnotation t;
  t.table_id = table_id;
  t.split = split;
  t.n_rows = n_rows;
  t.n_cols = n_cols;
  t.provenance = Provenance{"fintabnet", filename};
  t.stage = "raw";

  // td index -> grid extent from the occupancy map.
  std::vector<Cell> cells(tds.size());
  std::vector<bool> seen(tds.size(), false);
  for (int r = 0; r < n_rows; ++r) {
    for (int c = 0; c < n_cols && c < static_cast<int>(occupancy[r].size()); ++c) {
      const int id = occupancy[r][c];
      if (id < 0) continue;
      Cell& cell = cells[id];
      if (!seen[id]) {
        seen[id] = true;
        cell.row_start = cell.row_end = r;
        cell.col_start = cell.col_end = c;
      } else {
        cell.row_end = std::max(cell.row_end, r);
        cell.col_end = std::max(cell.col_end, c);
      }
    }
  }
  for (std::size_t i = 0; i < tds.size(); ++i) {
    const json& meta = cell_meta[i];
    if (meta.contains("tokens")) cells[i].text = join_cell_tokens(meta["tokens"]);
    if (meta.contains("bbox") && !meta["bbox"].is_null()) cells[i].box = read_box(meta["bbox"]);
    if (!cells[i].is_blank() && !cells[i].box)
      throw Error(ErrorCode::BoxCountMismatch, "record '" + table_id + "': non-blank cell " +
                                                   std::to_string(i) + " has no bounding box");
    // Boxless blanks are synthesized from the grid; only boxed blanks are kept.
    if (cells[i].is_blank() && !cells[i].box) continue;
    t.cells.push_back(cells[i]);
  }

  t.rows.resize(n_rows);
  for (int r = 0; r < n_rows; ++r) t.rows[r].is_column_header = header_rows[r];
  t.columns.resize(n_cols);

  if (record.contains("words")) {
    for (const auto& w : record["words"]) {
      Word word;
      word.text = w["text"].get<std::string>();
      word.box = read_box(w["bbox"]);
      t.words.push_back(std::move(word));
    }
  }

  validate(t);
  return t;
}

}  // namespace

}  // namespace tabalign
