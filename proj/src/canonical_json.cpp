#include "tabalign/canonical_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tabalign/errors.hpp"

namespace tabalign {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json box_to_json(const BBox& b) {
  return ordered_json::array({b.x_min, b.y_min, b.x_max, b.y_max});
}

BBox box_from_json(const ordered_json& j) {
  if (!j.is_array() || j.size() != 4)
    throw Error(ErrorCode::ValidationFailure, "bbox must be an array of four numbers");
  return BBox{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

}  // namespace

std::string table_to_canonical_line(const TableAnnotation& t) {
  ordered_json j;
  j["schema_version"] = kCanonicalSchemaVersion;
  j["table_id"] = t.table_id;
  j["split"] = split_name(t.split);
  j["n_rows"] = t.n_rows;
  j["n_cols"] = t.n_cols;
  j["stage"] = t.stage;
  j["provenance"] = {{"dataset", t.provenance.dataset}, {"document", t.provenance.document}};

  ordered_json cells = ordered_json::array();
  for (const Cell& c : t.cells) {
    ordered_json cj;
    cj["row_start"] = c.row_start;
    cj["row_end"] = c.row_end;
    cj["col_start"] = c.col_start;
    cj["col_end"] = c.col_end;
    cj["bbox"] = c.box ? box_to_json(*c.box) : ordered_json(nullptr);
    cj["text"] = c.text;
    cj["is_column_header"] = c.is_column_header;
    cj["is_projected_row_header"] = c.is_projected_row_header;
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);

  ordered_json rows = ordered_json::array();
  for (const RowAnnotation& r : t.rows) {
    ordered_json rj;
    rj["bbox"] = r.box ? box_to_json(*r.box) : ordered_json(nullptr);
    rj["is_column_header"] = r.is_column_header;
    rows.push_back(std::move(rj));
  }
  j["rows"] = std::move(rows);

  ordered_json columns = ordered_json::array();
  for (const ColumnAnnotation& c : t.columns) {
    ordered_json cj;
    cj["bbox"] = c.box ? box_to_json(*c.box) : ordered_json(nullptr);
    columns.push_back(std::move(cj));
  }
  j["columns"] = std::move(columns);

  ordered_json words = ordered_json::array();
  for (const Word& w : t.words) {
    ordered_json wj;
    wj["text"] = w.text;
    wj["bbox"] = box_to_json(w.box);
    words.push_back(std::move(wj));
  }
  j["words"] = std::move(words);

  return j.dump();
}

TableAnnotation table_from_canonical_line(std::string_view line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ValidationFailure, std::string("invalid JSON: ") + e.what());
  }
  if (!j.contains("schema_version") || !j["schema_version"].is_string())
    throw Error(ErrorCode::SchemaVersionMismatch, "missing schema_version");
  if (j["schema_version"].get<std::string>() != kCanonicalSchemaVersion)
    throw Error(ErrorCode::SchemaVersionMismatch,
                "unsupported schema_version '" + j["schema_version"].get<std::string>() + "'");

  TableAnnotation t;
  try {
    t.table_id = j.at("table_id").get<std::string>();
    t.split = split_from_name(j.at("split").get<std::string>());
    t.n_rows = j.at("n_rows").get<int>();
    t.n_cols = j.at("n_cols").get<int>();
    t.stage = j.value("stage", std::string());
    if (j.contains("provenance")) {
      t.provenance.dataset = j["provenance"].value("dataset", std::string());
      t.provenance.document = j["provenance"].value("document", std::string());
    }
    for (const auto& cj : j.at("cells")) {
      Cell c;
      c.row_start = cj.at("row_start").get<int>();
      c.row_end = cj.at("row_end").get<int>();
      c.col_start = cj.at("col_start").get<int>();
      c.col_end = cj.at("col_end").get<int>();
      if (cj.contains("bbox") && !cj["bbox"].is_null()) c.box = box_from_json(cj["bbox"]);
      c.text = cj.value("text", std::string());
      c.is_column_header = cj.value("is_column_header", false);
      c.is_projected_row_header = cj.value("is_projected_row_header", false);
      t.cells.push_back(std::move(c));
    }
    if (j.contains("rows")) {
      for (const auto& rj : j["rows"]) {
        RowAnnotation r;
        if (rj.contains("bbox") && !rj["bbox"].is_null()) r.box = box_from_json(rj["bbox"]);
        r.is_column_header = rj.value("is_column_header", false);
        t.rows.push_back(r);
      }
    }
    if (j.contains("columns")) {
      for (const auto& cj : j["columns"]) {
        ColumnAnnotation c;
        if (cj.contains("bbox") && !cj["bbox"].is_null()) c.box = box_from_json(cj["bbox"]);
        t.columns.push_back(c);
      }
    }
    if (j.contains("words")) {
      for (const auto& wj : j["words"]) {
        Word w;
        w.text = wj.at("text").get<std::string>();
        w.box = box_from_json(wj.at("bbox"));
        t.words.push_back(std::move(w));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ValidationFailure, std::string("bad canonical record: ") + e.what());
  }
  validate(t);
  return t;
}

void write_canonical(std::ostream& out, std::span<const TableAnnotation> tables) {
  for (const TableAnnotation& t : tables) out << table_to_canonical_line(t) << '\n';
}

void write_canonical_file(const std::string& path, std::span<const TableAnnotation> tables) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  write_canonical(out, tables);
  if (!out) throw Error(ErrorCode::IoError, "failed while writing '" + path + "'");
}

std::vector<TableAnnotation> read_canonical(std::istream& in) {
  std::vector<TableAnnotation> tables;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      tables.push_back(table_from_canonical_line(line));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return tables;
}

std::vector<TableAnnotation> read_canonical_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return read_canonical(in);
}

CanonicalReadResult read_canonical_tolerant(std::istream& in) {
  CanonicalReadResult result;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      result.tables.push_back(table_from_canonical_line(line));
    } catch (const Error& e) {
      result.failures.push_back(CanonicalReadFailure{line_number, e.what()});
    }
  }
  return result;
}

}  // namespace tabalign
