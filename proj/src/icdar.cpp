#include "tabalign/icdar.hpp"

#include <algorithm>

#include "tabalign/errors.hpp"
#include "tabalign/xml.hpp"

namespace tabalign {

namespace {

double attr_double(const XmlNode& node, std::string_view key, const std::string& context) {
  const auto v = node.attribute(key);
  if (!v) throw Error(ErrorCode::MissingIndex, context + " lacks attribute '" + std::string(key) + "'");
  try {
    return std::stod(*v);
  } catch (...) {
    throw Error(ErrorCode::MalformedXml, context + " attribute '" + std::string(key) + "' is not a number");
  }
}

int attr_int(const XmlNode& node, std::string_view key, const std::string& context) {
  const auto v = node.attribute(key);
  if (!v) throw Error(ErrorCode::MissingIndex, context + " lacks attribute '" + std::string(key) + "'");
  try {
    return std::stoi(*v);
  } catch (...) {
    throw Error(ErrorCode::MalformedXml, context + " attribute '" + std::string(key) + "' is not an integer");
  }
}

std::string stem_of(const std::string& filename) {
  std::string stem = filename;
  const std::size_t slash = stem.find_last_of('/');
  if (slash != std::string::npos) stem = stem.substr(slash + 1);
  const std::size_t dot = stem.find_last_of('.');
  if (dot != std::string::npos) stem = stem.substr(0, dot);
  return stem;
}

TableAnnotation parse_region(const XmlNode& region, const std::string& table_id,
                             const std::string& document, Split split,
                             const std::map<int, double>& page_heights) {
  const int page = attr_int(region, "page", "region '" + table_id + "'");
  const auto height_it = page_heights.find(page);
  if (height_it == page_heights.end())
    throw Error(ErrorCode::MissingIndex,
                "no page height for page " + std::to_string(page) + " of '" + table_id + "'");
  const double page_height = height_it->second;

  TableAnnotation t;
  t.table_id = table_id;
  t.split = split;
  t.provenance = Provenance{"icdar", document};
  t.stage = "raw";

  int max_row = -1, max_col = -1;
  for (const XmlNode* cell_node : region.children_named("cell")) {
    const std::string context = "cell in '" + table_id + "'";
    Cell cell;
    cell.row_start = attr_int(*cell_node, "start-row", context);
    cell.col_start = attr_int(*cell_node, "start-col", context);
    cell.row_end = cell_node->attribute("end-row") ? attr_int(*cell_node, "end-row", context)
                                                   : cell.row_start;
    cell.col_end = cell_node->attribute("end-col") ? attr_int(*cell_node, "end-col", context)
                                                   : cell.col_start;
    if (cell.row_start < 0 || cell.col_start < 0 || cell.row_end < cell.row_start ||
        cell.col_end < cell.col_start)
      throw Error(ErrorCode::MissingIndex, context + " has inconsistent grid coordinates");

    if (const XmlNode* bb = cell_node->first_child("bounding-box")) {
      BBox raw{attr_double(*bb, "x1", context), attr_double(*bb, "y1", context),
               attr_double(*bb, "x2", context), attr_double(*bb, "y2", context)};
      if (raw.x_min > raw.x_max) std::swap(raw.x_min, raw.x_max);
      if (raw.y_min > raw.y_max) std::swap(raw.y_min, raw.y_max);
      cell.box = flip_y(raw, page_height);
    }
    if (const XmlNode* content = cell_node->first_child("content")) cell.text = content->text;
    if (cell.is_blank() && !cell.box) continue;  // nothing to keep; grid synthesizes blanks
    max_row = std::max(max_row, cell.row_end);
    max_col = std::max(max_col, cell.col_end);
    t.cells.push_back(std::move(cell));
  }
  if (t.cells.empty())
    throw Error(ErrorCode::MissingIndex, "region '" + table_id + "' has no usable cells");
  t.n_rows = max_row + 1;
  t.n_cols = max_col + 1;
  validate(t);
  return t;
}

}  // namespace

IcdarParseResult parse_icdar_xml(std::string_view xml, const std::map<int, double>& page_heights,
                                 const std::map<std::string, std::vector<Word>>* words,
                                 Split split, const std::string& document_name) {
  const XmlNode root = parse_xml(xml);
  if (root.name != "document")
    throw Error(ErrorCode::MalformedXml, "expected <document> root, got <" + root.name + ">");
  std::string document = document_name;
  if (document.empty()) document = root.attribute("filename").value_or("document");

  IcdarParseResult result;
  for (const XmlNode* table_node : root.children_named("table")) {
    const std::string table_attr = table_node->attribute("id").value_or("0");
    const auto regions = table_node->children_named("region");
    for (std::size_t k = 0; k < regions.size(); ++k) {
      const std::string region_attr = regions[k]->attribute("id").value_or(std::to_string(k));
      const std::string table_id = stem_of(document) + "_t" + table_attr + "_r" + region_attr;
      try {
        TableAnnotation t = parse_region(*regions[k], table_id, document, split, page_heights);
        if (words) {
          const auto it = words->find(table_id);
          if (it != words->end()) t.words = it->second;
        }
        result.tables.push_back(std::move(t));
      } catch (const Error& e) {
        // Per-region failures leave the rest of the document readable.
        if (e.code() == ErrorCode::MalformedXml) throw;
        result.unreadable.push_back(UnreadableTable{table_id, e.what()});
      }
    }
  }
  return result;
}

}  // namespace tabalign
