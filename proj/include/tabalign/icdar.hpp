#pragma once

#include <map>
#include <string>
#include <vector>

#include "tabalign/model.hpp"

namespace tabalign {

struct UnreadableTable {
  std::string table_ref;  // document/table/region identifier
  std::string reason;
};

struct IcdarParseResult {
  std::vector<TableAnnotation> tables;
  std::vector<UnreadableTable> unreadable;
};

// Competition-format structure XML: document > table > region > cell, with
// start/end row/column attributes, a bounding-box child in bottom-left-origin
// page coordinates, and a content child. One TableAnnotation per region;
// boxes are flipped to the top-left frame using page_heights (page number ->
// height). Regions whose cells lack grid coordinates or whose page height is
// unknown are reported as unreadable rather than failing the document.
// Throws Error(MalformedXml) when the document itself cannot be parsed.
IcdarParseResult parse_icdar_xml(std::string_view xml, const std::map<int, double>& page_heights,
                                 const std::map<std::string, std::vector<Word>>* words = nullptr,
                                 Split split = Split::Test, const std::string& document_name = "");

}  // namespace tabalign
