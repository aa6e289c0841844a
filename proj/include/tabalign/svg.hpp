#pragma once

#include <set>
#include <string>

#include "tabalign/model.hpp"

namespace tabalign {

// Overlay layers: rows, columns, cells, words, header, projected. Columns are
// shaded with a cyclic palette; all coordinates are formatted to two decimals
// so equal inputs produce byte-identical files.
// Throws Error(UnknownLayer) for anything else.
std::string render_table_svg(const TableAnnotation& table, const std::set<std::string>& layers);

}  // namespace tabalign
