#pragma once

#include <string>
#include <string_view>

#include "tabalign/model.hpp"

namespace tabalign {

// One JSON-lines record in the financial-report annotation style: an HTML
// structure token stream ("<thead>", "<tr>", "<td>", "<td colspan=\"2\">",
// ...), one cells entry per <td> carrying text tokens and, for non-blank
// cells, a bounding box. Spans are placed at the first free position in
// row-major order. When the record carries "page_height", boxes arrive in
// bottom-left-origin page coordinates and are flipped; otherwise they are
// taken as already top-left. Rows opened inside <thead> become markup header
// hints on the row annotations.
// Throws Error(TokenStreamInvalid) and Error(BoxCountMismatch).
TableAnnotation parse_fintabnet_record(std::string_view json_line,
                                       Split default_split = Split::Train,
                                       const std::string& fallback_id = "");

}  // namespace tabalign
