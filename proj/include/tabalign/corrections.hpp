#pragma once

#include <string>
#include <variant>
#include <vector>

#include "tabalign/model.hpp"

namespace tabalign {

// Grid-extent pattern used to address one cell of a table.
struct CellMatch {
  int row_start = 0;
  int row_end = 0;
  int col_start = 0;
  int col_end = 0;
};

struct ReplaceCellOp {
  CellMatch match;
  Cell replacement;
};

struct SetTextOp {
  CellMatch match;
  std::string text;
};

struct SplitTableOp {
  std::vector<int> row_boundaries;  // ascending, each in (0, n_rows)
};

using CorrectionOp = std::variant<ReplaceCellOp, SetTextOp, SplitTableOp>;

struct ManualCorrection {
  std::string table_id;
  std::vector<CorrectionOp> ops;
};

std::vector<ManualCorrection> load_corrections_file(const std::string& path);
std::vector<ManualCorrection> parse_corrections(std::string_view json_text);

// Applies overlay entries in file order. split_table replaces the target with
// parts suffixed _1, _2, ... Every result is re-validated. Throws
// Error(TargetNotFound) and Error(ResultInvalid).
std::vector<TableAnnotation> apply_corrections(std::vector<TableAnnotation> tables,
                                               const std::vector<ManualCorrection>& overlay);

}  // namespace tabalign
