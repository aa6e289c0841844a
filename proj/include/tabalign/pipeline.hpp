#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tabalign/corrections.hpp"
#include "tabalign/model.hpp"
#include "tabalign/options.hpp"
#include "tabalign/stats.hpp"

namespace tabalign {

// Processing stages. Ablation at stage k applies stages a1..ak; when a5 is
// enabled its header inference runs before a4's canonicalization.
enum class StageId {
  A1_Completion,
  A2_BoxAdjust,
  A3_Consistency,
  A4_Canonicalize,
  A5_TwoColHeader,
  A6_QualityControl,
};

enum class PipelineMode { Fintabnet, Icdar };

enum class RemovalReason {
  UndefinedExtent,
  InvertedOrder,
  AmbiguousWord,
  NoConvergence,
  LeaderAmbiguity,
  AllEmpty,
  CurrencySplitColumn,
  TwoColumnAmbiguous,
  WordCellCoincidence,
  CaptionAsRow,
  FooterAsRow,
  HeaderOnly,
};

enum class ChangeCode {
  RowColumnBoxesCompleted,
  BoxesRefined,
  DotLeadersStripped,
  EmptyRowsRemoved,
  EmptyColumnsRemoved,
  HeaderRowsMerged,
  HeadersInferred,
  TwoColumnHeaderInferred,
  CanonicalCellsMerged,
  ManuallyCorrected,
};

enum class FlagCode { HeaderUndetermined };

const char* removal_reason_name(RemovalReason reason);
const char* change_code_name(ChangeCode code);
const char* flag_code_name(FlagCode code);

// Structural changes flip a kept table's outcome to "modified"; bookkeeping
// changes (box completion, refinement, header flags) do not.
bool is_structural_change(ChangeCode code);

// Result of one per-table transform. A removal carries exactly one reason.
struct StepResult {
  std::optional<RemovalReason> removal;
  std::vector<ChangeCode> changes;
  std::vector<FlagCode> flags;

  bool removed() const { return removal.has_value(); }
};

// -- Individual pipeline operations (pure per-table transforms). ------------

// a1: derive row and column boxes from cell-box evidence; rows and columns
// tile the table with shared mid-gap boundaries.
StepResult complete_rows_columns(TableAnnotation& t, const PipelineOptions& options);

// a2: iterate word slotting against grid cells, shrinking row/column text
// extents to their word unions and re-centering shared boundaries.
StepResult refine_boxes(TableAnnotation& t, const PipelineOptions& options);

// a3 steps.
StepResult strip_dot_leaders(TableAnnotation& t, const PipelineOptions& options);
StepResult remove_empty_rows_columns(TableAnnotation& t);
StepResult merge_adjacent_header_rows(TableAnnotation& t);
StepResult detect_currency_column_removal(TableAnnotation& t, const PipelineOptions& options);

// a4: structural header inference (skipped for two-column tables) and
// canonicalization merges R1-R3.
StepResult infer_headers(TableAnnotation& t, bool trust_existing_two_col_header);
StepResult canonicalize(TableAnnotation& t);

// a5: text-based first-row header test for two-column tables.
StepResult infer_two_column_header(TableAnnotation& t, const PipelineOptions& options);

// a6.
StepResult quality_control(const TableAnnotation& t, const PipelineOptions& options);

// -- Corpus driver. ----------------------------------------------------------

// A would-be removal (ICDAR mode) or an informational marker, with the stage
// label it was raised under.
struct StageFlag {
  std::string stage;
  std::string code;  // removal-reason or flag-code name

  bool operator==(const StageFlag&) const = default;
};

struct TableOutcome {
  std::string table_id;
  bool kept = true;
  std::optional<RemovalReason> removal_reason;
  std::string removal_stage;
  std::vector<ChangeCode> changes;
  std::vector<StageFlag> flags;

  bool modified() const;
};

struct StageSummary {
  std::string stage;  // "a1".."a6" in execution order
  std::string name;   // processing-step name
  std::map<std::string, int> removed_by_reason;
  std::map<std::string, int> flagged_by_reason;
};

struct PipelineReport {
  std::string dataset;
  PipelineMode mode = PipelineMode::Fintabnet;
  std::string target_stage;
  std::size_t input_count = 0;
  std::size_t output_count = 0;
  std::size_t kept_count = 0;
  std::size_t removed_count = 0;
  std::size_t modified_count = 0;
  std::vector<StageSummary> stages;
  std::map<std::string, int> removed_by_reason;
  std::map<std::string, int> modified_by_change;  // structural and bookkeeping codes
  std::vector<TableOutcome> outcomes;             // sorted by table_id
  std::optional<DatasetStats> stats_before;
  std::optional<DatasetStats> stats_after;
};

struct PipelineResult {
  std::vector<TableAnnotation> tables;  // input order (split parts in place)
  PipelineReport report;
};

std::vector<std::string> stages_for_mode(PipelineMode mode);
std::string stage_display_name(PipelineMode mode, const std::string& stage);

// Runs stages a1..target in execution order. Fintabnet mode removes tables;
// ICDAR mode never removes: a failed step leaves the table at its pre-step
// state and records a flag (a failed a1 stops further processing of that
// table). ICDAR's a2 applies the manual-correction overlay; its a3 bundles
// the a2-a4 automated steps. threads <= 1 is the serial reference path.
PipelineResult run_pipeline(std::vector<TableAnnotation> tables, PipelineMode mode,
                            const std::string& target_stage, const PipelineOptions& options,
                            int threads = 1,
                            const std::vector<ManualCorrection>* overlay = nullptr,
                            const std::string& dataset_name = "dataset");

std::string pipeline_report_text(const PipelineReport& report);
std::string pipeline_report_json(const PipelineReport& report);

}  // namespace tabalign
