#pragma once

#include <string>
#include <vector>

namespace tabalign {

// Tunable thresholds of the alignment pipeline. Defaults follow the
// processing rules; every field can be set from a key=value options file or
// a CLI flag.
struct PipelineOptions {
  int dot_leader_min_dots = 3;          // minimum dots in an edge run to strip
  double word_overlap_threshold = 0.5;  // ambiguity threshold, inclusive
  int refine_iteration_cap = 10;
  std::vector<std::string> currency_glyphs = {"$", "¢", "£", "€"};
  double qc_coverage_threshold = 0.5;        // required single-cell coverage, exclusive
  double numeric_majority_threshold = 0.5;   // body majority for two-column headers
};

// key=value lines; '#' starts a comment. Unknown keys are an error.
PipelineOptions load_options_file(const std::string& path);
void apply_option(PipelineOptions& options, const std::string& key, const std::string& value);

}  // namespace tabalign
