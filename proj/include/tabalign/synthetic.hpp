#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tabalign/model.hpp"

namespace tabalign {

// Synthetic-table knobs. Geometry stays on a quarter-point lattice so the
// pipeline's mid-gap arithmetic and coordinate flips are exact in doubles.
struct SyntheticOptions {
  int max_rows = 6;
  int max_cols = 6;
  double span_probability = 0.25;   // chance a free position starts a span
  double blank_probability = 0.12;  // chance a cell is blank
  bool with_words = true;
  bool with_row_column_boxes = true;
  int max_text_length = 3;  // characters per word, small alphabet
};

// Deterministic for a given engine state; all outputs satisfy the annotation
// invariants.
TableAnnotation make_random_table(std::mt19937& rng, const SyntheticOptions& options = {},
                                  const std::string& table_id = "synthetic");

std::vector<TableAnnotation> make_random_corpus(std::uint32_t seed, std::size_t count,
                                                const SyntheticOptions& options = {});

}  // namespace tabalign
