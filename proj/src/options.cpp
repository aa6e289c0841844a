#include "tabalign/options.hpp"

#include <fstream>

#include "tabalign/errors.hpp"

namespace tabalign {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

void apply_option(PipelineOptions& options, const std::string& key, const std::string& value) {
  try {
    if (key == "dot_leader_min_dots") {
      options.dot_leader_min_dots = std::stoi(value);
    } else if (key == "word_overlap_threshold") {
      options.word_overlap_threshold = std::stod(value);
    } else if (key == "refine_iteration_cap") {
      options.refine_iteration_cap = std::stoi(value);
    } else if (key == "qc_coverage_threshold") {
      options.qc_coverage_threshold = std::stod(value);
    } else if (key == "numeric_majority_threshold") {
      options.numeric_majority_threshold = std::stod(value);
    } else if (key == "currency_glyphs") {
      options.currency_glyphs.clear();
      std::string glyph;
      for (char c : value) {
        if (c == ',') {
          if (!glyph.empty()) options.currency_glyphs.push_back(glyph);
          glyph.clear();
        } else {
          glyph.push_back(c);
        }
      }
      if (!glyph.empty()) options.currency_glyphs.push_back(glyph);
    } else {
      throw Error(ErrorCode::OptionsError, "unknown option '" + key + "'");
    }
  } catch (const Error&) {
    throw;
  } catch (...) {
    throw Error(ErrorCode::OptionsError, "bad value '" + value + "' for option '" + key + "'");
  }
}

PipelineOptions load_options_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open options file '" + path + "'");
  PipelineOptions options;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::OptionsError,
                  path + ":" + std::to_string(line_number) + ": expected key=value");
    apply_option(options, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return options;
}

}  // namespace tabalign
