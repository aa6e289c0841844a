#include <doctest.h>

#include <random>
#include <string>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "tabalign/canonical_json.hpp"
#include "tabalign/errors.hpp"
#include "tabalign/fintabnet.hpp"
#include "tabalign/icdar.hpp"
#include "tabalign/synthetic.hpp"
#include "tabalign/xml.hpp"

using namespace tabalign;

// Parsers must either succeed or throw a typed Error on mangled input; any
// other exception (or a crash) is a bug.

namespace {

std::string mutate(std::string s, std::mt19937& rng) {
  std::uniform_int_distribution<int> op(0, 3);
  std::uniform_int_distribution<int> byte(0, 255);
  if (s.empty()) return s;
  std::uniform_int_distribution<std::size_t> pos(0, s.size() - 1);
  switch (op(rng)) {
    case 0: s[pos(rng)] = static_cast<char>(byte(rng)); break;
    case 1: s.erase(pos(rng), 1); break;
    case 2: s.insert(pos(rng), 1, static_cast<char>(byte(rng))); break;
    case 3: s = s.substr(0, pos(rng)); break;
  }
  return s;
}

}  // namespace

TEST_CASE("xml parser survives mangled documents") {
  const std::string base = R"(<document filename="d.pdf">
 <table id="1"><region id="0" page="1">
  <cell id="a" start-row="0" start-col="0">
   <bounding-box x1="10" y1="80" x2="40" y2="90"/><content>A &amp; B</content></cell>
 </region></table></document>)";
  std::mt19937 rng(81);
  for (int i = 0; i < 2000; ++i) {
    std::string doc = base;
    for (int k = 0; k < 1 + i % 4; ++k) doc = mutate(doc, rng);
    try {
      parse_icdar_xml(doc, {{1, 100.0}});
    } catch (const Error&) {
      // expected for most mutations
    }
  }
}

TEST_CASE("record parser survives mangled json lines") {
  std::mt19937 rng(82);
  SyntheticOptions options;
  options.max_rows = 4;
  options.max_cols = 4;
  options.with_words = false;
  options.with_row_column_boxes = false;
  for (int i = 0; i < 500; ++i) {
    const TableAnnotation source = make_random_table(rng, options, "fuzz");
    const oracles::TokenizedGrid tokens = oracles::tokenize_grid(source);
    std::string record = R"({"filename":"f.pdf","html":{"structure":{"tokens":[)";
    for (std::size_t k = 0; k < tokens.structure_tokens.size(); ++k) {
      if (k) record += ",";
      record += "\"";
      for (char c : tokens.structure_tokens[k]) {
        if (c == '"') record += "\\\"";
        else record += c;
      }
      record += "\"";
    }
    record += R"(]},"cells":[)";
    for (std::size_t k = 0; k < tokens.cell_texts.size(); ++k) {
      if (k) record += ",";
      if (tokens.cell_texts[k].empty())
        record += R"({"tokens":[]})";
      else
        record += R"({"tokens":[")" + tokens.cell_texts[k] + R"("],"bbox":[0,0,5,5]})";
    }
    record += "]}}";
    for (int k = 0; k < 1 + i % 5; ++k) record = mutate(record, rng);
    try {
      parse_fintabnet_record(record);
    } catch (const Error&) {
    }
  }
}

TEST_CASE("canonical reader survives mangled lines") {
  std::mt19937 rng(83);
  const std::string base = table_to_canonical_line(fixtures::clean_table(3, 3, "fz"));
  for (int i = 0; i < 2000; ++i) {
    std::string line = base;
    for (int k = 0; k < 1 + i % 4; ++k) line = mutate(line, rng);
    try {
      table_from_canonical_line(line);
    } catch (const Error&) {
    }
  }
}
