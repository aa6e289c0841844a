#include <doctest.h>

#include <random>

#include <json.hpp>

#include "support/oracles.hpp"
#include "tabalign/errors.hpp"
#include "tabalign/fintabnet.hpp"
#include "tabalign/grid.hpp"
#include "tabalign/synthetic.hpp"

using namespace tabalign;
using nlohmann::json;

namespace {

// Record builder: structure tokens plus per-td metadata.
std::string make_record(const std::vector<std::string>& tokens,
                        const std::vector<std::pair<std::string, std::optional<BBox>>>& cells,
                        std::optional<double> page_height = std::nullopt) {
  json record;
  record["filename"] = "DOC/2013/page_1.pdf";
  record["split"] = "train";
  record["table_id"] = 0;
  if (page_height) record["page_height"] = *page_height;
  record["html"]["structure"]["tokens"] = tokens;
  json cell_list = json::array();
  for (const auto& [text, box] : cells) {
    json cj;
    cj["tokens"] = text.empty() ? json::array() : json::array({text});
    if (box) cj["bbox"] = {box->x_min, box->y_min, box->x_max, box->y_max};
    cell_list.push_back(std::move(cj));
  }
  record["html"]["cells"] = std::move(cell_list);
  return record.dump();
}

const BBox kBox{0, 0, 10, 10};

}  // namespace

TEST_CASE("plain 2x2 token stream") {
  const auto line = make_record(
      {"<tr>", "<td>", "</td>", "<td>", "</td>", "</tr>", "<tr>", "<td>", "</td>", "<td>",
       "</td>", "</tr>"},
      {{"a", kBox}, {"b", kBox}, {"c", kBox}, {"d", kBox}});
  const TableAnnotation t = parse_fintabnet_record(line);
  CHECK(t.n_rows == 2);
  CHECK(t.n_cols == 2);
  CHECK(t.cells.size() == 4);
  CHECK(t.cells[3].text == "d");
  CHECK(t.cells[3].row_start == 1);
  CHECK(t.cells[3].col_start == 1);
  CHECK(t.table_id == "DOC/2013/page_1.pdf#0");
}

TEST_CASE("colspan occupies the full top row") {
  const auto line = make_record(
      {"<tr>", "<td colspan=\"2\">", "</td>", "</tr>", "<tr>", "<td>", "</td>", "<td>", "</td>",
       "</tr>"},
      {{"head", kBox}, {"a", kBox}, {"b", kBox}});
  const TableAnnotation t = parse_fintabnet_record(line);
  CHECK(t.n_cols == 2);
  CHECK(t.cells[0].col_start == 0);
  CHECK(t.cells[0].col_end == 1);
}

TEST_CASE("rowspan shifts the next row's first free position") {
  // Row 0: a cell spanning rows 0-1 in column 0, plus one plain cell.
  // Row 1's single td must land in column 1.
  const auto line = make_record(
      {"<tr>", "<td rowspan=\"2\">", "</td>", "<td>", "</td>", "</tr>", "<tr>", "<td>", "</td>",
       "</tr>"},
      {{"tall", kBox}, {"a", kBox}, {"b", kBox}});
  const TableAnnotation t = parse_fintabnet_record(line);
  CHECK(t.n_rows == 2);
  CHECK(t.n_cols == 2);
  CHECK(t.cells[0].row_end == 1);
  CHECK(t.cells[2].row_start == 1);
  CHECK(t.cells[2].col_start == 1);
}

TEST_CASE("split td token form with attribute tokens") {
  const auto line = make_record(
      {"<tr>", "<td", " colspan=\"2\"", ">", "</td>", "</tr>", "<tr>", "<td>", "</td>", "<td>",
       "</td>", "</tr>"},
      {{"head", kBox}, {"a", kBox}, {"b", kBox}});
  const TableAnnotation t = parse_fintabnet_record(line);
  CHECK(t.cells[0].col_end == 1);
}

TEST_CASE("thead rows become markup header hints") {
  const auto line = make_record(
      {"<thead>", "<tr>", "<td>", "</td>", "<td>", "</td>", "</tr>", "</thead>", "<tbody>",
       "<tr>", "<td>", "</td>", "<td>", "</td>", "</tr>", "</tbody>"},
      {{"h1", kBox}, {"h2", kBox}, {"a", kBox}, {"b", kBox}});
  const TableAnnotation t = parse_fintabnet_record(line);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].is_column_header);
  CHECK_FALSE(t.rows[1].is_column_header);
}

TEST_CASE("unbalanced rows are rejected") {
  const auto line = make_record(
      {"<tr>", "<td>", "</td>", "<td>", "</td>", "</tr>", "<tr>", "<td>", "</td>", "</tr>"},
      {{"a", kBox}, {"b", kBox}, {"c", kBox}});
  CHECK_THROWS_AS(parse_fintabnet_record(line), Error);
  try {
    parse_fintabnet_record(line);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TokenStreamInvalid);
  }
}

TEST_CASE("rowspan past the last row is rejected") {
  const auto line =
      make_record({"<tr>", "<td rowspan=\"3\">", "</td>", "<td>", "</td>", "</tr>", "<tr>",
                   "<td>", "</td>", "</tr>"},
                  {{"tall", kBox}, {"a", kBox}, {"b", kBox}});
  CHECK_THROWS_AS(parse_fintabnet_record(line), Error);
}

TEST_CASE("cell metadata count must match the td count") {
  const auto line = make_record({"<tr>", "<td>", "</td>", "<td>", "</td>", "</tr>"},
                                {{"only", kBox}});
  try {
    parse_fintabnet_record(line);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoxCountMismatch);
  }
}

TEST_CASE("a non-blank cell without a box is rejected") {
  const auto line = make_record({"<tr>", "<td>", "</td>", "</tr>"}, {{"text", std::nullopt}});
  try {
    parse_fintabnet_record(line);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoxCountMismatch);
  }
}

TEST_CASE("blank tds become synthesized blanks, boxed blanks are kept") {
  const auto line = make_record(
      {"<tr>", "<td>", "</td>", "<td>", "</td>", "</tr>"},
      {{"", std::nullopt}, {"", kBox}});
  const TableAnnotation t = parse_fintabnet_record(line);
  CHECK(t.n_cols == 2);
  REQUIRE(t.cells.size() == 1);  // only the boxed blank is stored
  CHECK(t.cells[0].is_blank());
  CHECK(t.cells[0].col_start == 1);
  const TableGrid g = build_grid(t);
  CHECK(g.at(0, 0).is_blank());
}

TEST_CASE("a spacing row with no cells parses as a blank row") {
  const auto line = make_record(
      {"<tr>", "<td>", "</td>", "</tr>", "<tr>", "</tr>", "<tr>", "<td>", "</td>", "</tr>"},
      {{"a", kBox}, {"b", kBox}});
  const TableAnnotation t = parse_fintabnet_record(line);
  CHECK(t.n_rows == 3);
  CHECK(t.n_cols == 1);
  const TableGrid g = build_grid(t);
  CHECK(g.at(1, 0).is_blank());
}

TEST_CASE("page_height flips box coordinates") {
  const auto line =
      make_record({"<tr>", "<td>", "</td>", "</tr>"}, {{"a", BBox{10, 80, 40, 90}}}, 100.0);
  const TableAnnotation t = parse_fintabnet_record(line);
  CHECK(*t.cells[0].box == BBox{10, 10, 40, 20});
}

TEST_CASE("span placement matches the grid round-trip oracle") {
  std::mt19937 rng(314);
  SyntheticOptions options;
  options.max_rows = 6;
  options.max_cols = 6;
  options.with_words = false;
  options.with_row_column_boxes = false;
  for (int i = 0; i < 200; ++i) {
    const TableAnnotation source = make_random_table(rng, options, "src");
    const oracles::TokenizedGrid tokens = oracles::tokenize_grid(source);

    std::vector<std::pair<std::string, std::optional<BBox>>> cells;
    for (const std::string& text : tokens.cell_texts) {
      if (text.empty())
        cells.emplace_back("", std::nullopt);
      else
        cells.emplace_back(text, kBox);
    }
    const TableAnnotation parsed = parse_fintabnet_record(
        make_record(tokens.structure_tokens, cells));

    REQUIRE(parsed.n_rows == source.n_rows);
    REQUIRE(parsed.n_cols == source.n_cols);
    const TableGrid expected = build_grid(source);
    const TableGrid actual = build_grid(parsed);
    for (int r = 0; r < expected.n_rows; ++r) {
      for (int c = 0; c < expected.n_cols; ++c) {
        CHECK(expected.at(r, c).rel == actual.at(r, c).rel);
        CHECK(normalize_text(expected.at(r, c).text) == normalize_text(actual.at(r, c).text));
      }
    }
  }
}
