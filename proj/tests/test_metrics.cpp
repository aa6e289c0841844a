#include <doctest.h>

#include <cmath>
#include <random>

#include "support/fixtures.hpp"
#include "tabalign/errors.hpp"
#include "tabalign/metrics.hpp"
#include "tabalign/synthetic.hpp"

using namespace tabalign;

namespace {

TableGrid grid_of(const TableAnnotation& t) { return build_grid(t); }

// 2x2 fixture [A,B;C,D] with optional overrides.
TableAnnotation two_by_two(const std::string& d = "D") {
  TableAnnotation t = fixtures::make_table(2, 2, "m");
  fixtures::add_cell(t, 0, 0, 0, 0, "A");
  fixtures::add_cell(t, 0, 0, 1, 1, "B");
  fixtures::add_cell(t, 1, 1, 0, 0, "C");
  fixtures::add_cell(t, 1, 1, 1, 1, d);
  return t;
}

}  // namespace

TEST_CASE("lcs similarity") {
  CHECK(lcs_similarity("12", "13") == 0.5);
  CHECK(lcs_similarity("", "") == 1.0);
  CHECK(lcs_similarity("", "abc") == 0.0);
  CHECK(lcs_similarity("abc", "abc") == 1.0);
  CHECK(lcs_similarity("abcd", "acbd") == 2.0 * 3 / 8);
}

TEST_CASE("entry similarity per kind") {
  GridEntry a{std::size_t{0}, "12", BBox{0, 0, 10, 10}, RelExtent{0, 0, 0, 0}};
  GridEntry b{std::size_t{0}, "13", BBox{0, 0, 10, 10}, RelExtent{0, 0, 0, 0}};
  CHECK(entry_similarity(SimilarityKind::Content, a, a) == 1.0);
  CHECK(entry_similarity(SimilarityKind::Content, a, b) == 0.5);
  CHECK(entry_similarity(SimilarityKind::Location, a, b) == 1.0);

  GridEntry boxless_blank{std::nullopt, "", std::nullopt, RelExtent{0, 0, 0, 0}};
  CHECK(entry_similarity(SimilarityKind::Location, boxless_blank, boxless_blank) == 1.0);
  CHECK(entry_similarity(SimilarityKind::Location, a, boxless_blank) == 0.0);
  CHECK(entry_similarity(SimilarityKind::Content, boxless_blank, boxless_blank) == 1.0);

  // Simple cell vs. a two-column span at offset 0: areas 1 and 2, overlap 1.
  GridEntry wide{std::size_t{0}, "x", std::nullopt, RelExtent{0, 0, 0, 1}};
  GridEntry simple{std::size_t{0}, "x", std::nullopt, RelExtent{0, 0, 0, 0}};
  CHECK(entry_similarity(SimilarityKind::Topology, simple, wide) == 0.5);
  CHECK(entry_similarity(SimilarityKind::Topology, wide, wide) == 1.0);
}

TEST_CASE("grits equals one on identical grids") {
  const TableAnnotation t = two_by_two();
  for (SimilarityKind kind :
       {SimilarityKind::Content, SimilarityKind::Location, SimilarityKind::Topology})
    CHECK(grits(kind, grid_of(t), grid_of(t)) == 1.0);
}

TEST_CASE("grits content on the one-character-off grid is exactly 0.875") {
  const TableAnnotation gt = two_by_two("12");
  const TableAnnotation pred = two_by_two("13");
  CHECK(grits(SimilarityKind::Content, grid_of(gt), grid_of(pred)) ==
        doctest::Approx(0.875).epsilon(1e-12));
  CHECK(grits_exact(SimilarityKind::Content, grid_of(gt), grid_of(pred)) ==
        doctest::Approx(0.875).epsilon(1e-12));
}

TEST_CASE("grits with a missing row is 2/3") {
  const TableAnnotation gt = two_by_two();
  TableAnnotation pred = fixtures::make_table(1, 2, "p");
  fixtures::add_cell(pred, 0, 0, 0, 0, "A");
  fixtures::add_cell(pred, 0, 0, 1, 1, "B");
  const double expected = 2.0 * 2.0 / 6.0;
  CHECK(std::abs(grits(SimilarityKind::Content, grid_of(gt), grid_of(pred)) - expected) < 1e-9);
  CHECK(std::abs(grits_exact(SimilarityKind::Content, grid_of(gt), grid_of(pred)) - expected) <
        1e-9);
}

TEST_CASE("grits throws on empty grids and grits_exact on large ones") {
  const TableAnnotation t = two_by_two();
  TableGrid empty;
  CHECK_THROWS_AS(grits(SimilarityKind::Content, grid_of(t), empty), Error);
  const TableAnnotation big = fixtures::clean_table(5, 5, "big");
  CHECK_THROWS_AS(grits_exact(SimilarityKind::Content, grid_of(big), grid_of(big)), Error);
}

TEST_CASE("heuristic grits is bounded by and usually equals the exhaustive optimum") {
  std::mt19937 rng(2024);
  SyntheticOptions options;
  options.max_rows = 3;
  options.max_cols = 3;
  options.max_text_length = 2;
  int equal = 0;
  const int trials = 100;
  for (int i = 0; i < trials; ++i) {
    const TableGrid a = grid_of(make_random_table(rng, options, "a"));
    const TableGrid b = grid_of(make_random_table(rng, options, "b"));
    for (SimilarityKind kind :
         {SimilarityKind::Content, SimilarityKind::Location, SimilarityKind::Topology}) {
      const double h = grits(kind, a, b);
      const double e = grits_exact(kind, a, b);
      CHECK(h <= e + 1e-9);
      if (std::abs(h - e) <= 1e-9) ++equal;
    }
  }
  CHECK(equal >= 3 * trials - 3);  // matches the oracle in at least 99%
}

TEST_CASE("grits is symmetric") {
  std::mt19937 rng(5);
  SyntheticOptions options;
  options.max_rows = 4;
  options.max_cols = 4;
  for (int i = 0; i < 25; ++i) {
    const TableGrid a = grid_of(make_random_table(rng, options, "a"));
    const TableGrid b = grid_of(make_random_table(rng, options, "b"));
    for (SimilarityKind kind :
         {SimilarityKind::Content, SimilarityKind::Location, SimilarityKind::Topology})
      CHECK(grits(kind, a, b) == doctest::Approx(grits(kind, b, a)).epsilon(1e-12));
    CHECK(dar_con(a, b) == doctest::Approx(dar_con(b, a)).epsilon(1e-12));
  }
}

TEST_CASE("dar relations: identical tables score 1, one changed cell scores 0.5") {
  const TableAnnotation gt = two_by_two();
  CHECK(dar_con(grid_of(gt), grid_of(gt)) == 1.0);
  // Changing D breaks (B,D,below) and (C,D,right): 2 of 4 relations survive.
  const TableAnnotation pred = two_by_two("Dx");
  CHECK(dar_con(grid_of(gt), grid_of(pred)) == 0.5);
}

TEST_CASE("dar skips blank entries when finding neighbors") {
  TableAnnotation t = fixtures::make_table(1, 3, "dar");
  fixtures::add_cell(t, 0, 0, 0, 0, "A");
  fixtures::add_cell(t, 0, 0, 2, 2, "B");
  // Only relation: (A, B, right), across the blank middle.
  TableAnnotation adjacent = fixtures::make_table(1, 2, "dar2");
  fixtures::add_cell(adjacent, 0, 0, 0, 0, "A");
  fixtures::add_cell(adjacent, 0, 0, 1, 1, "B");
  CHECK(dar_con(grid_of(t), grid_of(adjacent)) == 1.0);
}

TEST_CASE("dar of two empty-relation grids is 1") {
  TableAnnotation t = fixtures::make_table(1, 1, "single");
  fixtures::add_cell(t, 0, 0, 0, 0, "A");
  CHECK(dar_con(grid_of(t), grid_of(t)) == 1.0);
}

TEST_CASE("exact match ignores location but not layout or text") {
  const TableAnnotation gt = two_by_two();
  TableAnnotation moved = two_by_two();
  for (Cell& c : moved.cells)
    if (c.box)
      c.box = BBox{c.box->x_min + 500, c.box->y_min, c.box->x_max + 500, c.box->y_max};
  CHECK(exact_match(grid_of(gt), grid_of(moved)));

  TableAnnotation whitespace = two_by_two();
  whitespace.cells[3].text = "  D \t";
  CHECK(exact_match(grid_of(gt), grid_of(whitespace)));

  CHECK_FALSE(exact_match(grid_of(gt), grid_of(two_by_two("D'"))));

  // Same texts, one header cell split in two: rel_extent differs.
  TableAnnotation merged = fixtures::make_table(2, 2, "m1");
  fixtures::add_cell(merged, 0, 0, 0, 1, "H");
  fixtures::add_cell(merged, 1, 1, 0, 0, "a");
  fixtures::add_cell(merged, 1, 1, 1, 1, "b");
  TableAnnotation split = fixtures::make_table(2, 2, "m2");
  fixtures::add_cell(split, 0, 0, 0, 0, "H");
  fixtures::add_cell(split, 0, 0, 1, 1, "");
  fixtures::add_cell(split, 1, 1, 0, 0, "a");
  fixtures::add_cell(split, 1, 1, 1, 1, "b");
  CHECK_FALSE(exact_match(grid_of(merged), grid_of(split)));
}

TEST_CASE("dar ignores geometry entirely") {
  std::mt19937 rng(77);
  SyntheticOptions options;
  for (int i = 0; i < 20; ++i) {
    const TableAnnotation a = make_random_table(rng, options, "a");
    const TableAnnotation b = make_random_table(rng, options, "b");
    TableAnnotation b_moved = b;
    for (Cell& c : b_moved.cells)
      if (c.box)
        c.box = BBox{c.box->x_min * 2 + 31, c.box->y_min * 2 + 17, c.box->x_max * 2 + 31,
                     c.box->y_max * 2 + 17};
    const TableGrid ga = build_grid(a);
    CHECK(dar_con(ga, build_grid(b)) == dar_con(ga, build_grid(b_moved)));
  }
}

TEST_CASE("exact match implies perfect content and topology grits") {
  std::mt19937 rng(31);
  SyntheticOptions options;
  for (int i = 0; i < 50; ++i) {
    const TableAnnotation t = make_random_table(rng, options, "x");
    const TableGrid g = grid_of(t);
    CHECK(exact_match(g, g));
    CHECK(grits(SimilarityKind::Content, g, g) == 1.0);
    CHECK(grits(SimilarityKind::Topology, g, g) == 1.0);
  }
}

TEST_CASE("content similarity boundedness under a one-character edit") {
  TableAnnotation gt = fixtures::clean_table(3, 3, "bound");
  TableAnnotation pred = gt;
  pred.cells[4].text.pop_back();
  const double score = grits(SimilarityKind::Content, grid_of(gt), grid_of(pred));
  CHECK(score <= 1.0);
  CHECK(score >= 1.0 - 2.0 / (9 + 9));
}

TEST_CASE("evaluate_corpus joins by table id") {
  std::vector<TableAnnotation> gt;
  gt.push_back(fixtures::clean_table(2, 2, "t1"));
  gt.push_back(fixtures::clean_table(3, 3, "t2"));

  SUBCASE("perfect predictions") {
    const MetricReport report = evaluate_corpus(gt, gt, 1);
    CHECK(report.acc_con == 1.0);
    CHECK(report.mean_grits_con == 1.0);
    CHECK(report.mean_dar_con == 1.0);
  }

  SUBCASE("missing prediction scores zero") {
    std::vector<TableAnnotation> pred{gt[0]};
    const MetricReport report = evaluate_corpus(gt, pred, 1);
    CHECK(report.acc_con == 0.5);
    CHECK(report.mean_grits_con == 0.5);
    CHECK(report.per_table[1].has_prediction == false);
    CHECK(report.per_table[1].grits_con == 0.0);
  }

  SUBCASE("duplicate prediction is an error") {
    std::vector<TableAnnotation> pred{gt[0], gt[0]};
    CHECK_THROWS_AS(evaluate_corpus(gt, pred, 1), Error);
  }

  SUBCASE("prediction without ground truth is a join error") {
    std::vector<TableAnnotation> pred{fixtures::clean_table(2, 2, "stranger")};
    try {
      evaluate_corpus(gt, pred, 1);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::JoinError);
    }
  }
}

TEST_CASE("evaluate_corpus is identical across thread counts") {
  const auto tables = make_random_corpus(17, 40);
  const MetricReport serial = evaluate_corpus(tables, tables, 1);
  const MetricReport parallel = evaluate_corpus(tables, tables, 8);
  CHECK(metric_report_json(serial, "x") == metric_report_json(parallel, "x"));
}

TEST_CASE("metric report text matches the expected column layout") {
  std::vector<TableAnnotation> gt{fixtures::clean_table(2, 2, "t1")};
  const MetricReport report = evaluate_corpus(gt, gt, 1);
  const std::string text = metric_report_text(report, "fixture");
  CHECK(text.find("GriTS_Con") != std::string::npos);
  CHECK(text.find("GriTS_Loc") != std::string::npos);
  CHECK(text.find("GriTS_Top") != std::string::npos);
  CHECK(text.find("DAR_C") != std::string::npos);
  CHECK(text.find("Acc_C") != std::string::npos);
  CHECK(text.find("1.0000") != std::string::npos);
}
