#include "tabalign/synthetic.hpp"

namespace tabalign {

namespace {

const char kAlphabet[] = "ab12xyz";

std::string random_text(std::mt19937& rng, int max_length) {
  std::uniform_int_distribution<int> len(1, max_length);
  std::uniform_int_distribution<int> pick(0, sizeof(kAlphabet) - 2);
  std::string s;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) s.push_back(kAlphabet[pick(rng)]);
  return s;
}

}  // namespace

TableAnnotation make_random_table(std::mt19937& rng, const SyntheticOptions& options,
                                  const std::string& table_id) {
  std::uniform_int_distribution<int> rows_dist(1, options.max_rows);
  std::uniform_int_distribution<int> cols_dist(1, options.max_cols);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  TableAnnotation t;
  t.table_id = table_id;
  t.split = Split::Train;
  t.n_rows = rows_dist(rng);
  t.n_cols = cols_dist(rng);
  t.provenance = Provenance{"synthetic", table_id};
  t.stage = "raw";

  // Quarter-lattice geometry: widths/heights divisible by 4 keep the
  // pipeline's mid-gap halving exact.
  const double kWidths[] = {60, 80, 100};
  const double kHeights[] = {16, 20, 24};
  std::uniform_int_distribution<int> pick3(0, 2);
  std::vector<double> x_edges(t.n_cols + 1, 0.0), y_edges(t.n_rows + 1, 0.0);
  for (int c = 0; c < t.n_cols; ++c) x_edges[c + 1] = x_edges[c] + kWidths[pick3(rng)];
  for (int r = 0; r < t.n_rows; ++r) y_edges[r + 1] = y_edges[r] + kHeights[pick3(rng)];

  std::vector<bool> taken(static_cast<std::size_t>(t.n_rows) * t.n_cols, false);
  auto occupied = [&](int r, int c) -> std::vector<bool>::reference {
    return taken[static_cast<std::size_t>(r) * t.n_cols + c];
  };

  for (int r = 0; r < t.n_rows; ++r) {
    for (int c = 0; c < t.n_cols; ++c) {
      if (occupied(r, c)) continue;
      int span_w = 1, span_h = 1;
      if (unit(rng) < options.span_probability) {
        int free_w = 0;
        while (c + free_w < t.n_cols && !occupied(r, c + free_w)) ++free_w;
        std::uniform_int_distribution<int> w_dist(1, std::min(3, free_w));
        std::uniform_int_distribution<int> h_dist(1, std::min(3, t.n_rows - r));
        span_w = w_dist(rng);
        span_h = h_dist(rng);
        // Shrink the height until the whole region is free.
        for (; span_h > 1; --span_h) {
          bool free_region = true;
          for (int rr = r; rr < r + span_h && free_region; ++rr)
            for (int cc = c; cc < c + span_w && free_region; ++cc)
              if (occupied(rr, cc)) free_region = false;
          if (free_region) break;
        }
      }
      for (int rr = r; rr < r + span_h; ++rr)
        for (int cc = c; cc < c + span_w; ++cc) occupied(rr, cc) = true;

      if (unit(rng) < options.blank_probability) continue;  // leave the region uncovered

      Cell cell;
      cell.row_start = r;
      cell.row_end = r + span_h - 1;
      cell.col_start = c;
      cell.col_end = c + span_w - 1;
      cell.box = BBox{x_edges[c] + 2, y_edges[r] + 2, x_edges[c + span_w] - 2,
                      y_edges[r + span_h] - 2};

      if (options.with_words) {
        // Word tokens the way an extractor delivers them: single-line boxes
        // that never straddle a row or column boundary. A spanning cell gets
        // one word per covered column on its first text line.
        std::string text;
        for (int cc = c; cc < c + span_w; ++cc) {
          std::uniform_int_distribution<int> word_count(1, 2);
          const int k = span_w > 1 ? 1 : word_count(rng);
          const double lo = x_edges[cc] + 2, hi = x_edges[cc + 1] - 2;
          const double strip = (hi - lo) / k;
          for (int i = 0; i < k; ++i) {
            Word w;
            w.text = random_text(rng, options.max_text_length);
            w.box = BBox{lo + i * strip + 1, y_edges[r] + 3, lo + (i + 1) * strip - 1,
                         y_edges[r + 1] - 3};
            if (!text.empty()) text.push_back(' ');
            text += w.text;
            t.words.push_back(std::move(w));
          }
        }
        cell.text = text;
      } else {
        cell.text = random_text(rng, options.max_text_length);
      }
      t.cells.push_back(std::move(cell));
    }
  }

  if (options.with_row_column_boxes) {
    t.rows.resize(t.n_rows);
    t.columns.resize(t.n_cols);
    for (int r = 0; r < t.n_rows; ++r)
      t.rows[r].box = BBox{x_edges[0], y_edges[r], x_edges[t.n_cols], y_edges[r + 1]};
    for (int c = 0; c < t.n_cols; ++c)
      t.columns[c].box = BBox{x_edges[c], y_edges[0], x_edges[c + 1], y_edges[t.n_rows]};
  }

  validate(t);
  return t;
}

std::vector<TableAnnotation> make_random_corpus(std::uint32_t seed, std::size_t count,
                                                const SyntheticOptions& options) {
  std::mt19937 rng(seed);
  std::vector<TableAnnotation> tables;
  tables.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    tables.push_back(make_random_table(rng, options, "rnd-" + std::to_string(i)));
  return tables;
}

}  // namespace tabalign
