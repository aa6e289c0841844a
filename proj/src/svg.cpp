#include "tabalign/svg.hpp"

#include <cstdio>
#include <sstream>

#include "tabalign/errors.hpp"

namespace tabalign {

namespace {

const char* kColumnPalette[] = {"#66c2a5", "#fc8d62", "#8da0cb",
                                "#e78ac3", "#a6d854", "#ffd92f"};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void append_rect(std::ostringstream& out, const std::string& id, const BBox& b,
                 const std::string& fill, const std::string& fill_opacity,
                 const std::string& stroke) {
  out << "  <rect id=\"" << id << "\" x=\"" << fmt(b.x_min) << "\" y=\"" << fmt(b.y_min)
      << "\" width=\"" << fmt(b.width()) << "\" height=\"" << fmt(b.height()) << "\" fill=\""
      << fill << "\" fill-opacity=\"" << fill_opacity << "\" stroke=\"" << stroke
      << "\" stroke-width=\"0.75\"/>\n";
}

}  // namespace

std::string render_table_svg(const TableAnnotation& t, const std::set<std::string>& layers) {
  static const std::set<std::string> known = {"rows", "columns", "cells",
                                              "words", "header", "projected"};
  for (const std::string& layer : layers)
    if (!known.count(layer)) throw Error(ErrorCode::UnknownLayer, "no layer named '" + layer + "'");

  std::optional<BBox> bounds;
  auto grow = [&](const std::optional<BBox>& b) {
    if (b) bounds = maybe_union(bounds, b);
  };
  for (const Cell& c : t.cells) grow(c.box);
  for (const RowAnnotation& r : t.rows) grow(r.box);
  for (const ColumnAnnotation& c : t.columns) grow(c.box);
  for (const Word& w : t.words) grow(w.box);
  const BBox view = bounds ? BBox{bounds->x_min - 4, bounds->y_min - 4, bounds->x_max + 4,
                                  bounds->y_max + 4}
                           : BBox{0, 0, 1, 1};

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(view.x_min) << " "
      << fmt(view.y_min) << " " << fmt(view.width()) << " " << fmt(view.height()) << "\" width=\""
      << fmt(view.width()) << "\" height=\"" << fmt(view.height()) << "\">\n";

  if (layers.count("columns")) {
    out << " <g id=\"columns\">\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      if (!t.columns[i].box) continue;
      append_rect(out, "column-" + std::to_string(i), *t.columns[i].box,
                  kColumnPalette[i % 6], "0.35", "none");
    }
    out << " </g>\n";
  }
  if (layers.count("rows")) {
    out << " <g id=\"rows\">\n";
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      if (!t.rows[i].box) continue;
      append_rect(out, "row-" + std::to_string(i), *t.rows[i].box, "#999999", "0.15", "#666666");
    }
    out << " </g>\n";
  }
  if (layers.count("header")) {
    out << " <g id=\"header\">\n";
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      if (!t.rows[i].is_column_header || !t.rows[i].box) continue;
      append_rect(out, "header-" + std::to_string(i), *t.rows[i].box, "#6a51a3", "0.25", "none");
    }
    out << " </g>\n";
  }
  if (layers.count("cells")) {
    out << " <g id=\"cells\">\n";
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
      if (!t.cells[i].box) continue;
      append_rect(out, "cell-" + std::to_string(i), *t.cells[i].box, "none", "1", "#d95f02");
    }
    out << " </g>\n";
  }
  if (layers.count("projected")) {
    out << " <g id=\"projected\">\n";
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
      if (!t.cells[i].is_projected_row_header || !t.cells[i].box) continue;
      append_rect(out, "projected-" + std::to_string(i), *t.cells[i].box, "#e31a1c", "0.25",
                  "none");
    }
    out << " </g>\n";
  }
  if (layers.count("words")) {
    out << " <g id=\"words\">\n";
    for (std::size_t i = 0; i < t.words.size(); ++i)
      append_rect(out, "word-" + std::to_string(i), t.words[i].box, "none", "1", "#1f78b4");
    out << " </g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace tabalign
