// Static SVG rendering of carpet levels with a codebook overlaid.
// Unit square mapped to a 900x900 viewBox, origin at the bottom-left.

#pragma once

#include <carpetq/geometry.hpp>
#include <carpetq/measure.hpp>

#include <cstdio>
#include <ostream>
#include <string>

namespace carpetq {

namespace detail {

inline std::string svg_coord(const Rat& v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", 900.0 * v.convert_to<double>());
  return buf;
}

inline std::string svg_coord_flipped(const Rat& v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", 900.0 * (1.0 - v.convert_to<double>()));
  return buf;
}

inline void emit_squares(std::ostream& os, const Pt& corner, const Rat& side, unsigned depth) {
  // y flipped: the rect's top-left is (corner.x, corner.y + side)
  os << "  <rect x=\"" << svg_coord(corner.x) << "\" y=\""
     << svg_coord_flipped(Rat(corner.y + side)) << "\" width=\"" << svg_coord(side)
     << "\" height=\"" << svg_coord(side)
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  if (depth == 0) return;
  Rat child = side / 3;
  for (int i = 1; i <= 4; ++i) {
    const Pt& t = similitude(i).translation;
    emit_squares(os, Pt{corner.x + side * t.x, corner.y + side * t.y}, child, depth - 1);
  }
}

}  // namespace detail

inline void render_svg(std::ostream& os, const Codebook& cb, unsigned carpet_depth) {
  if (carpet_depth > 7) throw std::invalid_argument("carpet depth must be <= 7");
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 900 900\">\n";
  os << "  <rect x=\"0\" y=\"0\" width=\"900\" height=\"900\" fill=\"white\"/>\n";
  detail::emit_squares(os, Pt{Rat(0), Rat(0)}, Rat(1), carpet_depth);
  for (const Pt& p : cb.points) {
    os << "  <circle cx=\"" << detail::svg_coord(p.x) << "\" cy=\""
       << detail::svg_coord_flipped(p.y) << "\" r=\"5\" fill=\"#cc0000\"/>\n";
  }
  os << "</svg>\n";
}

}  // namespace carpetq
