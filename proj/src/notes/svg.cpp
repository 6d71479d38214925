#include <cstdio>
#include <sstream>

#include "notes/document.hpp"

namespace marginalia::notes {
namespace {

// Ink appearance in canvas units.
constexpr double kPenWidth = 0.004;
constexpr double kHighlighterWidth = 0.02;
constexpr const char* kPenColor = "#d0021b";
constexpr const char* kHighlighterColor = "#ffe100";
constexpr double kHighlighterOpacity = 0.4;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape_xml(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

struct Painter {
  std::ostringstream& out;
  double scale;

  template <typename MapFn>
  void stroke(const Stroke& s, MapFn&& map) {
    const bool pen = s.tool == Tool::Pen;
    const double width = (pen ? kPenWidth : kHighlighterWidth) * scale;
    const char* color = pen ? kPenColor : kHighlighterColor;
    const std::string opacity =
        pen ? "" : " stroke-opacity=\"" + num(kHighlighterOpacity) + "\" fill-opacity=\"" + num(kHighlighterOpacity) + "\"";
    if (s.points.size() == 1) {
      const Point p = map(s.points[0]);
      out << "<circle class=\"stroke " << to_string(s.tool) << "\" data-stroke-id=\"" << s.id.value
          << "\" cx=\"" << num(p.x * scale) << "\" cy=\"" << num(p.y * scale) << "\" r=\""
          << num(width / 2) << "\" fill=\"" << color << "\"" << opacity << "/>\n";
      return;
    }
    out << "<polyline class=\"stroke " << to_string(s.tool) << "\" data-stroke-id=\"" << s.id.value
        << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << num(width)
        << "\" stroke-linecap=\"round\" stroke-linejoin=\"round\"" << opacity << " points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const Point p = map(s.points[i]);
      if (i) out << ' ';
      out << num(p.x * scale) << ',' << num(p.y * scale);
    }
    out << "\"/>\n";
  }
};

std::vector<std::string> wrap_words(std::string_view text, std::size_t max_chars) {
  std::vector<std::string> lines;
  std::string line;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ') ++j;
    if (j == i) break;
    const auto word = text.substr(i, j - i);
    if (!line.empty() && line.size() + 1 + word.size() > max_chars) {
      lines.push_back(std::move(line));
      line.clear();
    }
    if (!line.empty()) line.push_back(' ');
    line += word;
    i = j;
  }
  if (!line.empty()) lines.push_back(std::move(line));
  return lines;
}

}  // namespace

std::string render_svg(const NoteDocument& doc, const SvgOptions& options) {
  const double scale = options.pixels_per_unit;
  const double height_units =
      std::max(options.min_height, doc.content_frontier() + doc.layout().capture_gap);
  std::ostringstream out;
  Painter paint{out, scale};

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" xmlns:xlink=\"http://www.w3.org/1999/xlink\" "
         "version=\"1.1\" width=\""
      << num(scale) << "\" height=\"" << num(height_units * scale) << "\" viewBox=\"0 0 "
      << num(scale) << ' ' << num(height_units * scale) << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << num(scale) << "\" height=\""
      << num(height_units * scale) << "\" fill=\"#ffffff\"/>\n"
      << "<g id=\"content\">";
  if (!doc.elements().empty()) out << '\n';

  for (const auto& element : doc.elements()) {
    if (const auto* s = std::get_if<Stroke>(&element)) {
      paint.stroke(*s, [](const InkPoint& p) { return Point{p.x, p.y}; });
      continue;
    }
    const auto& c = std::get<Capture>(element);
    const Rect& r = c.placement;
    out << "<g class=\"capture " << to_string(c.kind) << "\" id=\"capture-" << c.id.value
        << "\" data-snapshot-id=\"" << escape_xml(c.snapshot_id) << "\">\n";
    std::optional<SnapshotContent> content;
    if (options.resolver) content = options.resolver(c.kind, c.snapshot_id);
    if (content && c.kind == CaptureKind::Slide && !content->image_href.empty()) {
      out << "<image x=\"" << num(r.x * scale) << "\" y=\"" << num(r.y * scale) << "\" width=\""
          << num(r.width * scale) << "\" height=\"" << num(r.height * scale)
          << "\" preserveAspectRatio=\"none\" xlink:href=\"" << escape_xml(content->image_href)
          << "\"/>\n";
    } else if (content && c.kind == CaptureKind::Transcript) {
      const double font = 16.0;
      const auto max_chars = static_cast<std::size_t>(std::max(10.0, r.width * scale / (font * 0.55)));
      double y = r.y * scale + font * 1.4;
      out << "<text font-family=\"sans-serif\" font-size=\"" << num(font) << "\" fill=\"#222222\">\n";
      for (const auto& line : wrap_words(content->text, max_chars)) {
        out << "<tspan x=\"" << num(r.x * scale + font * 0.5) << "\" y=\"" << num(y) << "\">"
            << escape_xml(line) << "</tspan>\n";
        y += font * 1.3;
      }
      out << "</text>\n";
    }
    out << "<rect class=\"capture-frame\" x=\"" << num(r.x * scale) << "\" y=\""
        << num(r.y * scale) << "\" width=\"" << num(r.width * scale) << "\" height=\""
        << num(r.height * scale) << "\" fill=\"none\" stroke=\"#555555\" stroke-width=\"2\"/>\n";
    out << "<g class=\"annotations\">\n";
    for (const auto& a : c.annotations) {
      paint.stroke(a, [&](const InkPoint& p) { return c.to_canvas(p.x, p.y); });
    }
    out << "</g>\n</g>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace marginalia::notes
