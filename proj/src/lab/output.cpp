#include "otreg/lab/output.hpp"

#include "otreg/error.hpp"
#include "otreg/io.hpp"

#include <cmath>
#include <cstdio>

namespace otreg::lab {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns) : width_(columns.size()) {
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (k) text_ += ',';
    text_ += columns[k];
  }
  text_ += '\n';
}

void CsvTable::add_row(const std::vector<double>& values) {
  if (values.size() != width_) throw Error("csv: row width does not match the header");
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) text_ += ',';
    text_ += format_number(values[k]);
  }
  text_ += '\n';
  ++rows_;
}

std::string CsvTable::str() const { return text_; }

void CsvTable::write(const std::filesystem::path& path) const { write_file_atomic(path, text_); }

namespace {

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string title(const std::string& label) {
  return label.empty() ? std::string() : "<title>" + escape(label) + "</title>";
}

}  // namespace

SvgFigure::SvgFigure(const Vec2& lo, const Vec2& hi, double pixels) {
  const Vec2 pad = 0.05 * (hi - lo);
  lo_ = lo - pad;
  hi_ = hi + pad;
  const Vec2 ext = hi_ - lo_;
  scale_ = pixels / std::max(ext.x(), ext.y());
  width_px_ = ext.x() * scale_;
  height_px_ = ext.y() * scale_;
}

Vec2 SvgFigure::map(const Vec2& x) const { return {(x.x() - lo_.x()) * scale_, (hi_.y() - x.y()) * scale_}; }

std::string SvgFigure::coords(const Vec2& x) const {
  const Vec2 p = map(x);
  return short_number(p.x()) + "," + short_number(p.y());
}

void SvgFigure::polygon(const ConvexPolygon& p, const std::string& stroke, const std::string& fill, double width,
                        const std::string& label) {
  std::string pts, world;
  for (const Vec2& v : p.vertices()) {
    pts += coords(v) + " ";
    world += short_number(v.x()) + "," + short_number(v.y()) + " ";
  }
  body_ += "<polygon points=\"" + pts + "\" data-world=\"" + world + "\" stroke=\"" + stroke + "\" fill=\"" + fill +
           "\" fill-opacity=\"0.15\" stroke-width=\"" + short_number(width) + "\">" + title(label) + "</polygon>\n";
}

void SvgFigure::ellipse(const Ellipse& e, const std::string& stroke, const std::string& label) {
  std::string pts;
  for (const Vec2& v : e.boundary_points(96)) pts += coords(v) + " ";
  body_ += "<polygon points=\"" + pts + "\" data-center=\"" + short_number(e.center.x()) + "," +
           short_number(e.center.y()) + "\" data-axes=\"" + short_number(e.semi_short) + "," +
           short_number(e.semi_long) + "\" data-e-long=\"" + short_number(e.e_long.x()) + "," +
           short_number(e.e_long.y()) + "\" stroke=\"" + stroke +
           "\" fill=\"none\" stroke-dasharray=\"4 3\" stroke-width=\"1\">" + title(label) + "</polygon>\n";
}

void SvgFigure::ray(const Ray& r, double length, const std::string& stroke, const std::string& label) {
  const Vec2 end = r.origin + length * r.direction;
  body_ += "<line x1=\"" + short_number(map(r.origin).x()) + "\" y1=\"" + short_number(map(r.origin).y()) +
           "\" x2=\"" + short_number(map(end).x()) + "\" y2=\"" + short_number(map(end).y()) + "\" data-origin=\"" +
           short_number(r.origin.x()) + "," + short_number(r.origin.y()) + "\" data-direction=\"" +
           short_number(r.direction.x()) + "," + short_number(r.direction.y()) + "\" stroke=\"" + stroke +
           "\" stroke-width=\"1.5\">" + title(label) + "</line>\n";
}

void SvgFigure::point(const Vec2& x, const std::string& fill, const std::string& label) {
  const Vec2 p = map(x);
  body_ += "<circle cx=\"" + short_number(p.x()) + "\" cy=\"" + short_number(p.y()) + "\" r=\"3\" data-world=\"" +
           short_number(x.x()) + "," + short_number(x.y()) + "\" fill=\"" + fill + "\">" + title(label) +
           "</circle>\n";
}

void SvgFigure::polyline(const std::vector<Vec2>& pts, const std::string& stroke, const std::string& label) {
  std::string s;
  for (const Vec2& v : pts) s += coords(v) + " ";
  body_ += "<polyline points=\"" + s + "\" stroke=\"" + stroke + "\" fill=\"none\" stroke-width=\"1.5\">" +
           title(label) + "</polyline>\n";
}

std::string SvgFigure::str() const {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + short_number(width_px_) + "\" height=\"" +
         short_number(height_px_) + "\" viewBox=\"0 0 " + short_number(width_px_) + " " + short_number(height_px_) +
         "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body_ + "</svg>\n";
}

void SvgFigure::write(const std::filesystem::path& path) const { write_file_atomic(path, str()); }

}  // namespace otreg::lab
