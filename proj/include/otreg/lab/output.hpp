#pragma once

#include "otreg/geometry/ellipse.hpp"
#include "otreg/geometry/polygon.hpp"
#include "otreg/geometry/rays.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace otreg::lab {

/// Shortest decimal form that round-trips ("%.17g"), so identical doubles
/// always print identically.
std::string format_number(double v);

/// Comma-separated table with a fixed header.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);
  void add_row(const std::vector<double>& values);
  std::size_t rows() const { return rows_; }
  std::string str() const;
  void write(const std::filesystem::path& path) const;  // atomic

 private:
  std::size_t width_;
  std::size_t rows_ = 0;
  std::string text_;
};

/// Vector figure in world coordinates; the y-axis points up. Every element
/// carries its world coordinates, so the file doubles as data.
class SvgFigure {
 public:
  SvgFigure(const Vec2& lo, const Vec2& hi, double pixels = 600.0);
  void polygon(const ConvexPolygon& p, const std::string& stroke, const std::string& fill = "none",
               double width = 1.5, const std::string& label = "");
  void ellipse(const Ellipse& e, const std::string& stroke, const std::string& label = "");
  void ray(const Ray& r, double length, const std::string& stroke, const std::string& label = "");
  void point(const Vec2& x, const std::string& fill, const std::string& label = "");
  void polyline(const std::vector<Vec2>& pts, const std::string& stroke, const std::string& label = "");
  std::string str() const;
  void write(const std::filesystem::path& path) const;  // atomic

 private:
  Vec2 map(const Vec2& x) const;
  std::string coords(const Vec2& x) const;
  Vec2 lo_, hi_;
  double scale_, width_px_, height_px_;
  std::string body_;
};

}  // namespace otreg::lab
