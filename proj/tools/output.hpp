#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace cli {

//! 17 significant digits, so text output round-trips every double.
std::string num(double x);

class Csv {
 public:
  explicit Csv(std::vector<std::string> header);

  Csv& row();
  Csv& add(double x);
  Csv& add(std::int64_t x);
  Csv& add(std::size_t x) { return add(static_cast<std::int64_t>(x)); }
  Csv& add(int x) { return add(static_cast<std::int64_t>(x)); }
  Csv& add(bool x) { return add(static_cast<std::int64_t>(x ? 1 : 0)); }
  Csv& add(const std::string& s);
  Csv& add(const char* s) { return add(std::string(s)); }
  std::string str() const;

 private:
  std::string text_;
  bool fresh_ = true;
};

struct Series {
  std::string name;
  std::vector<double> xs;
  std::vector<double> ys;
};

struct Segment {
  double x0, y0, x1, y1;
};

//! Line plot; each series is drawn as one polyline.
std::string svg_lines(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                      const std::vector<Series>& series);

//! Straight segments, e.g. world-lines in the (x, t) plane.
std::string svg_segments(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                         const std::vector<Segment>& segments);

//! Bar chart over consecutive bin edges.
std::string svg_bars(const std::string& title, const std::string& xlabel,
                     const std::vector<double>& edges, const std::vector<std::uint64_t>& counts);

/*!
  Output directory of one run. Files are listed in the manifest with their
  size and FNV-1a hash.
*/
class Outputs {
 public:
  explicit Outputs(std::string dir);

  void write(const std::string& name, const std::string& content);
  //! Figure plus the CSV of exactly the plotted data.
  void figure(const std::string& stem, const std::string& svg, const std::string& csv);
  const nlohmann::json& listing() const { return files_; }
  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
  nlohmann::json files_ = nlohmann::json::array();
};

}  // namespace cli
