#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace cli {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Csv::Csv(std::vector<std::string> header) {
  for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
}

Csv& Csv::row() {
  text_ += '\n';
  fresh_ = true;
  return *this;
}

Csv& Csv::add(const std::string& s) {
  if (!fresh_) text_ += ',';
  text_ += s;
  fresh_ = false;
  return *this;
}

Csv& Csv::add(double x) { return add(num(x)); }
Csv& Csv::add(std::int64_t x) { return add(std::to_string(x)); }

std::string Csv::str() const { return text_ + '\n'; }

namespace {

constexpr double kW = 640, kH = 420, kL = 70, kR = 20, kT = 40, kB = 50;

struct Frame {
  double x0, x1, y0, y1;

  double px(double x) const { return kL + (x - x0) / (x1 - x0) * (kW - kL - kR); }
  double py(double y) const { return kH - kB - (y - y0) / (y1 - y0) * (kH - kT - kB); }
};

Frame frame(double x0, double x1, double y0, double y1) {
  if (!(x1 > x0)) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  if (!(y1 > y0)) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  double mx = 0.03 * (x1 - x0), my = 0.05 * (y1 - y0);
  return {x0 - mx, x1 + mx, y0 - my, y1 + my};
}

std::string esc(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

// Pixel coordinates at three decimals.
std::string c(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string head(const std::string& title, const std::string& xl, const std::string& yl, const Frame& f) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + c(kW) + "\" height=\"" + c(kH) +
                  "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + c(kW / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + esc(title) + "</text>\n";
  s += "<rect x=\"" + c(kL) + "\" y=\"" + c(kT) + "\" width=\"" + c(kW - kL - kR) + "\" height=\"" +
       c(kH - kT - kB) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double x = f.x0 + (f.x1 - f.x0) * i / 4.0;
    double y = f.y0 + (f.y1 - f.y0) * i / 4.0;
    char bx[32], by[32];
    std::snprintf(bx, sizeof bx, "%.4g", x);
    std::snprintf(by, sizeof by, "%.4g", y);
    s += "<text x=\"" + c(f.px(x)) + "\" y=\"" + c(kH - kB + 16) + "\" text-anchor=\"middle\">" + bx + "</text>\n";
    s += "<text x=\"" + c(kL - 6) + "\" y=\"" + c(f.py(y) + 4) + "\" text-anchor=\"end\">" + by + "</text>\n";
  }
  s += "<text x=\"" + c(kW / 2) + "\" y=\"" + c(kH - 12) + "\" text-anchor=\"middle\">" + esc(xl) + "</text>\n";
  s += "<text x=\"16\" y=\"" + c(kH / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " + c(kH / 2) +
       ")\">" + esc(yl) + "</text>\n";
  return s;
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::string svg_lines(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                      const std::vector<Series>& series) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (double x : s.xs) x0 = std::min(x0, x), x1 = std::max(x1, x);
    for (double y : s.ys) y0 = std::min(y0, y), y1 = std::max(y1, y);
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  Frame f = frame(x0, x1, y0, y1);
  std::string s = head(title, xlabel, ylabel, f);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& se = series[k];
    std::string pts;
    for (std::size_t i = 0; i < se.xs.size(); ++i) pts += c(f.px(se.xs[i])) + "," + c(f.py(se.ys[i])) + " ";
    s += "<polyline fill=\"none\" stroke=\"" + std::string(kColors[k % 8]) + "\" points=\"" + pts + "\"/>\n";
    s += "<text x=\"" + c(kW - kR - 6) + "\" y=\"" + c(kT + 16 + 14 * static_cast<double>(k)) +
         "\" text-anchor=\"end\" fill=\"" + kColors[k % 8] + "\">" + esc(se.name) + "</text>\n";
  }
  return s + "</svg>\n";
}

std::string svg_segments(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                         const std::vector<Segment>& segments) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& g : segments) {
    x0 = std::min({x0, g.x0, g.x1});
    x1 = std::max({x1, g.x0, g.x1});
    y0 = std::min({y0, g.y0, g.y1});
    y1 = std::max({y1, g.y0, g.y1});
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  Frame f = frame(x0, x1, y0, y1);
  std::string s = head(title, xlabel, ylabel, f);
  for (const auto& g : segments)
    s += "<line x1=\"" + c(f.px(g.x0)) + "\" y1=\"" + c(f.py(g.y0)) + "\" x2=\"" + c(f.px(g.x1)) + "\" y2=\"" +
         c(f.py(g.y1)) + "\" stroke=\"#1f77b4\"/>\n";
  return s + "</svg>\n";
}

std::string svg_bars(const std::string& title, const std::string& xlabel, const std::vector<double>& edges,
                     const std::vector<std::uint64_t>& counts) {
  double top = 1.0;
  for (auto n : counts) top = std::max(top, static_cast<double>(n));
  Frame f = frame(edges.front(), edges.back(), 0.0, top);
  std::string s = head(title, xlabel, "count", f);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    double a = f.px(edges[i]), b = f.px(edges[i + 1]);
    double y = f.py(static_cast<double>(counts[i])), base = f.py(0.0);
    s += "<rect x=\"" + c(a) + "\" y=\"" + c(y) + "\" width=\"" + c(b - a) + "\" height=\"" + c(base - y) +
         "\" fill=\"#1f77b4\" stroke=\"white\"/>\n";
  }
  return s + "</svg>\n";
}

Outputs::Outputs(std::string dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw std::runtime_error(dir_ + ": cannot create output directory");
}

void Outputs::write(const std::string& name, const std::string& content) {
  std::string path = (std::filesystem::path(dir_) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot write");
  out << content;
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : content) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  files_.push_back({{"file", name}, {"bytes", content.size()}, {"fnv1a64", hex}});
}

void Outputs::figure(const std::string& stem, const std::string& svg, const std::string& csv) {
  write(stem + ".csv", csv);
  write(stem + ".svg", svg);
}

}  // namespace cli
