#include "pairlat/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pairlat/error.hpp"

namespace pairlat::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<Cell> cells) {
  if (cells.size() != header_.size()) throw InvalidParameter("csv row has the wrong number of cells");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out += ',';
    out += header_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (const auto* d = std::get_if<double>(&row[i])) {
        out += format_double(*d);
      } else if (const auto* n = std::get_if<std::int64_t>(&row[i])) {
        out += std::to_string(*n);
      } else {
        out += std::get<std::string>(row[i]);
      }
    }
    out += '\n';
  }
  return out;
}

const std::vector<double>& CsvData::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw InvalidParameter("csv has no column '" + name + "'");
  return columns[static_cast<std::size_t>(it - header.begin())];
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CsvData read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open " + path.string());
  CsvData d;
  std::string line;
  if (!std::getline(in, line)) throw InvalidParameter(path.string() + " is empty");
  d.header = split(line);
  d.columns.resize(d.header.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    for (std::size_t i = 0; i < d.header.size(); ++i) {
      double v = std::nan("");
      if (i < cells.size()) {
        try {
          v = std::stod(cells[i]);
        } catch (const std::exception&) {
        }
      }
      d.columns[i].push_back(v);
    }
  }
  return d;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidParameter("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InvalidParameter("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string fmt(double v, const char* spec = "%.4g") {
  char buf[32];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = HUGE_VAL;
  double hi = -HUGE_VAL;
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi == lo) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

std::string svg_open(const std::string& title) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
         "<text x=\"" + fmt(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) +
         "</text>\n";
}

std::string axes(const Range& xr, const Range& yr, const std::string& xlabel, const std::string& ylabel) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  std::string s = "<rect x=\"" + fmt(x0) + "\" y=\"" + fmt(y1) + "\" width=\"" + fmt(x1 - x0) + "\" height=\"" +
                  fmt(y0 - y1) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x0 + (x1 - x0) * i / 4.0;
    const double fy = y0 - (y0 - y1) * i / 4.0;
    s += "<text x=\"" + fmt(fx) + "\" y=\"" + fmt(y0 + 16) + "\" text-anchor=\"middle\">" +
         fmt(xr.lo + (xr.hi - xr.lo) * i / 4.0) + "</text>\n";
    s += "<text x=\"" + fmt(x0 - 6) + "\" y=\"" + fmt(fy + 4) + "\" text-anchor=\"end\">" +
         fmt(yr.lo + (yr.hi - yr.lo) * i / 4.0) + "</text>\n";
  }
  s += "<text x=\"" + fmt((x0 + x1) / 2) + "\" y=\"" + fmt(kHeight - 12) + "\" text-anchor=\"middle\">" +
       escape(xlabel) + "</text>\n";
  s += "<text x=\"16\" y=\"" + fmt((y0 + y1) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       fmt((y0 + y1) / 2) + ")\">" + escape(ylabel) + "</text>\n";
  return s;
}

}  // namespace

std::string render_plot_svg(const PlotSpec& spec) {
  Range xr, yr;
  for (const auto& s : spec.series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  xr.finish();
  yr.finish();
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  auto px = [&](double v) { return x0 + (v - xr.lo) / (xr.hi - xr.lo) * (x1 - x0); };
  auto py = [&](double v) { return y0 - (v - yr.lo) / (yr.hi - yr.lo) * (y0 - y1); };

  std::string out = svg_open(spec.title) + axes(xr, yr, spec.xlabel, spec.ylabel);
  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const auto& s = spec.series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (s.markers) {
      out += "<g fill=\"" + std::string(color) + "\">\n";
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        out += "<circle cx=\"" + fmt(px(s.x[i]), "%.2f") + "\" cy=\"" + fmt(py(s.y[i]), "%.2f") + "\" r=\"1.2\"/>\n";
      }
      out += "</g>\n";
    } else {
      out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" points=\"";
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        out += fmt(px(s.x[i]), "%.2f") + "," + fmt(py(s.y[i]), "%.2f") + " ";
      }
      out += "\"/>\n";
    }
    out += "<text x=\"" + fmt(x1 - 8) + "\" y=\"" + fmt(y1 + 16 + 14.0 * k) + "\" text-anchor=\"end\" fill=\"" +
           color + "\">" + escape(s.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string render_heatmap_svg(const std::string& title, const std::vector<double>& xs,
                               const std::vector<double>& ys, const std::vector<std::vector<double>>& values,
                               bool normalize_columns) {
  Range xr, yr;
  for (double v : xs) xr.add(v);
  for (double v : ys) yr.add(v);
  xr.finish();
  yr.finish();
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  const double cw = (x1 - x0) / std::max<std::size_t>(xs.size(), 1);
  const double ch = (y0 - y1) / std::max<std::size_t>(ys.size(), 1);

  std::vector<double> scale(xs.size(), 0.0);
  double global = 0.0;
  for (const auto& row : values) {
    for (std::size_t j = 0; j < row.size() && j < xs.size(); ++j) {
      if (!std::isfinite(row[j])) continue;
      scale[j] = std::max(scale[j], std::abs(row[j]));
      global = std::max(global, std::abs(row[j]));
    }
  }
  std::string out = svg_open(title) + axes(xr, yr, "", "");
  for (std::size_t i = 0; i < ys.size() && i < values.size(); ++i) {
    for (std::size_t j = 0; j < xs.size() && j < values[i].size(); ++j) {
      const double s = normalize_columns ? scale[j] : global;
      const double v = std::isfinite(values[i][j]) && s > 0.0 ? std::abs(values[i][j]) / s : 0.0;
      const int shade = static_cast<int>(std::lround(255.0 * (1.0 - std::clamp(v, 0.0, 1.0))));
      out += "<rect x=\"" + fmt(x0 + cw * j, "%.2f") + "\" y=\"" + fmt(y0 - ch * (i + 1), "%.2f") + "\" width=\"" +
             fmt(cw + 0.05, "%.2f") + "\" height=\"" + fmt(ch + 0.05, "%.2f") + "\" fill=\"rgb(" +
             std::to_string(shade) + "," + std::to_string(shade) + "," + std::to_string(shade) + ")\"/>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace pairlat::io
