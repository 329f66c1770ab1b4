#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace pairlat::io {

/// Round-trip decimal form ("%.17g"); "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);

using Cell = std::variant<double, std::int64_t, std::string>;

/// In-memory CSV table with a header row.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<Cell> cells);
  std::size_t rows() const noexcept { return rows_.size(); }
  const std::vector<std::string>& header() const noexcept { return header_; }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

/// Numeric view of a CSV file: header plus column-major values.
struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  /// Column by header name; throws InvalidParameter if absent.
  const std::vector<double>& column(const std::string& name) const;
};

CsvData read_csv(const std::filesystem::path& path);

/// Writes `content` to a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
void atomic_write(const std::filesystem::path& path, const std::string& content);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;  // scatter instead of polyline
};

struct PlotSpec {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  std::vector<PlotSeries> series;
};

/// Static SVG line/scatter plot.
std::string render_plot_svg(const PlotSpec& spec);

/// Static SVG heat map; values[i][j] is drawn at row i (y) and column j (x).
/// Each column is scaled to its own maximum when `normalize_columns` is set.
std::string render_heatmap_svg(const std::string& title, const std::vector<double>& xs,
                               const std::vector<double>& ys, const std::vector<std::vector<double>>& values,
                               bool normalize_columns);

}  // namespace pairlat::io
