#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dgl/experiment.hpp"
#include "dgl/io.hpp"

namespace dgl::plot {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool lines = false;
};

struct Panel {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  /// Draws a dashed y = 0 reference line when inside the range.
  bool zero_line = false;
  std::vector<Series> series;
};

/// Panels laid out side by side in one SVG document. Panels with no points
/// still get axes.
std::string render_svg(const std::vector<Panel>& panels);

/// Reads the rows of a results CSV back. Throws std::runtime_error naming
/// the offending data row (1-based, header excluded) or missing column. A
/// table with no header at all yields no rows.
std::vector<ExperimentRow> parse_results(const io::CsvTable& table);

/// Writes accuracy_vs_cost.svg (one panel per metric, one series per
/// method) and, when the CSV holds both distributed and centralized rows,
/// delta_cost_vs_degree.svg. Returns the files written.
std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& results_csv,
                                              const std::filesystem::path& out_dir);

} // namespace dgl::plot
