#include "dgl/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dgl::plot {
namespace {

constexpr double kPanelW = 420.0;
constexpr double kPanelH = 320.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 36.0;
constexpr double kBottom = 50.0;
constexpr double kLegendH = 28.0;

constexpr std::array<const char*, 6> kColors = {"#1f77b4", "#d62728", "#2ca02c",
                                                "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
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

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool empty() const { return !(lo <= hi); }
  void finish() {
    if (empty()) {
      lo = 0.0;
      hi = 1.0;
    } else if (lo == hi) {
      const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
      lo -= pad;
      hi += pad;
    } else {
      const double pad = (hi - lo) * 0.05;
      lo -= pad;
      hi += pad;
    }
  }
};

// Roughly five round-numbered ticks.
std::vector<double> ticks(double lo, double hi) {
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) {
      break;
    }
  }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    t.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
  }
  return t;
}

void render_panel(std::ostringstream& os, const Panel& p, double ox, double oy) {
  const double plot_w = kPanelW - kLeft - kRight;
  const double plot_h = kPanelH - kTop - kBottom;
  const auto tx = [&](double v) { return p.log_x ? std::log10(v) : v; };

  Range rx;
  Range ry;
  for (const Series& s : p.series) {
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (p.log_x && !(s.x[k] > 0.0)) {
        continue;
      }
      rx.add(tx(s.x[k]));
      ry.add(s.y[k]);
    }
  }
  if (p.zero_line && !ry.empty()) {
    ry.add(0.0);
  }
  rx.finish();
  ry.finish();
  const auto px = [&](double v) { return ox + kLeft + (tx(v) - rx.lo) / (rx.hi - rx.lo) * plot_w; };
  const auto py = [&](double v) { return oy + kTop + (ry.hi - v) / (ry.hi - ry.lo) * plot_h; };

  os << "<g>\n";
  os << "<text x=\"" << num(ox + kPanelW / 2) << "\" y=\"" << num(oy + 20)
     << "\" text-anchor=\"middle\" font-size=\"14\">" << escape(p.title) << "</text>\n";
  os << "<rect x=\"" << num(ox + kLeft) << "\" y=\"" << num(oy + kTop) << "\" width=\""
     << num(plot_w) << "\" height=\"" << num(plot_h)
     << "\" fill=\"none\" stroke=\"#000\" stroke-width=\"1\"/>\n";

  for (double t : ticks(rx.lo, rx.hi)) {
    const double x = ox + kLeft + (t - rx.lo) / (rx.hi - rx.lo) * plot_w;
    os << "<line x1=\"" << num(x) << "\" y1=\"" << num(oy + kTop + plot_h) << "\" x2=\"" << num(x)
       << "\" y2=\"" << num(oy + kTop + plot_h + 5) << "\" stroke=\"#000\"/>\n";
    os << "<text x=\"" << num(x) << "\" y=\"" << num(oy + kTop + plot_h + 18)
       << "\" text-anchor=\"middle\" font-size=\"10\">"
       << (p.log_x ? "1e" + num(t) : num(t)) << "</text>\n";
  }
  for (double t : ticks(ry.lo, ry.hi)) {
    const double y = oy + kTop + (ry.hi - t) / (ry.hi - ry.lo) * plot_h;
    os << "<line x1=\"" << num(ox + kLeft - 5) << "\" y1=\"" << num(y) << "\" x2=\""
       << num(ox + kLeft) << "\" y2=\"" << num(y) << "\" stroke=\"#000\"/>\n";
    os << "<text x=\"" << num(ox + kLeft - 8) << "\" y=\"" << num(y + 3)
       << "\" text-anchor=\"end\" font-size=\"10\">" << num(t) << "</text>\n";
  }
  os << "<text x=\"" << num(ox + kLeft + plot_w / 2) << "\" y=\"" << num(oy + kPanelH - 12)
     << "\" text-anchor=\"middle\" font-size=\"12\">" << escape(p.x_label) << "</text>\n";
  os << "<text transform=\"translate(" << num(ox + 16) << ',' << num(oy + kTop + plot_h / 2)
     << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">" << escape(p.y_label)
     << "</text>\n";

  if (p.zero_line && ry.lo < 0.0 && ry.hi > 0.0) {
    os << "<line x1=\"" << num(ox + kLeft) << "\" y1=\"" << num(py(0.0)) << "\" x2=\""
       << num(ox + kLeft + plot_w) << "\" y2=\"" << num(py(0.0))
       << "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
  }

  for (std::size_t si = 0; si < p.series.size(); ++si) {
    const Series& s = p.series[si];
    const char* color = kColors[si % kColors.size()];
    os << "<g class=\"series\" data-label=\"" << escape(s.label) << "\">\n";
    if (s.lines && s.x.size() > 1) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t k = 0; k < s.x.size(); ++k) {
        os << (k ? " " : "") << num(px(s.x[k])) << ',' << num(py(s.y[k]));
      }
      os << "\"/>\n";
    }
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (p.log_x && !(s.x[k] > 0.0)) {
        continue;
      }
      os << "<circle cx=\"" << num(px(s.x[k])) << "\" cy=\"" << num(py(s.y[k]))
         << "\" r=\"3\" fill=\"" << color << "\" fill-opacity=\"0.75\"/>\n";
    }
    const double lx = ox + kLeft + static_cast<double>(si) * 110.0;
    const double ly = oy + kPanelH + 10;
    os << "<rect x=\"" << num(lx) << "\" y=\"" << num(ly) << "\" width=\"10\" height=\"10\" fill=\""
       << color << "\"/>\n";
    os << "<text x=\"" << num(lx + 14) << "\" y=\"" << num(ly + 9) << "\" font-size=\"11\">"
       << escape(s.label) << "</text>\n";
    os << "</g>\n";
  }
  os << "</g>\n";
}

double field_double(const std::vector<std::string>& row, std::size_t col, std::size_t row_no,
                    const std::string& name) {
  const std::string& s = row[col];
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || !std::isfinite(v)) {
    throw std::runtime_error("row " + std::to_string(row_no) + ": column '" + name +
                             "' is not a number: '" + s + "'");
  }
  return v;
}

std::uint64_t field_count(const std::vector<std::string>& row, std::size_t col, std::size_t row_no,
                          const std::string& name) {
  const double v = field_double(row, col, row_no, name);
  if (v < 0.0 || v != std::floor(v)) {
    throw std::runtime_error("row " + std::to_string(row_no) + ": column '" + name +
                             "' is not a count: '" + row[col] + "'");
  }
  return static_cast<std::uint64_t>(v);
}

} // namespace

std::string render_svg(const std::vector<Panel>& panels) {
  const std::size_t n = std::max<std::size_t>(panels.size(), 1);
  const double width = kPanelW * static_cast<double>(n);
  const double height = kPanelH + kLegendH;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
     << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height)
     << "\" font-family=\"sans-serif\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  for (std::size_t k = 0; k < panels.size(); ++k) {
    render_panel(os, panels[k], kPanelW * static_cast<double>(k), 0.0);
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<ExperimentRow> parse_results(const io::CsvTable& table) {
  std::vector<ExperimentRow> rows;
  if (table.header.empty()) {
    return rows;
  }
  static const std::array<std::string, 11> kRequired = {
      "n_nodes",  "radius",      "n_signals",    "seed",
      "method",   "status",      "mean_degree",  "frobenius",
      "normalized_frobenius", "wasserstein", "total_messages"};
  for (const auto& name : kRequired) {
    if (!table.has_column(name)) {
      throw std::runtime_error("results CSV is missing column '" + name + "'");
    }
  }
  const auto col = [&](const std::string& name) { return table.column(name); };
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    const auto& row = table.rows[k];
    const std::size_t row_no = k + 1;
    ExperimentRow r;
    try {
      r.method = method_from_name(row[col("method")]);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("row " + std::to_string(row_no) + ": " + e.what());
    }
    const std::string& status = row[col("status")];
    if (status != "ok" && status != "error") {
      throw std::runtime_error("row " + std::to_string(row_no) + ": status must be ok or error, got '" +
                               status + "'");
    }
    r.ok = status == "ok";
    r.point.n_nodes = field_count(row, col("n_nodes"), row_no, "n_nodes");
    r.point.radius = field_double(row, col("radius"), row_no, "radius");
    r.point.n_signals = field_count(row, col("n_signals"), row_no, "n_signals");
    r.seed = field_count(row, col("seed"), row_no, "seed");
    if (r.ok) {
      r.mean_degree = field_double(row, col("mean_degree"), row_no, "mean_degree");
      bool phased = true;
      for (Phase p : kAllPhases) {
        const std::string name(phase_name(p));
        if (!table.has_column(name)) {
          phased = false;
          break;
        }
        r.ledger.charge(p, field_count(row, col(name), row_no, name));
      }
      const std::uint64_t total = field_count(row, col("total_messages"), row_no, "total_messages");
      if (!phased) {
        r.ledger = MessageLedger{};
        r.ledger.charge(Phase::WeightExchange, total);
      } else if (r.ledger.total() != total) {
        throw std::runtime_error("row " + std::to_string(row_no) +
                                 ": total_messages does not equal the sum of the phases");
      }
      r.frobenius = field_double(row, col("frobenius"), row_no, "frobenius");
      if (!row[col("normalized_frobenius")].empty()) {
        r.normalized_frobenius =
            field_double(row, col("normalized_frobenius"), row_no, "normalized_frobenius");
      }
      r.wasserstein = field_double(row, col("wasserstein"), row_no, "wasserstein");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<std::filesystem::path> emit_plots(const std::filesystem::path& results_csv,
                                              const std::filesystem::path& out_dir) {
  const io::CsvTable table = io::read_csv_file(results_csv);
  std::vector<ExperimentRow> rows;
  try {
    rows = parse_results(table);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(results_csv.string() + ": " + e.what());
  }

  std::vector<Method> methods;
  for (const auto& r : rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
  }
  std::sort(methods.begin(), methods.end());

  struct Metric {
    const char* title;
    double (*get)(const ExperimentRow&);
    bool (*defined)(const ExperimentRow&);
  };
  const std::array<Metric, 3> metrics = {{
      {"Frobenius", [](const ExperimentRow& r) { return r.frobenius; },
       [](const ExperimentRow&) { return true; }},
      {"normalized Frobenius",
       [](const ExperimentRow& r) { return r.normalized_frobenius.value_or(0.0); },
       [](const ExperimentRow& r) { return r.normalized_frobenius.has_value(); }},
      {"Wasserstein", [](const ExperimentRow& r) { return r.wasserstein; },
       [](const ExperimentRow&) { return true; }},
  }};

  std::vector<Panel> panels;
  for (const Metric& m : metrics) {
    Panel p;
    p.title = std::string(m.title) + " vs cost";
    p.x_label = "total messages";
    p.y_label = m.title;
    p.log_x = true;
    for (Method method : methods) {
      Series s;
      s.label = std::string(method_name(method));
      for (const auto& r : rows) {
        if (r.ok && r.method == method && m.defined(r)) {
          s.x.push_back(static_cast<double>(r.ledger.total()));
          s.y.push_back(m.get(r));
        }
      }
      p.series.push_back(std::move(s));
    }
    panels.push_back(std::move(p));
  }

  std::vector<std::filesystem::path> written;
  {
    const auto path = out_dir / "accuracy_vs_cost.svg";
    auto out = io::open_output(path);
    out << render_svg(panels);
    written.push_back(path);
  }

  const bool both = std::find(methods.begin(), methods.end(), Method::Distributed) != methods.end() &&
                    std::find(methods.begin(), methods.end(), Method::Centralized) != methods.end();
  if (both) {
    auto points = crossover_points(rows);
    std::sort(points.begin(), points.end(),
              [](const CrossoverPoint& a, const CrossoverPoint& b) { return a.mean_degree < b.mean_degree; });
    Panel p;
    p.title = "centralized minus distributed cost";
    p.x_label = "mean communication degree";
    p.y_label = "delta messages";
    p.zero_line = true;
    Series s;
    s.label = "delta cost";
    s.lines = true;
    for (const auto& cp : points) {
      s.x.push_back(cp.mean_degree);
      s.y.push_back(cp.delta());
    }
    p.series.push_back(std::move(s));
    const auto path = out_dir / "delta_cost_vs_degree.svg";
    auto out = io::open_output(path);
    out << render_svg({p});
    written.push_back(path);
  }
  return written;
}

} // namespace dgl::plot
