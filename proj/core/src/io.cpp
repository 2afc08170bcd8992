#include "dgl/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dgl::io {
namespace {

using nlohmann::json;

double parse_double(const std::string& s, std::string_view what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::runtime_error("expected a number for " + std::string(what) + ", got '" + s + "'");
  }
  if (used != s.size()) {
    throw std::runtime_error("trailing characters in " + std::string(what) + ": '" + s + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& s, std::string_view what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error("expected an unsigned integer for " + std::string(what) + ", got '" +
                             s + "'");
  }
  return v;
}

json gen_config_to_json(const GenConfig& cfg) {
  json j;
  j["n_nodes"] = cfg.n_nodes;
  j["radius"] = cfg.effective_radius();
  j["removal_rate"] = cfg.removal_rate;
  j["n_signals"] = cfg.n_signals;
  j["seed"] = cfg.seed;
  j["weight_low"] = cfg.weight_low;
  j["weight_high"] = cfg.weight_high;
  j["signal_noise"] = cfg.signal_noise;
  j["connect_retry_cap"] = cfg.connect_retry_cap;
  return j;
}

json ledger_to_json(const MessageLedger& l) {
  json j = json::object();
  for (Phase p : kAllPhases) {
    j[std::string(phase_name(p))] = l.count(p);
  }
  j["total"] = l.total();
  return j;
}

} // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r') {
    out.back().pop_back();
  }
  return out;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) {
      return k;
    }
  }
  throw std::out_of_range("CSV has no column '" + std::string(name) + "'");
}

bool CsvTable::has_column(std::string_view name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (!have_header) {
      if (line.empty()) {
        continue;
      }
      if (line.front() == '#') {
        t.comments.push_back(line.size() > 2 ? line.substr(2) : std::string{});
        continue;
      }
      t.header = split_csv_line(line);
      have_header = true;
      continue;
    }
    if (line.empty()) {
      continue;
    }
    auto fields = split_csv_line(line);
    if (fields.size() != t.header.size()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(t.header.size()) + " fields, found " +
                               std::to_string(fields.size()));
    }
    t.rows.push_back(std::move(fields));
  }
  return t;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  try {
    return read_csv(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

std::string gen_config_json(const GenConfig& cfg) { return gen_config_to_json(cfg).dump(); }

GenConfig gen_config_from_json(const std::string& text) {
  const json j = json::parse(text);
  GenConfig cfg;
  cfg.n_nodes = j.at("n_nodes").get<std::size_t>();
  cfg.radius = j.at("radius").get<double>();
  cfg.removal_rate = j.at("removal_rate").get<double>();
  cfg.n_signals = j.at("n_signals").get<std::size_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.weight_low = j.value("weight_low", cfg.weight_low);
  cfg.weight_high = j.value("weight_high", cfg.weight_high);
  cfg.signal_noise = j.value("signal_noise", cfg.signal_noise);
  cfg.connect_retry_cap = j.value("connect_retry_cap", cfg.connect_retry_cap);
  return cfg;
}

void write_instance(const std::filesystem::path& dir, const SyntheticInstance& inst,
                    const GenConfig& cfg) {
  const CommGraph& g = *inst.comm;
  {
    auto out = open_output(dir / "nodes.csv");
    out << "node,x,y\n";
    for (NodeId i = 0; i < g.n_nodes(); ++i) {
      out << i << ',' << format_double(g.positions()[i].x) << ','
          << format_double(g.positions()[i].y) << '\n';
    }
  }
  {
    auto out = open_output(dir / "comm_edges.csv");
    out << "u,v\n";
    for (const Edge& e : g.edges()) {
      out << e.u << ',' << e.v << '\n';
    }
  }
  {
    auto out = open_output(dir / "data_edges.csv");
    out << "u,v,weight\n";
    for (const Edge& e : g.edges()) {
      const double w = inst.truth.weights(e.u, e.v);
      if (w > 0.0) {
        out << e.u << ',' << e.v << ',' << format_double(w) << '\n';
      }
    }
  }
  {
    auto out = open_output(dir / "signals.csv");
    out << "node";
    for (std::size_t k = 0; k < inst.signals.n_signals(); ++k) {
      out << ",s" << k;
    }
    out << '\n';
    for (NodeId i = 0; i < inst.signals.n_nodes(); ++i) {
      out << i;
      for (double v : inst.signals.row(i)) {
        out << ',' << format_double(v);
      }
      out << '\n';
    }
  }
  {
    json meta;
    meta["config"] = gen_config_to_json(cfg);
    meta["comm_edges"] = g.edge_count();
    meta["data_edges"] = inst.truth.weights.nonzero_count();
    meta["mean_degree"] = g.mean_degree();
    auto out = open_output(dir / "instance.json");
    out << meta.dump(2) << '\n';
  }
}

GenConfig read_instance_config(const std::filesystem::path& dir) {
  std::ifstream meta_in(dir / "instance.json");
  if (!meta_in) {
    throw std::runtime_error("cannot open " + (dir / "instance.json").string());
  }
  const json meta = json::parse(meta_in);
  return gen_config_from_json(meta.at("config").dump());
}

SyntheticInstance read_instance(const std::filesystem::path& dir) {
  const GenConfig cfg = read_instance_config(dir);

  const CsvTable nodes = read_csv_file(dir / "nodes.csv");
  std::vector<Point> positions(nodes.rows.size());
  for (const auto& row : nodes.rows) {
    const auto id = parse_uint(row.at(nodes.column("node")), "node");
    if (id >= positions.size()) {
      throw std::runtime_error("nodes.csv: node id out of range");
    }
    positions[id] = {parse_double(row.at(nodes.column("x")), "x"),
                     parse_double(row.at(nodes.column("y")), "y")};
  }
  auto comm = std::make_shared<const CommGraph>(positions, cfg.effective_radius());

  const CsvTable comm_edges = read_csv_file(dir / "comm_edges.csv");
  std::vector<Edge> listed;
  for (const auto& row : comm_edges.rows) {
    listed.push_back({static_cast<NodeId>(parse_uint(row.at(0), "u")),
                      static_cast<NodeId>(parse_uint(row.at(1), "v"))});
  }
  if (listed != comm->edges()) {
    throw std::runtime_error("comm_edges.csv does not match the radius rule on nodes.csv");
  }

  UpperWeights truth(comm->n_nodes());
  const CsvTable data_edges = read_csv_file(dir / "data_edges.csv");
  for (const auto& row : data_edges.rows) {
    truth.set(static_cast<NodeId>(parse_uint(row.at(0), "u")),
              static_cast<NodeId>(parse_uint(row.at(1), "v")), parse_double(row.at(2), "weight"));
  }
  truth.check_support(*comm);

  const CsvTable sig = read_csv_file(dir / "signals.csv");
  const std::size_t m = sig.header.size() - 1;
  std::vector<double> values(comm->n_nodes() * m);
  if (sig.rows.size() != comm->n_nodes()) {
    throw std::runtime_error("signals.csv: expected one row per node");
  }
  for (const auto& row : sig.rows) {
    const auto id = parse_uint(row.at(0), "node");
    if (id >= comm->n_nodes()) {
      throw std::runtime_error("signals.csv: node id out of range");
    }
    for (std::size_t k = 0; k < m; ++k) {
      values[id * m + k] = parse_double(row[k + 1], "signal value");
    }
  }
  return SyntheticInstance{comm, DataGraph{std::move(truth), comm},
                           SignalMatrix(comm->n_nodes(), m, std::move(values))};
}

void write_learned_edges(std::ostream& os, const UpperWeights& w, const CommGraph& g) {
  os << "u,v,weight\n";
  for (const Edge& e : g.edges()) {
    os << e.u << ',' << e.v << ',' << format_double(w(e.u, e.v)) << '\n';
  }
}

void write_trace(std::ostream& os, const std::vector<RoundTrace>& trace) {
  os << "round,objective_start,objective_local,objective_projected,max_projection_change,"
        "max_iterate_change,local_steps_max,local_steps_total\n";
  for (const RoundTrace& t : trace) {
    os << t.round << ',' << format_double(t.objective_start) << ','
       << format_double(t.objective_local) << ',' << format_double(t.objective_projected) << ','
       << format_double(t.max_projection_change) << ',' << format_double(t.max_iterate_change)
       << ',' << t.local_steps_max << ',' << t.local_steps_total << '\n';
  }
}

std::string run_result_json(const RunResult& r, const CommGraph& g) {
  json j;
  j["rounds_used"] = r.rounds_used;
  j["converged"] = r.converged;
  j["max_asymmetry"] = r.max_asymmetry;
  j["ledger"] = ledger_to_json(r.ledger);
  j["recount"] = ledger_to_json(r.recount);
  json edges = json::array();
  for (const Edge& e : g.edges()) {
    edges.push_back({e.u, e.v, r.learned(e.u, e.v)});
  }
  j["edges"] = std::move(edges);
  json trace = json::array();
  for (const RoundTrace& t : r.trace) {
    trace.push_back({{"round", t.round},
                     {"objective_start", t.objective_start},
                     {"objective_local", t.objective_local},
                     {"objective_projected", t.objective_projected},
                     {"max_projection_change", t.max_projection_change},
                     {"max_iterate_change", t.max_iterate_change},
                     {"local_steps_max", t.local_steps_max},
                     {"local_steps_total", t.local_steps_total}});
  }
  j["trace"] = std::move(trace);
  return j.dump(2);
}

void write_run_result(const std::filesystem::path& dir, const std::string& stem,
                      const RunResult& r, const CommGraph& g) {
  {
    auto out = open_output(dir / (stem + "_edges.csv"));
    write_learned_edges(out, r.learned, g);
  }
  {
    auto out = open_output(dir / (stem + "_ledger.csv"));
    r.ledger.write_csv(out);
  }
  {
    auto out = open_output(dir / (stem + "_trace.csv"));
    write_trace(out, r.trace);
  }
  {
    auto out = open_output(dir / (stem + "_result.json"));
    out << run_result_json(r, g) << '\n';
  }
}

} // namespace dgl::io
