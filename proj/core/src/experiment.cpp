#include "dgl/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "dgl/init_protocol.hpp"
#include "dgl/io.hpp"
#include "dgl/metrics.hpp"

namespace dgl {
namespace {

using nlohmann::json;

template <typename E, std::size_t K>
using NameTable = std::array<std::pair<E, std::string_view>, K>;

constexpr NameTable<ExperimentKind, 5> kKinds{{
    {ExperimentKind::Single, "single"},
    {ExperimentKind::SparseSweep, "sparse_sweep"},
    {ExperimentKind::DenseSweep, "dense_sweep"},
    {ExperimentKind::SparsityCrossover, "sparsity_crossover"},
    {ExperimentKind::SignalSweep, "signal_sweep"},
}};
constexpr NameTable<Method, 3> kMethods{{
    {Method::Distributed, "distributed"},
    {Method::Centralized, "centralized"},
    {Method::Baseline, "baseline"},
}};
constexpr NameTable<Scale, 2> kScales{{{Scale::Desk, "desk"}, {Scale::Full, "full"}}};
constexpr NameTable<OptimizerMode, 2> kModes{{{OptimizerMode::Adam, "adam"},
                                              {OptimizerMode::Sgd, "sgd"}}};
constexpr NameTable<DataNormalization, 2> kNorms{{{DataNormalization::NetworkSize, "network_size"},
                                                  {DataNormalization::Neighborhood, "neighborhood"}}};
constexpr NameTable<DataScaling, 2> kScalings{{{DataScaling::Raw, "raw"},
                                               {DataScaling::PerSignal, "per_signal"}}};
constexpr NameTable<GlobalStop, 2> kStops{{{GlobalStop::ProjectionGap, "projection_gap"},
                                           {GlobalStop::IterateChange, "iterate_change"}}};
constexpr NameTable<DownlinkModel, 2> kDownlinks{{{DownlinkModel::IncidentRows, "incident_rows"},
                                                  {DownlinkModel::FullBroadcast, "full_broadcast"}}};

template <typename E, std::size_t K>
std::string_view to_name(const NameTable<E, K>& table, E value) {
  for (const auto& [e, name] : table) {
    if (e == value) {
      return name;
    }
  }
  throw std::logic_error("unnamed enum value");
}

template <typename E, std::size_t K>
E from_name(const NameTable<E, K>& table, std::string_view name, std::string_view what) {
  for (const auto& [e, n] : table) {
    if (n == name) {
      return e;
    }
  }
  std::string choices;
  for (const auto& [e, n] : table) {
    choices += choices.empty() ? "" : ", ";
    choices += n;
  }
  throw std::invalid_argument("unknown " + std::string(what) + " '" + std::string(name) +
                              "' (expected one of: " + choices + ")");
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::uint64_t count) {
  std::vector<std::uint64_t> s(count);
  std::iota(s.begin(), s.end(), first);
  return s;
}

std::vector<double> coefficient_range(double lo, double hi, std::size_t points) {
  std::vector<double> c(points);
  for (std::size_t k = 0; k < points; ++k) {
    c[k] = points == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
  }
  return c;
}

json run_config_json(const GlobalRunConfig& c) {
  return {{"eta", c.eta},
          {"lr", c.lr},
          {"local_tol", c.local_tol},
          {"local_window", c.local_window},
          {"local_step_cap", c.local_step_cap},
          {"global_tol", c.global_tol},
          {"global_round_cap", c.global_round_cap},
          {"optimizer", to_name(kModes, c.optimizer_mode)},
          {"normalization", to_name(kNorms, c.normalization)},
          {"scaling", to_name(kScalings, c.scaling)},
          {"stop", to_name(kStops, c.stop)},
          {"central_step_cap", c.central_step_cap},
          {"downlink", to_name(kDownlinks, c.downlink)}};
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!j.is_object()) {
    throw std::invalid_argument(std::string(where) + " must be a mapping");
  }
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw std::invalid_argument("unknown key '" + item.key() + "' in " + std::string(where));
    }
  }
}

template <typename T>
void take(const json& j, std::string_view key, T& out) {
  const std::string k(key);
  if (j.contains(k)) {
    try {
      out = j.at(k).get<T>();
    } catch (const json::exception&) {
      throw std::invalid_argument("bad value for '" + k + "': " + j.at(k).dump());
    }
  }
}

template <typename E, std::size_t K>
void take_enum(const json& j, std::string_view key, const NameTable<E, K>& table, E& out) {
  const std::string k(key);
  if (j.contains(k)) {
    out = from_name(table, j.at(k).get<std::string>(), key);
  }
}

// A scalar or a list both become a list.
template <typename T>
void take_list(const json& j, std::string_view key, std::vector<T>& out) {
  const std::string k(key);
  if (!j.contains(k)) {
    return;
  }
  const json& v = j.at(k);
  try {
    out = v.is_array() ? v.get<std::vector<T>>() : std::vector<T>{v.get<T>()};
  } catch (const json::exception&) {
    throw std::invalid_argument("bad value for '" + k + "': " + v.dump());
  }
}

void apply_overrides(ExperimentSpec& spec, const json& j) {
  check_keys(j,
             {"experiment", "scale", "name", "n_nodes", "radius", "removal_rate", "n_signals",
              "seeds", "methods", "generator", "run", "baseline", "output_dir", "jobs"},
             "experiment config");
  take(j, "name", spec.name);
  take_list(j, "n_nodes", spec.n_list);
  if (j.contains("radius")) {
    const json& r = j.at("radius");
    check_keys(r, {"coefficients", "values"}, "radius");
    RadiusRule rule{{}, {}};
    take_list(r, "coefficients", rule.coefficients);
    take_list(r, "values", rule.values);
    spec.radius = rule;
  }
  take(j, "removal_rate", spec.removal_rate);
  take_list(j, "n_signals", spec.m_list);
  if (j.contains("seeds")) {
    const json& s = j.at("seeds");
    if (s.is_object()) {
      check_keys(s, {"first", "count"}, "seeds");
      spec.seeds = seed_range(s.value("first", std::uint64_t{1}), s.at("count").get<std::uint64_t>());
    } else {
      take_list(j, "seeds", spec.seeds);
    }
  }
  if (j.contains("methods")) {
    std::vector<std::string> names;
    take_list(j, "methods", names);
    spec.methods.clear();
    for (const auto& n : names) {
      spec.methods.push_back(from_name(kMethods, n, "method"));
    }
  }
  if (j.contains("generator")) {
    const json& g = j.at("generator");
    check_keys(g, {"weight_low", "weight_high", "signal_noise", "connect_retry_cap"}, "generator");
    take(g, "weight_low", spec.generator.weight_low);
    take(g, "weight_high", spec.generator.weight_high);
    take(g, "signal_noise", spec.generator.signal_noise);
    take(g, "connect_retry_cap", spec.generator.connect_retry_cap);
  }
  if (j.contains("run")) {
    const json& r = j.at("run");
    check_keys(r,
               {"eta", "lr", "local_tol", "local_window", "local_step_cap", "global_tol",
                "global_round_cap", "optimizer", "normalization", "scaling", "stop",
                "central_step_cap", "downlink"},
               "run");
    GlobalRunConfig& c = spec.run;
    take(r, "eta", c.eta);
    take(r, "lr", c.lr);
    take(r, "local_tol", c.local_tol);
    take(r, "local_window", c.local_window);
    take(r, "local_step_cap", c.local_step_cap);
    take(r, "global_tol", c.global_tol);
    take(r, "global_round_cap", c.global_round_cap);
    take_enum(r, "optimizer", kModes, c.optimizer_mode);
    take_enum(r, "normalization", kNorms, c.normalization);
    take_enum(r, "scaling", kScalings, c.scaling);
    take_enum(r, "stop", kStops, c.stop);
    take(r, "central_step_cap", c.central_step_cap);
    take_enum(r, "downlink", kDownlinks, c.downlink);
  }
  if (j.contains("baseline")) {
    const json& b = j.at("baseline");
    check_keys(b, {"alpha", "beta"}, "baseline");
    take(b, "alpha", spec.baseline.alpha);
    take(b, "beta", spec.baseline.beta);
  }
  if (j.contains("output_dir")) {
    spec.output_dir = j.at("output_dir").get<std::string>();
  }
  take(j, "jobs", spec.jobs);
}

ExperimentSpec spec_from_json_object(const json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("experiment config must be a mapping");
  }
  const ExperimentKind kind =
      j.contains("experiment") ? kind_from_name(j.at("experiment").get<std::string>())
                               : ExperimentKind::Single;
  const Scale scale =
      j.contains("scale") ? scale_from_name(j.at("scale").get<std::string>()) : Scale::Desk;
  ExperimentSpec spec = preset(kind, scale);
  apply_overrides(spec, j);
  spec.validate();
  return spec;
}

json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
  case YAML::NodeType::Null:
  case YAML::NodeType::Undefined:
    return nullptr;
  case YAML::NodeType::Sequence: {
    json arr = json::array();
    for (const auto& item : node) {
      arr.push_back(yaml_to_json(item));
    }
    return arr;
  }
  case YAML::NodeType::Map: {
    json obj = json::object();
    for (const auto& kv : node) {
      obj[kv.first.as<std::string>()] = yaml_to_json(kv.second);
    }
    return obj;
  }
  case YAML::NodeType::Scalar:
    break;
  }
  const std::string s = node.Scalar();
  if (node.Tag() == "!") {
    return s; // quoted
  }
  if (s == "true" || s == "false") {
    return s == "true";
  }
  std::uint64_t u = 0;
  if (YAML::convert<std::uint64_t>::decode(node, u) && s.find_first_of(".eE") == std::string::npos) {
    return u;
  }
  double d = 0.0;
  if (YAML::convert<double>::decode(node, d)) {
    return d;
  }
  return s;
}

std::string opt_field(const std::optional<double>& v) {
  return v ? io::format_double(*v) : std::string{};
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') {
      c = c == ',' ? ';' : ' ';
    }
  }
  return s;
}

void write_config_line(std::ostream& os, const ExperimentSpec& spec) {
  os << "# config: " << spec_to_json(spec) << '\n';
}

ExperimentRow base_row(const GridPoint& point, std::uint64_t seed, Method m) {
  ExperimentRow r;
  r.point = point;
  r.seed = seed;
  r.method = m;
  return r;
}

} // namespace

std::string_view kind_name(ExperimentKind k) { return to_name(kKinds, k); }
ExperimentKind kind_from_name(std::string_view name) { return from_name(kKinds, name, "experiment"); }
std::string_view method_name(Method m) { return to_name(kMethods, m); }
Method method_from_name(std::string_view name) { return from_name(kMethods, name, "method"); }
std::string_view scale_name(Scale s) { return to_name(kScales, s); }
Scale scale_from_name(std::string_view name) { return from_name(kScales, name, "scale"); }

std::vector<double> RadiusRule::radii_for(std::size_t n_nodes) const {
  if (!values.empty()) {
    return values;
  }
  std::vector<double> r;
  for (double c : coefficients) {
    r.push_back(c / std::sqrt(static_cast<double>(n_nodes)));
  }
  return r;
}

void ExperimentSpec::validate() const {
  if (n_list.empty() || m_list.empty() || seeds.empty() || methods.empty()) {
    throw std::invalid_argument("experiment: node, signal, seed and method lists must be nonempty");
  }
  if (radius.coefficients.empty() == radius.values.empty()) {
    throw std::invalid_argument("experiment: give exactly one of radius coefficients or values");
  }
  for (double v : radius.values.empty() ? radius.coefficients : radius.values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("experiment: radii must be positive");
    }
  }
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw std::invalid_argument("experiment: seeds must be distinct");
  }
  if (std::set<Method>(methods.begin(), methods.end()).size() != methods.size()) {
    throw std::invalid_argument("experiment: methods must be distinct");
  }
  if (std::find(n_list.begin(), n_list.end(), std::size_t{0}) != n_list.end() ||
      std::find(m_list.begin(), m_list.end(), std::size_t{0}) != m_list.end()) {
    throw std::invalid_argument("experiment: N and M must be at least 1");
  }
  if (jobs == 0) {
    throw std::invalid_argument("experiment: jobs must be at least 1");
  }
  GenConfig g = generator;
  g.removal_rate = removal_rate;
  g.validate();
  run.validate();
  if (!(baseline.alpha > 0.0) || !(baseline.beta > 0.0)) {
    throw std::invalid_argument("experiment: baseline alpha and beta must be positive");
  }
}

ExperimentSpec preset(ExperimentKind kind, Scale scale) {
  const bool full = scale == Scale::Full;
  ExperimentSpec s;
  s.kind = kind;
  s.name = std::string(kind_name(kind));
  switch (kind) {
  case ExperimentKind::Single:
    s.n_list = {100};
    s.m_list = {full ? 5000u : 1000u};
    break;
  case ExperimentKind::SparseSweep:
  case ExperimentKind::DenseSweep:
    s.n_list = full ? std::vector<std::size_t>{150, 350, 550, 750, 950}
                     : std::vector<std::size_t>{50, 100, 150, 200};
    s.radius.coefficients = {kind == ExperimentKind::DenseSweep ? 3.0 : 2.0};
    s.m_list = {full ? 5000u : 1000u};
    s.seeds = seed_range(1, 3);
    break;
  case ExperimentKind::SparsityCrossover:
    s.n_list = {full ? 500u : 200u};
    s.removal_rate = 0.7;
    s.radius.coefficients =
        full ? coefficient_range(2.0, 3.0, 9) : coefficient_range(1.75, 3.5, 8);
    s.m_list = {5000};
    s.seeds = seed_range(1, 3);
    s.methods = {Method::Distributed, Method::Centralized};
    break;
  case ExperimentKind::SignalSweep:
    s.n_list = {100};
    s.m_list = full ? std::vector<std::size_t>{1000, 2000, 3000, 4000, 5000}
                     : std::vector<std::size_t>{200, 400, 600, 800, 1000};
    s.seeds = seed_range(1, full ? 10 : 3);
    break;
  }
  s.output_dir = std::filesystem::path("out") / s.name;
  return s;
}

std::vector<GridPoint> expand_grid(const ExperimentSpec& spec) {
  std::vector<GridPoint> grid;
  for (std::size_t n : spec.n_list) {
    for (double r : spec.radius.radii_for(n)) {
      for (std::size_t m : spec.m_list) {
        grid.push_back({n, r, m});
      }
    }
  }
  return grid;
}

std::vector<ExperimentRow> run_task(const ExperimentSpec& spec, const GridPoint& point,
                                    std::uint64_t seed, const RunSink& sink) {
  GenConfig gc = spec.generator;
  gc.n_nodes = point.n_nodes;
  gc.radius = point.radius;
  gc.removal_rate = spec.removal_rate;
  gc.n_signals = point.n_signals;
  gc.seed = seed;

  SyntheticInstance inst;
  try {
    inst = generate_instance(gc);
  } catch (const std::exception& e) {
    std::vector<ExperimentRow> rows;
    for (Method m : spec.methods) {
      ExperimentRow r = base_row(point, seed, m);
      r.message = std::string("generation failed: ") + e.what();
      rows.push_back(std::move(r));
    }
    return rows;
  }
  return run_on_instance(spec, inst, seed, sink);
}

std::vector<ExperimentRow> run_on_instance(const ExperimentSpec& spec,
                                           const SyntheticInstance& inst, std::uint64_t seed,
                                           const RunSink& sink) {
  std::vector<ExperimentRow> rows;
  const GridPoint point{inst.comm->n_nodes(), inst.comm->radius(), inst.signals.n_signals()};
  const CommGraph& g = *inst.comm;
  const std::uint64_t naive = naive_initialization_cost(g, point.n_signals);
  std::optional<EdgeDifferences> central_z;

  for (Method m : spec.methods) {
    ExperimentRow row = base_row(point, seed, m);
    row.mean_degree = g.mean_degree();
    row.comm_edges = g.edge_count();
    row.data_edges = inst.truth.weights.nonzero_count();
    row.naive_init_messages = naive;
    try {
      RunResult result;
      MessageLedger recount;
      if (m == Method::Distributed) {
        MessageLedger init_ledger;
        InitResult init = run_initialization(g, inst.signals, init_ledger);
        result = run_distributed(g, init.z, spec.run);
        result.ledger += init_ledger;
        recount = init.recount;
        recount += result.recount;
        result.recount = recount;
      } else {
        // The center holds every signal and computes z itself.
        if (!central_z) {
          central_z = edge_differences(inst.signals, g);
        }
        result = m == Method::Centralized
                     ? run_centralized(g, *central_z, spec.run, point.n_signals)
                     : run_baseline_logdegree(g, *central_z, spec.baseline, spec.run,
                                              point.n_signals);
        recount = result.recount;
      }
      if (!(recount == result.ledger)) {
        throw DiagnosticError("transport recount disagrees with the ledger");
      }
      if (sink) {
        sink(point, seed, m, result, g);
      }
      const MetricsReport rep = make_report(result.learned, inst.truth.weights, g, result.ledger);
      row.ok = true;
      row.learned_edges = result.learned.nonzero_count();
      row.ledger = result.ledger;
      row.rounds = result.rounds_used;
      row.converged = result.converged;
      row.frobenius = rep.frobenius;
      row.normalized_frobenius = rep.normalized_frobenius;
      row.wasserstein = rep.wasserstein;
      row.wasserstein_nonzero = rep.wasserstein_nonzero;
      if (!rep.normalized_frobenius) {
        row.message = "learned graph is empty; normalized metrics undefined";
      }
    } catch (const std::exception& e) {
      row.ok = false;
      row.message = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec, const RunSink& sink) {
  spec.validate();
  struct Task {
    GridPoint point;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const GridPoint& p : expand_grid(spec)) {
    for (std::uint64_t s : spec.seeds) {
      tasks.push_back({p, s});
    }
  }
  std::vector<std::vector<ExperimentRow>> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      results[k] = run_task(spec, tasks[k].point, tasks[k].seed, sink);
    }
  };
  const std::size_t n_threads = std::min(spec.jobs, tasks.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) {
      pool.emplace_back(worker);
    }
  }
  std::vector<ExperimentRow> rows;
  for (auto& r : results) {
    std::move(r.begin(), r.end(), std::back_inserter(rows));
  }
  return rows;
}

std::string spec_to_json(const ExperimentSpec& spec, bool pretty) {
  json j;
  j["experiment"] = kind_name(spec.kind);
  j["name"] = spec.name;
  j["n_nodes"] = spec.n_list;
  j["radius"] = spec.radius.values.empty() ? json{{"coefficients", spec.radius.coefficients}}
                                           : json{{"values", spec.radius.values}};
  j["removal_rate"] = spec.removal_rate;
  j["n_signals"] = spec.m_list;
  j["seeds"] = spec.seeds;
  json methods = json::array();
  for (Method m : spec.methods) {
    methods.push_back(method_name(m));
  }
  j["methods"] = methods;
  j["generator"] = {{"weight_low", spec.generator.weight_low},
                    {"weight_high", spec.generator.weight_high},
                    {"signal_noise", spec.generator.signal_noise},
                    {"connect_retry_cap", spec.generator.connect_retry_cap}};
  j["run"] = run_config_json(spec.run);
  j["baseline"] = {{"alpha", spec.baseline.alpha}, {"beta", spec.baseline.beta}};
  return pretty ? j.dump(2) : j.dump();
}

ExperimentSpec spec_from_json(const std::string& text) {
  return spec_from_json_object(json::parse(text));
}

ExperimentSpec spec_from_yaml(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument(std::string("invalid YAML: ") + e.what());
  }
  if (!root || root.IsNull()) {
    return spec_from_json_object(json::object());
  }
  return spec_from_json_object(yaml_to_json(root));
}

ExperimentSpec spec_from_yaml_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return spec_from_yaml(ss.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

void write_rows_csv(std::ostream& os, const ExperimentSpec& spec,
                    const std::vector<ExperimentRow>& rows) {
  write_config_line(os, spec);
  os << "experiment,n_nodes,radius,removal_rate,n_signals,seed,method,status,mean_degree,"
        "comm_edges,data_edges,learned_edges,init_signals,init_results,weight_exchange,"
        "central_up,central_down,total_messages,naive_init_messages,rounds,converged,"
        "frobenius,normalized_frobenius,wasserstein,wasserstein_nonzero,message\n";
  for (const ExperimentRow& r : rows) {
    os << spec.name << ',' << r.point.n_nodes << ',' << io::format_double(r.point.radius) << ','
       << io::format_double(spec.removal_rate) << ',' << r.point.n_signals << ',' << r.seed << ','
       << method_name(r.method) << ',' << (r.ok ? "ok" : "error") << ',';
    if (r.ok) {
      os << io::format_double(r.mean_degree) << ',' << r.comm_edges << ',' << r.data_edges << ','
         << r.learned_edges;
      for (Phase p : kAllPhases) {
        os << ',' << r.ledger.count(p);
      }
      os << ',' << r.ledger.total() << ',' << r.naive_init_messages << ',' << r.rounds << ','
         << (r.converged ? 1 : 0) << ',' << io::format_double(r.frobenius) << ','
         << opt_field(r.normalized_frobenius) << ',' << io::format_double(r.wasserstein) << ','
         << opt_field(r.wasserstein_nonzero);
    } else {
      os << std::string(16, ',');
    }
    os << ',' << sanitize(r.message) << '\n';
  }
}

void write_summary_csv(std::ostream& os, const ExperimentSpec& spec,
                       const std::vector<ExperimentRow>& rows) {
  struct Acc {
    std::size_t runs = 0, failures = 0, converged = 0, nf_runs = 0, wn_runs = 0;
    double degree = 0, cost = 0, rounds = 0, frob = 0, nf = 0, wass = 0, wn = 0;
  };
  using Key = std::tuple<std::size_t, double, std::size_t, Method>;
  std::vector<Key> order;
  std::map<Key, Acc> acc;
  for (const ExperimentRow& r : rows) {
    const Key key{r.point.n_nodes, r.point.radius, r.point.n_signals, r.method};
    if (!acc.contains(key)) {
      order.push_back(key);
    }
    Acc& a = acc[key];
    if (!r.ok) {
      ++a.failures;
      continue;
    }
    ++a.runs;
    a.converged += r.converged ? 1 : 0;
    a.degree += r.mean_degree;
    a.cost += static_cast<double>(r.ledger.total());
    a.rounds += static_cast<double>(r.rounds);
    a.frob += r.frobenius;
    a.wass += r.wasserstein;
    if (r.normalized_frobenius) {
      a.nf += *r.normalized_frobenius;
      ++a.nf_runs;
    }
    if (r.wasserstein_nonzero) {
      a.wn += *r.wasserstein_nonzero;
      ++a.wn_runs;
    }
  }
  write_config_line(os, spec);
  os << "experiment,n_nodes,radius,removal_rate,n_signals,method,runs,failures,converged_runs,"
        "mean_degree,total_messages,rounds,frobenius,normalized_frobenius,"
        "normalized_frobenius_runs,wasserstein,wasserstein_nonzero\n";
  auto mean = [](double sum, std::size_t n) {
    return n == 0 ? std::string{} : io::format_double(sum / static_cast<double>(n));
  };
  for (const Key& key : order) {
    const Acc& a = acc.at(key);
    os << spec.name << ',' << std::get<0>(key) << ',' << io::format_double(std::get<1>(key)) << ','
       << io::format_double(spec.removal_rate) << ',' << std::get<2>(key) << ','
       << method_name(std::get<3>(key)) << ',' << a.runs << ',' << a.failures << ','
       << a.converged << ',' << mean(a.degree, a.runs) << ',' << mean(a.cost, a.runs) << ','
       << mean(a.rounds, a.runs) << ',' << mean(a.frob, a.runs) << ',' << mean(a.nf, a.nf_runs)
       << ',' << a.nf_runs << ',' << mean(a.wass, a.runs) << ',' << mean(a.wn, a.wn_runs) << '\n';
  }
}

std::vector<CrossoverPoint> crossover_points(const std::vector<ExperimentRow>& rows) {
  using Key = std::tuple<std::size_t, double, std::size_t, std::uint64_t>;
  std::map<Key, std::pair<const ExperimentRow*, const ExperimentRow*>> pairs;
  std::vector<std::tuple<std::size_t, double, std::size_t>> order;
  for (const ExperimentRow& r : rows) {
    if (!r.ok || r.method == Method::Baseline) {
      continue;
    }
    const auto point = std::make_tuple(r.point.n_nodes, r.point.radius, r.point.n_signals);
    if (std::find(order.begin(), order.end(), point) == order.end()) {
      order.push_back(point);
    }
    auto& slot = pairs[{r.point.n_nodes, r.point.radius, r.point.n_signals, r.seed}];
    (r.method == Method::Distributed ? slot.first : slot.second) = &r;
  }
  std::vector<CrossoverPoint> out;
  for (const auto& [n, radius, m] : order) {
    CrossoverPoint cp{n, radius, m};
    for (const auto& [key, pr] : pairs) {
      if (std::get<0>(key) != n || std::get<1>(key) != radius || std::get<2>(key) != m ||
          !pr.first || !pr.second) {
        continue;
      }
      ++cp.runs;
      cp.mean_degree += pr.first->mean_degree;
      cp.distributed_cost += static_cast<double>(pr.first->ledger.total());
      cp.centralized_cost += static_cast<double>(pr.second->ledger.total());
    }
    if (cp.runs == 0) {
      continue;
    }
    const double k = static_cast<double>(cp.runs);
    cp.mean_degree /= k;
    cp.distributed_cost /= k;
    cp.centralized_cost /= k;
    out.push_back(cp);
  }
  return out;
}

void write_crossover_csv(std::ostream& os, const ExperimentSpec& spec,
                         const std::vector<ExperimentRow>& rows) {
  write_config_line(os, spec);
  os << "experiment,n_nodes,radius,n_signals,runs,mean_degree,centralized_cost,distributed_cost,"
        "delta_cost\n";
  for (const CrossoverPoint& cp : crossover_points(rows)) {
    os << spec.name << ',' << cp.n_nodes << ',' << io::format_double(cp.radius) << ','
       << cp.n_signals << ',' << cp.runs << ',' << io::format_double(cp.mean_degree) << ','
       << io::format_double(cp.centralized_cost) << ',' << io::format_double(cp.distributed_cost)
       << ',' << io::format_double(cp.delta()) << '\n';
  }
}

void write_experiment_outputs(const std::filesystem::path& dir, const ExperimentSpec& spec,
                              const std::vector<ExperimentRow>& rows) {
  {
    auto out = io::open_output(dir / "results.csv");
    write_rows_csv(out, spec, rows);
  }
  {
    auto out = io::open_output(dir / "summary.csv");
    write_summary_csv(out, spec, rows);
  }
  const bool both = std::find(spec.methods.begin(), spec.methods.end(), Method::Distributed) !=
                        spec.methods.end() &&
                    std::find(spec.methods.begin(), spec.methods.end(), Method::Centralized) !=
                        spec.methods.end();
  if (both) {
    auto out = io::open_output(dir / "crossover.csv");
    write_crossover_csv(out, spec, rows);
  }
  {
    json j = json::parse(spec_to_json(spec));
    j["output_dir"] = spec.output_dir.string();
    j["jobs"] = spec.jobs;
    auto out = io::open_output(dir / "effective_config.json");
    out << j.dump(2) << '\n';
  }
}

} // namespace dgl
