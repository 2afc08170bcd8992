#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dgl/dist_loop.hpp"
#include "dgl/synth.hpp"

namespace dgl {

enum class ExperimentKind { Single, SparseSweep, DenseSweep, SparsityCrossover, SignalSweep };
enum class Method { Distributed, Centralized, Baseline };
enum class Scale { Desk, Full };

std::string_view kind_name(ExperimentKind k);
ExperimentKind kind_from_name(std::string_view name);
std::string_view method_name(Method m);
Method method_from_name(std::string_view name);
std::string_view scale_name(Scale s);
Scale scale_from_name(std::string_view name);

/// Either radius = c / sqrt(N) for each coefficient c, or a fixed list of radii.
struct RadiusRule {
  std::vector<double> coefficients{2.0};
  std::vector<double> values;

  std::vector<double> radii_for(std::size_t n_nodes) const;
};

struct ExperimentSpec {
  std::string name = "single";
  ExperimentKind kind = ExperimentKind::Single;
  std::vector<std::size_t> n_list{100};
  RadiusRule radius;
  double removal_rate = 0.5;
  std::vector<std::size_t> m_list{1000};
  std::vector<std::uint64_t> seeds{1};
  std::vector<Method> methods{Method::Distributed, Method::Centralized, Method::Baseline};
  /// Weight range, signal noise and retry cap; size, radius, M and seed come
  /// from the grid.
  GenConfig generator;
  GlobalRunConfig run;
  BaselineConfig baseline;
  std::filesystem::path output_dir = "out";
  std::size_t jobs = 1;

  /// Throws std::invalid_argument on empty lists, duplicate seeds, etc.
  void validate() const;
};

ExperimentSpec preset(ExperimentKind kind, Scale scale = Scale::Desk);

struct GridPoint {
  std::size_t n_nodes = 0;
  double radius = 0.0;
  std::size_t n_signals = 0;
};

/// n-major, then radius, then M.
std::vector<GridPoint> expand_grid(const ExperimentSpec& spec);

struct ExperimentRow {
  GridPoint point;
  std::uint64_t seed = 0;
  Method method = Method::Distributed;
  bool ok = false;
  double mean_degree = 0.0;
  std::size_t comm_edges = 0;
  std::size_t data_edges = 0;
  std::size_t learned_edges = 0;
  MessageLedger ledger;
  std::uint64_t naive_init_messages = 0;
  std::size_t rounds = 0;
  bool converged = false;
  double frobenius = 0.0;
  std::optional<double> normalized_frobenius;
  double wasserstein = 0.0;
  std::optional<double> wasserstein_nonzero;
  std::string message;
};

/// Receives every successful run; may be called from worker threads.
using RunSink = std::function<void(const GridPoint&, std::uint64_t seed, Method,
                                   const RunResult&, const CommGraph&)>;

/// Runs one (grid point, seed) task: one row per entry of spec.methods, in order. A
/// failure in one method becomes a row with ok=false; the others still run.
std::vector<ExperimentRow> run_task(const ExperimentSpec& spec, const GridPoint& point,
                                    std::uint64_t seed, const RunSink& sink = {});

/// Same as run_task on an instance generated elsewhere.
std::vector<ExperimentRow> run_on_instance(const ExperimentSpec& spec,
                                           const SyntheticInstance& inst, std::uint64_t seed,
                                           const RunSink& sink = {});

/// All tasks, rows in grid order then seed order then method order,
/// independent of `jobs`.
std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec, const RunSink& sink = {});

std::string spec_to_json(const ExperimentSpec& spec, bool pretty = false);
ExperimentSpec spec_from_json(const std::string& text);

/// Reads a YAML file. `experiment` and `scale` pick the preset; every other
/// key present overrides it.
ExperimentSpec spec_from_yaml_file(const std::filesystem::path& path);
ExperimentSpec spec_from_yaml(const std::string& text);

// Output files. Each CSV begins with one "# config: <json>" line.
void write_rows_csv(std::ostream& os, const ExperimentSpec& spec,
                    const std::vector<ExperimentRow>& rows);
void write_summary_csv(std::ostream& os, const ExperimentSpec& spec,
                       const std::vector<ExperimentRow>& rows);
/// Per (N, radius, M): mean degree, mean costs of centralized and distributed
/// over seeds where both succeeded, and delta = centralized - distributed.
void write_crossover_csv(std::ostream& os, const ExperimentSpec& spec,
                         const std::vector<ExperimentRow>& rows);

struct CrossoverPoint {
  std::size_t n_nodes = 0;
  double radius = 0.0;
  std::size_t n_signals = 0;
  double mean_degree = 0.0;
  double centralized_cost = 0.0;
  double distributed_cost = 0.0;
  std::size_t runs = 0;
  double delta() const { return centralized_cost - distributed_cost; }
};
std::vector<CrossoverPoint> crossover_points(const std::vector<ExperimentRow>& rows);

/// results.csv, summary.csv, effective_config.json and, when both the
/// distributed and centralized methods ran, crossover.csv.
void write_experiment_outputs(const std::filesystem::path& dir, const ExperimentSpec& spec,
                              const std::vector<ExperimentRow>& rows);

} // namespace dgl
