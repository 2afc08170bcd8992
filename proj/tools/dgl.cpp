#include <cstdlib>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acceptance.hpp"
#include "dgl/experiment.hpp"
#include "dgl/io.hpp"
#include "dgl/plot.hpp"
#include "dgl/synth.hpp"

namespace fs = std::filesystem;

namespace {

// Precedence: --out, then DGL_OUTPUT_DIR, then the config or preset value.
fs::path resolve_output(const std::string& flag, const fs::path& fallback) {
  if (!flag.empty()) {
    return flag;
  }
  if (const char* env = std::getenv("DGL_OUTPUT_DIR"); env && *env) {
    return env;
  }
  return fallback;
}

// Radius as it appears in run file names, e.g. 0.2 or 0.1414.
std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Overrides {
  std::string config;
  std::string experiment;
  std::string scale = "desk";
  std::vector<std::size_t> n;
  std::vector<std::size_t> m;
  std::vector<std::uint64_t> seeds;
  std::vector<double> radius_coef;
  std::vector<double> radius;
  std::optional<double> removal;
  std::vector<std::string> methods;
  std::optional<std::size_t> jobs;
  std::optional<std::size_t> round_cap;
  std::string out;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config, "YAML experiment file")->check(CLI::ExistingFile);
    app->add_option("--experiment", experiment,
                    "Preset: single, sparse_sweep, dense_sweep, sparsity_crossover, signal_sweep");
    app->add_option("--scale", scale, "Preset scale: desk or full");
    app->add_option("-n,--nodes", n, "Node counts");
    app->add_option("-m,--signals", m, "Signal counts");
    app->add_option("-s,--seeds", seeds, "Seeds");
    app->add_option("--radius-coef", radius_coef, "Radius coefficients c in c/sqrt(N)");
    app->add_option("--radius", radius, "Explicit radii");
    app->add_option("--removal", removal, "Edge removal rate");
    app->add_option("--methods", methods, "distributed, centralized, baseline");
    app->add_option("-j,--jobs", jobs, "Worker threads");
    app->add_option("--round-cap", round_cap, "Outer round cap of the distributed loop");
    app->add_option("-o,--out", out, "Output directory (overrides DGL_OUTPUT_DIR)");
  }

  dgl::ExperimentSpec build(dgl::ExperimentKind default_kind) const {
    dgl::ExperimentSpec spec;
    if (!config.empty()) {
      spec = dgl::spec_from_yaml_file(config);
    } else {
      spec = dgl::preset(experiment.empty() ? default_kind : dgl::kind_from_name(experiment),
                         dgl::scale_from_name(scale));
    }
    if (!n.empty()) spec.n_list = n;
    if (!m.empty()) spec.m_list = m;
    if (!seeds.empty()) spec.seeds = seeds;
    if (!radius_coef.empty()) spec.radius = {radius_coef, {}};
    if (!radius.empty()) spec.radius = {{}, radius};
    if (removal) spec.removal_rate = *removal;
    if (!methods.empty()) {
      spec.methods.clear();
      for (const auto& name : methods) {
        spec.methods.push_back(dgl::method_from_name(name));
      }
    }
    if (jobs) spec.jobs = *jobs;
    if (round_cap) spec.run.global_round_cap = *round_cap;
    spec.output_dir = resolve_output(out, spec.output_dir);
    spec.validate();
    return spec;
  }
};

void print_summary(const std::vector<dgl::ExperimentRow>& rows) {
  std::size_t failed = 0;
  for (const auto& r : rows) {
    failed += r.ok ? 0 : 1;
  }
  std::cout << rows.size() << " rows, " << failed << " failed\n";
}

int cmd_gen(const dgl::GenConfig& cfg, const std::string& out) {
  const fs::path dir = resolve_output(out, fs::path("out") / "instance");
  const auto inst = dgl::generate_instance(cfg);
  dgl::io::write_instance(dir, inst, cfg);
  std::cout << "N=" << inst.comm->n_nodes() << " comm_edges=" << inst.comm->edge_count()
            << " data_edges=" << inst.truth.weights.nonzero_count()
            << " mean_degree=" << inst.comm->mean_degree() << " -> " << dir.string() << '\n';
  return 0;
}

int cmd_run(const Overrides& ov, const std::string& instance_dir) {
  dgl::ExperimentSpec spec = ov.build(dgl::ExperimentKind::Single);
  std::mutex mu;
  const fs::path runs = spec.output_dir / "runs";
  const dgl::RunSink sink = [&](const dgl::GridPoint& p, std::uint64_t seed, dgl::Method m,
                                const dgl::RunResult& r, const dgl::CommGraph& g) {
    const std::string stem = "n" + std::to_string(p.n_nodes) + "_r" + short_number(p.radius) +
                             "_m" + std::to_string(p.n_signals) + "_s" + std::to_string(seed) + "_" +
                             std::string(dgl::method_name(m));
    std::lock_guard lock(mu);
    dgl::io::write_run_result(runs, stem, r, g);
  };

  std::vector<dgl::ExperimentRow> rows;
  if (!instance_dir.empty()) {
    const auto inst = dgl::io::read_instance(instance_dir);
    const auto seed = dgl::io::read_instance_config(instance_dir).seed;
    rows = dgl::run_on_instance(spec, inst, seed, sink);
  } else {
    if (dgl::expand_grid(spec).size() * spec.seeds.size() > 16) {
      std::cerr << "run: more than 16 tasks; use `dgl sweep` for grids\n";
      return 2;
    }
    rows = dgl::run_experiment(spec, sink);
  }
  dgl::write_experiment_outputs(spec.output_dir, spec, rows);
  print_summary(rows);
  std::cout << "-> " << spec.output_dir.string() << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed graph learning simulator"};
  app.require_subcommand(1);

  dgl::GenConfig gen_cfg;
  double gen_radius = 0.0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic instance and write it to disk");
  gen->add_option("-n,--nodes", gen_cfg.n_nodes, "Number of nodes")->capture_default_str();
  gen->add_option("--radius", gen_radius, "Communication radius (default 2/sqrt(N))");
  gen->add_option("--removal", gen_cfg.removal_rate, "Edge removal rate")->capture_default_str();
  gen->add_option("-m,--signals", gen_cfg.n_signals, "Number of signals")->capture_default_str();
  gen->add_option("-s,--seed", gen_cfg.seed, "Seed")->capture_default_str();
  gen->add_option("-o,--out", gen_out, "Output directory (overrides DGL_OUTPUT_DIR)");

  Overrides run_ov;
  std::string run_instance;
  auto* run = app.add_subcommand("run", "Run one experiment point (all methods)");
  run_ov.attach(run);
  run->add_option("--instance", run_instance, "Use an instance written by `gen`")
      ->check(CLI::ExistingDirectory);

  Overrides sweep_ov;
  bool no_plots = false;
  auto* sweep = app.add_subcommand("sweep", "Run an experiment grid");
  sweep_ov.attach(sweep);
  sweep->add_flag("--no-plots", no_plots, "Skip SVG output");

  std::string plot_csv;
  std::string plot_out;
  auto* plot = app.add_subcommand("plot", "Render SVG plots from a results CSV");
  plot->add_option("csv", plot_csv, "results.csv")->required()->check(CLI::ExistingFile);
  plot->add_option("-o,--out", plot_out, "Output directory (default: next to the CSV)");

  dgl::acceptance::SuiteOptions verify_opts;
  std::string verify_work;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--only", verify_opts.only, "Criterion ids to run");
  verify->add_option("-j,--jobs", verify_opts.jobs, "Worker threads")->capture_default_str();
  verify->add_option("--work", verify_work, "Scratch directory (overrides DGL_OUTPUT_DIR)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      if (gen_radius > 0.0) {
        gen_cfg.radius = gen_radius;
      }
      return cmd_gen(gen_cfg, gen_out);
    }
    if (*run) {
      return cmd_run(run_ov, run_instance);
    }
    if (*sweep) {
      const dgl::ExperimentSpec spec = sweep_ov.build(dgl::ExperimentKind::SparseSweep);
      const auto rows = dgl::run_experiment(spec);
      dgl::write_experiment_outputs(spec.output_dir, spec, rows);
      if (!no_plots) {
        dgl::plot::emit_plots(spec.output_dir / "results.csv", spec.output_dir);
      }
      print_summary(rows);
      std::cout << "-> " << spec.output_dir.string() << '\n';
      return 0;
    }
    if (*plot) {
      const fs::path out =
          plot_out.empty() ? fs::path(plot_csv).parent_path() : fs::path(plot_out);
      for (const auto& p : dgl::plot::emit_plots(plot_csv, out)) {
        std::cout << p.string() << '\n';
      }
      return 0;
    }
    if (*verify) {
      verify_opts.work_dir = resolve_output(verify_work, "acceptance_work");
      const auto results = dgl::acceptance::run_suite(verify_opts, std::cout);
      std::size_t failed = 0;
      for (const auto& r : results) {
        failed += r.passed ? 0 : 1;
      }
      std::cout << results.size() - failed << '/' << results.size() << " criteria passed\n";
      return failed == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
