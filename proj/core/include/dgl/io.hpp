#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "dgl/dist_loop.hpp"
#include "dgl/synth.hpp"

namespace dgl::io {

/// Decimal text that reads back to the same double ("%.17g").
std::string format_double(double v);

/// Splits one CSV line on commas. No quoting: none of our fields need it.
std::vector<std::string> split_csv_line(std::string_view line);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// Text after "# " on leading comment lines.
  std::vector<std::string> comments;

  /// Index of a header column; throws std::out_of_range when absent.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;
};

/// Lines starting with '#' before the header are collected as comments.
/// Throws std::runtime_error naming the line when a row has the wrong arity.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::filesystem::path& path);

// Instance files written by `dgl gen`:
//   nodes.csv        node,x,y
//   comm_edges.csv   u,v              (u < v, lexicographic)
//   data_edges.csv   u,v,weight       (ground-truth edges with weight > 0)
//   signals.csv      node,s0,...,s{M-1}
//   instance.json    generator configuration and counts
void write_instance(const std::filesystem::path& dir, const SyntheticInstance& inst,
                    const GenConfig& cfg);

/// Reads the files above. The communication graph is rebuilt from positions
/// and radius and must reproduce comm_edges.csv exactly.
SyntheticInstance read_instance(const std::filesystem::path& dir);
GenConfig read_instance_config(const std::filesystem::path& dir);

std::string gen_config_json(const GenConfig& cfg);
GenConfig gen_config_from_json(const std::string& text);

// Run artifacts, one set per method, all prefixed with `stem`:
//   <stem>_edges.csv   u,v,weight over every communication edge
//   <stem>_ledger.csv  phase,count
//   <stem>_trace.csv   round,objective_start,objective_local,objective_projected,
//                      max_projection_change,max_iterate_change,local_steps_max,
//                      local_steps_total
//   <stem>_result.json all of the above plus rounds_used, converged,
//                      max_asymmetry and the transport recount
void write_learned_edges(std::ostream& os, const UpperWeights& w, const CommGraph& g);
void write_trace(std::ostream& os, const std::vector<RoundTrace>& trace);
std::string run_result_json(const RunResult& r, const CommGraph& g);
void write_run_result(const std::filesystem::path& dir, const std::string& stem,
                      const RunResult& r, const CommGraph& g);

/// Opens a file for writing, creating parent directories; throws on failure.
std::ofstream open_output(const std::filesystem::path& path);

} // namespace dgl::io
