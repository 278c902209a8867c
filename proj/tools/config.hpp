#pragma once

#include <string>
#include <vector>

#include "jdx/drivers.hpp"

namespace CLI {
class App;
}

namespace jdx::cli {

/// Flag-level run configuration. Kept as strings so a config serializes
/// back to the exact flag vocabulary it was parsed from.
struct RunConfig {
  std::string matrix;  // gen:<name> or file:<path>[:format]
  std::string method = "expanding";
  std::string variant = "ojd";
  std::string inner = "ge";      // ge or gmres:<steps>
  std::string extract = "rr";    // rr or harmonic:<re>[,<im>]
  bool refined = false;
  std::string target = "largest";  // largest, smallest-mag, nearest:<re>[,<im>]
  double tol = 1e-10;
  std::size_t max_outer = 500;
  std::size_t max_subspace = 64;
  std::size_t restart_size = 3;
  std::string initial = "ones";  // ones or file:<path>
  std::string out;               // history path; empty disables
  std::string format = "csv";    // csv or json
  std::string reference;         // eigenvector file for angle tracking

  bool operator==(const RunConfig&) const = default;
};

void attach_run_flags(CLI::App& app, RunConfig& cfg);

/// Serializes to a flag vector that reparses to an equal config.
std::vector<std::string> to_flags(const RunConfig& cfg);

/// Throws ParseError on malformed flag values.
SolverOptions solver_options(const RunConfig& cfg);

SparseMatrix load_source(const std::string& spec);

/// One complex entry per line: "re" or "re im". Skips blanks and lines
/// starting with % or #.
Vector read_vector_file(const std::string& path);

HistoryFormat history_format(const RunConfig& cfg);

/// $JDX_DATA_DIR/sherman4.rua (default data/); empty when unreadable.
std::string sherman4_location();

/// Executes a configured solve, prints the one-line summary, writes the
/// history when requested. Returns 0 on convergence, 2 otherwise.
int run_solve(const RunConfig& cfg);

/// Reruns the named benchmark table ("table1" or "table2"), writing one
/// history per variant row into out_dir plus a comparison summary.
/// Returns 0 when every row passes, 2 on a miss, 1 when table1's matrix
/// file is absent.
int reproduce(const std::string& table, const std::string& out_dir);

}  // namespace jdx::cli
