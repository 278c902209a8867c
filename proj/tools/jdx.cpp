#include <CLI11.hpp>
#include <cstdio>

#include "config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Sparse Jacobi-Davidson eigensolver experiment driver"};
  app.name("jdx");
  jdx::cli::RunConfig cfg;
  jdx::cli::attach_run_flags(app, cfg);

  std::string table;
  std::string out_dir = ".";
  CLI::App* rep = app.add_subcommand(
      "reproduce", "Re-run a benchmark table and compare against its "
                   "reference values");
  rep->add_option("table", table, "table1 (SHERMAN4) or table2 (tridiag200)")
      ->required()
      ->check(CLI::IsMember({"table1", "table2"}));
  rep->add_option("--out-dir", out_dir, "directory for per-row histories");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (rep->parsed()) return jdx::cli::reproduce(table, out_dir);
    if (cfg.matrix.empty()) {
      std::fputs(app.help().c_str(), stderr);
      return 1;
    }
    return jdx::cli::run_solve(cfg);
  } catch (const jdx::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
