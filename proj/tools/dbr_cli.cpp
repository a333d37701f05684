#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace dbr::cli;
  CLI::App app{"Maurer-Cartan checks, residuals, solver and derived-bracket tables for deformation problems"};
  app.set_version_flag("--version", "dbr 1.0");
  Options opt;
  bool json = false, pretty = false;
  app.add_option("command", opt.command, "validate | residual | solve | brackets")
      ->required()
      ->check(CLI::IsMember({"validate", "residual", "solve", "brackets"}));
  app.add_option("file", opt.file, "problem file (JSON)")->required();
  app.add_option("--cutoff", opt.cutoff, "word-length truncation of coalgebra models")
      ->check(CLI::Range(1, 8))
      ->capture_default_str();
  app.add_option("--arity", opt.arity, "largest arity listed by brackets")->capture_default_str();
  app.add_option("--tol", opt.tol, "solver residual tolerance");
  app.add_option("--max-iter", opt.max_iter, "solver Newton iterations per seed")->check(CLI::Range(1, 100000));
  app.add_option("--seed", opt.seed, "solver random seed");
  auto* jf = app.add_flag("--json", json, "one-line JSON report");
  app.add_flag("--pretty", pretty, "indented JSON report")->excludes(jf);
  app.add_flag("--timing", opt.timing, "add wall time to the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }
  if (json) opt.format = Format::json;
  if (pretty) opt.format = Format::pretty;

  const Outcome o = run(opt);
  std::cout << render(o.report, opt.format);
  if (o.report.contains("error")) std::cerr << "dbr: " << o.report["error"].get<std::string>() << "\n";
  return o.exit_code;
}
