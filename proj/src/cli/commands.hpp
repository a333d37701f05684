#pragma once

#include <optional>
#include <string>

#include "cli/problem.hpp"

namespace dbr::cli {

enum class Format { text, json, pretty };

struct Options {
  std::string command;  // validate | residual | solve | brackets
  std::string file;
  int cutoff = 4;  // word-length truncation of coalgebra models
  int arity = 3;   // bracket table window
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<unsigned> seed;
  Format format = Format::text;
  bool timing = false;  // wall time breaks byte-identical output, so it is opt-in
};

// exit codes
inline constexpr int kPass = 0;
inline constexpr int kMathFailure = 1;
inline constexpr int kInputError = 2;
inline constexpr int kTruncation = 3;

struct Outcome {
  Json report;
  int exit_code = kPass;
};

// Never throws; every failure becomes a report with the matching exit code.
Outcome run(const Options& opt);
Outcome run_on(const Options& opt, const Problem& problem);

std::string render(const Json& report, Format format);

}  // namespace dbr::cli
