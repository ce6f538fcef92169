#pragma once

#include <ostream>
#include <string>

#include "warpharm/io.hpp"
#include "warpharm/spectrum.hpp"
#include "warpharm/warp.hpp"

namespace warpharm::cli {

struct JobConfig {
  std::string command;
  std::string family = "hyperbolic";
  double a = 1.0;
  double p = 2.0;
  double c = 1.0;
  std::string table;   // tabulated warp CSV
  std::string growth;  // exponential:A | power:P | powerlog:C
  int n = 2;
  int modes = 4;
  double r_max = 0.0;  // 0: command default (classify 100, solve/verify 20)
  double tol = 1e-8;
  std::string out = "out";
  std::string preset = "cos";  // constant | cos | bandlimited | smooth
  std::string boundary;        // samples CSV
  std::string coeffs;          // coefficient JSON
  std::string from;            // verify: directory written by solve
  bool at_infinity = false;
  std::string set = "acceptance";  // sweep: acceptance | corollary | power
};

enum ExitCode { kOk = 0, kError = 1, kDivergent = 2, kInconclusive = 3 };

WarpingFunction make_warp(const JobConfig& cfg);
BoundaryData make_boundary(const JobConfig& cfg);

io::Json config_json(const JobConfig& cfg);
JobConfig config_from_json(const io::Json& j, JobConfig base = {});

int cmd_classify(const JobConfig& cfg, std::ostream& log);
int cmd_solve(const JobConfig& cfg, std::ostream& log);
int cmd_verify(const JobConfig& cfg, std::ostream& log);
int cmd_sweep(const JobConfig& cfg, std::ostream& log);

// Parses argv and dispatches; library errors become exit code 1 with the
// message on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace warpharm::cli
