#pragma once

namespace fluorep {

// Exit codes of the command line tool. Exhaustive and disjoint.
enum ExitCode {
  kExitOk = 0,
  kExitConfig = 1,     // usage, config parse, or validation failure
  kExitInfeasible = 2, // fidelity target unreachable
  kExitSimCap = 3,     // Monte Carlo attempt cap exceeded
  kExitVerify = 4,     // self-check failure
};

// Entry point shared by the binary and the tests. Subcommands:
//   rates <config> [--distance-km X] [--scheme NAME]
//   sweep <config> --dmin-km A --dmax-km B --points N [--out FILE]
//   simulate <config> [--segments N] [--trials T] [--seed S]
//   verify
// REPEATER_THREADS (positive integer) caps internal parallelism.
int run_cli(int argc, char** argv);

}  // namespace fluorep
