#pragma once

#include <vector>

#include "fluorep/config.hpp"
#include "fluorep/rates.hpp"

namespace fluorep {

struct GridPoint {
  int nesting_s = 0;
  double q = 0.0;
  double rate_hz = 0.0;
  double fidelity = 0.0;
  bool feasible = false;
};

struct OptimizationResult {
  RateResult best;
  std::vector<GridPoint> grid_trace; // one entry per examined nesting level
  bool feasible = false;
};

// Best (nesting_s, q) at one total distance: exhaustive scan of
// s in [0, s_max], with q set to max_q_for_fidelity at each s and the rate
// from the analytic recursion. Ties prefer the smaller s. When
// optimizer.co_optimize_pir is set and PIR applies, each level also scans a
// fixed multiplier grid around the interruption loss target. The base Config
// supplies everything except total_km, scheme, and the target.
OptimizationResult optimize_at_distance(double total_km, Scheme scheme,
                                        double target_fidelity, const Config& base);

struct SchemePoint {
  double rate_hz = 0.0;
  int segments = 0;
  double q = 0.0;
  bool feasible = false;
};

struct SweepRow {
  double distance_km = 0.0;
  SchemePoint new_single;
  SchemePoint new_dual;
  SchemePoint ref_dlcz;
  SchemePoint ref_dual;
  double ratio_single = 0.0; // new_single / ref_dlcz, 0 when undefined
  double ratio_dual = 0.0;   // new_dual / ref_dual, 0 when undefined
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

// Optimized rates for all four schemes over a log-spaced distance grid.
// Per-point optimizer failures mark the point infeasible (rate 0) without
// aborting the sweep. max_threads = 0 means hardware default; the result is
// identical for every thread count.
SweepTable sweep_distances(double dmin_km, double dmax_km, int points,
                           const Config& base, int max_threads = 0);

}  // namespace fluorep
