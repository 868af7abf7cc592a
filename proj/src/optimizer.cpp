#include "fluorep/optimizer.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "fluorep/physics.hpp"

namespace fluorep {

namespace {

struct PointEval {
  bool ok = false;
  double rate = 0.0;
  double fidelity = 0.0;
  LinkParams link;
  SchemeModel model;
  FidelityBudget budget;
};

// Largest q meeting the target at a fixed interruption loss (the override
// distinguishes this from rates::max_q_for_fidelity, which always uses the
// loss target).
double max_q_with_delta(const ChainConfig& chain, const PhysicalParams& physical,
                        const LinkParams& link_template, double target,
                        const RatesKnobs& knobs, std::optional<double> delta,
                        bool* reachable) {
  auto fidelity_at = [&](double q) {
    LinkParams link = link_template;
    link.q = q;
    const SchemeModel model = build_scheme_model(chain, physical, link, knobs, delta);
    return fidelity_budget(model, chain, physical, link, knobs).fidelity;
  };
  if (fidelity_at(1e-300) < target) {
    *reachable = false;
    return 0.0;
  }
  *reachable = true;
  double lo = 1e-300;
  double hi = 1.0 - 1e-9;
  if (fidelity_at(hi) >= target) return hi;
  while ((hi - lo) > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (fidelity_at(mid) >= target)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

PointEval evaluate_point(const ChainConfig& chain, const PhysicalParams& physical,
                         const LinkParams& link_template, double target,
                         const RatesKnobs& knobs, std::optional<double> delta) {
  PointEval ev;
  try {
    bool reachable = false;
    const double q =
        max_q_with_delta(chain, physical, link_template, target, knobs, delta, &reachable);
    if (!reachable || q <= 0.0) return ev;
    ev.link = link_template;
    ev.link.q = q;
    ev.model = build_scheme_model(chain, physical, ev.link, knobs, delta);
    const RateResult rate = analytic_rate(ev.model, chain);
    ev.budget = fidelity_budget(ev.model, chain, physical, ev.link, knobs);
    ev.rate = rate.rate_hz;
    ev.fidelity = ev.budget.fidelity;
    ev.ok = true;
  } catch (const std::exception&) {
    ev.ok = false; // infeasible interruption window, zero probabilities, ...
  }
  return ev;
}

}  // namespace

OptimizationResult optimize_at_distance(double total_km, Scheme scheme,
                                        double target_fidelity, const Config& base) {
  if (!(total_km > 0))
    throw std::invalid_argument("optimize_at_distance: total_km must be positive");
  if (!(target_fidelity > 0 && target_fidelity < 1))
    throw std::invalid_argument("optimize_at_distance: target must be in (0,1)");

  OptimizationResult result;
  int best_s = -1;

  for (int s = 0; s <= base.optimizer.s_max; ++s) {
    ChainConfig chain = base.chain;
    chain.total_km = total_km;
    chain.nesting_s = s;
    chain.scheme = scheme;
    chain.target_fidelity = target_fidelity;

    LinkParams link = base.link;
    link.l0_km = total_km / std::pow(2.0, s);

    PointEval best_ev = evaluate_point(chain, base.physical, link, target_fidelity,
                                       base.rates, std::nullopt);
    if (base.optimizer.co_optimize_pir && chain.pir_enabled && is_new_scheme(scheme)) {
      // Scan a fixed multiplier grid around the loss target; determinism
      // comes from the fixed grid order.
      const double center = pir_cost_for_target(base.physical.eta, base.physical.depth_d);
      for (const double mult : {0.25, 0.5, 2.0, 4.0}) {
        const double delta = std::min(1.0, mult * center);
        PointEval ev = evaluate_point(chain, base.physical, link, target_fidelity,
                                      base.rates, delta);
        if (ev.ok && (!best_ev.ok || ev.rate > best_ev.rate)) best_ev = ev;
      }
    }

    GridPoint point;
    point.nesting_s = s;
    point.q = best_ev.ok ? best_ev.link.q : 0.0;
    point.rate_hz = best_ev.ok ? best_ev.rate : 0.0;
    point.fidelity = best_ev.ok ? best_ev.fidelity : 0.0;
    point.feasible = best_ev.ok;
    result.grid_trace.push_back(point);

    if (best_ev.ok && (best_s < 0 || best_ev.rate > result.best.rate_hz)) {
      best_s = s;
      result.best.rate_hz = best_ev.rate;
      result.best.fidelity = best_ev.fidelity;
      result.best.error_budget = best_ev.budget.budget;
      result.best.physical = base.physical;
      result.best.link = best_ev.link;
      result.best.chain = chain;
    }
  }
  result.feasible = best_s >= 0;
  return result;
}

SweepTable sweep_distances(double dmin_km, double dmax_km, int points,
                           const Config& base, int max_threads) {
  if (points < 1) throw std::invalid_argument("sweep_distances: points must be >= 1");
  if (!(dmin_km > 0)) throw std::invalid_argument("sweep_distances: dmin_km must be positive");
  if (points >= 2 && !(dmin_km < dmax_km))
    throw std::invalid_argument("sweep_distances: need dmin_km < dmax_km");

  SweepTable table;
  table.rows.assign(static_cast<std::size_t>(points), SweepRow{});
  for (int i = 0; i < points; ++i) {
    const double frac = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    table.rows[static_cast<std::size_t>(i)].distance_km =
        dmin_km * std::pow(dmax_km / dmin_km, frac);
  }

  const Scheme schemes[4] = {Scheme::NewSingleRail, Scheme::NewDualRail, Scheme::RefDlcz,
                             Scheme::RefDualRail};
  const int tasks = points * 4;

  auto run_task = [&](int task) {
    const int row = task / 4;
    const Scheme scheme = schemes[task % 4];
    SweepRow& out = table.rows[static_cast<std::size_t>(row)];
    SchemePoint point;
    try {
      const OptimizationResult opt = optimize_at_distance(
          out.distance_km, scheme, base.chain.target_fidelity, base);
      if (opt.feasible) {
        point.rate_hz = opt.best.rate_hz;
        point.segments = 1 << opt.best.chain.nesting_s;
        point.q = opt.best.link.q;
        point.feasible = true;
      }
    } catch (const std::exception&) {
      point = SchemePoint{}; // leave the cell infeasible, keep sweeping
    }
    switch (scheme) {
      case Scheme::NewSingleRail: out.new_single = point; break;
      case Scheme::NewDualRail: out.new_dual = point; break;
      case Scheme::RefDlcz: out.ref_dlcz = point; break;
      case Scheme::RefDualRail: out.ref_dual = point; break;
    }
  };

  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  int workers = max_threads > 0 ? max_threads : static_cast<int>(hw);
  workers = std::max(1, std::min(workers, tasks));

  if (workers == 1) {
    for (int task = 0; task < tasks; ++task) run_task(task);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&] {
        for (;;) {
          const int task = next.fetch_add(1);
          if (task >= tasks) return;
          run_task(task);
        }
      });
    }
    for (auto& t : threads) t.join();
  }

  for (SweepRow& row : table.rows) {
    if (row.new_single.feasible && row.ref_dlcz.feasible && row.ref_dlcz.rate_hz > 0)
      row.ratio_single = row.new_single.rate_hz / row.ref_dlcz.rate_hz;
    if (row.new_dual.feasible && row.ref_dual.feasible && row.ref_dual.rate_hz > 0)
      row.ratio_dual = row.new_dual.rate_hz / row.ref_dual.rate_hz;
  }
  return table;
}

}  // namespace fluorep
