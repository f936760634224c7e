#include "slabmc/sweep.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <algorithm>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

#include "slabmc/transport.hpp"

namespace slabmc {

namespace {

constexpr std::uint32_t kSharedStreamBase = 100;
constexpr double kRoundingAllowance = 1e-12;

struct Group {
  SimKind sim;
  std::vector<Procedure> procs;
  std::uint32_t stream;
};

struct PointPlan {
  Background bg;
  std::vector<Procedure> applicable;
  std::vector<Procedure> skipped;
  std::vector<Group> groups;
};

struct Task {
  std::size_t plan;
  std::size_t group;
  std::size_t rep;
};

struct TaskResult {
  std::vector<ScoreStats> stats;  // one per procedure of the group
  std::vector<ScoreStats> diffs;  // per-path differences, pairs i < j
  std::vector<std::string> traces;
};

PointPlan plan_point(const SweepConfig& cfg, const GridPoint& g) {
  PointPlan plan{make_background(cfg, g), {}, {}, {}};
  for (const Procedure& p : cfg.procedures) {
    (applicable(p, plan.bg) ? plan.applicable : plan.skipped).push_back(p);
  }
  if (cfg.common_random_numbers) {
    for (SimKind sim : {SimKind::Analog, SimKind::NonAnalogCollision,
                        SimKind::NonAnalogTrackLength}) {
      Group grp{sim, {}, kSharedStreamBase + static_cast<std::uint32_t>(sim)};
      for (const Procedure& p : plan.applicable) {
        if (p.sim == sim) grp.procs.push_back(p);
      }
      if (!grp.procs.empty()) plan.groups.push_back(std::move(grp));
    }
  } else {
    for (const Procedure& p : plan.applicable) {
      plan.groups.push_back(
          {p.sim, {p}, static_cast<std::uint32_t>(procedure_index(p))});
    }
  }
  return plan;
}

Rng make_stream(std::uint64_t seed, std::size_t point, std::uint32_t stream,
                std::size_t rep) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(point), stream,
                    static_cast<std::uint32_t>(rep)};
  return Rng(seq);
}

TaskResult run_task(const SweepConfig& cfg, const PointPlan& plan, std::size_t point,
                    const Task& t) {
  const Group& grp = plan.groups[t.group];
  Rng rng = make_stream(cfg.seed, point, grp.stream, t.rep);
  TaskResult out;
  const std::size_t m = grp.procs.size();
  out.stats.resize(m);
  out.diffs.resize(m * (m - 1) / 2);
  std::vector<double> scores(m);
  const bool trace = t.rep == 0 && cfg.dump_traces > 0;
  std::vector<std::ostringstream> traces(trace ? grp.procs.size() : 0);
  ParticlePath path;
  for (std::size_t n = 0; n < cfg.particles; ++n) {
    simulate_path(plan.bg, grp.sim, rng, path);
    const auto collisions = static_cast<double>(path.collisions());
    for (std::size_t i = 0; i < m; ++i) {
      const double s = path_score(grp.procs[i], cfg.quantity, path, plan.bg);
      scores[i] = s;
      out.stats[i].accumulate(s, collisions);
      if (trace && n < cfg.dump_traces) {
        traces[i] << "# path " << n << " score " << format_double(s) << '\n';
        write_trace(traces[i], path);
      }
    }
    for (std::size_t i = 0, k = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j, ++k) {
        out.diffs[k].accumulate(scores[i] - scores[j], 0.0);
      }
    }
  }
  for (auto& os : traces) out.traces.push_back(os.str());
  return out;
}

std::size_t worker_count(const SweepConfig& cfg, std::size_t tasks) {
  std::size_t n = cfg.threads;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, tasks));
}

std::vector<TaskResult> run_tasks(const SweepConfig& cfg,
                                  const std::vector<PointPlan>& plans,
                                  const std::vector<std::size_t>& point_ids,
                                  const std::vector<Task>& tasks) {
  std::vector<TaskResult> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        const Task& t = tasks[i];
        results[i] = run_task(cfg, plans[t.plan], point_ids[t.plan], t);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = worker_count(cfg, tasks.size());
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::vector<PointOutcome> run_points(const SweepConfig& cfg,
                                     const std::vector<std::size_t>& point_ids) {
  validate(cfg);
  std::vector<PointPlan> plans;
  std::vector<Task> tasks;
  for (std::size_t k = 0; k < point_ids.size(); ++k) {
    plans.push_back(plan_point(cfg, cfg.grid.at(point_ids[k])));
    for (std::size_t g = 0; g < plans.back().groups.size(); ++g) {
      for (std::size_t r = 0; r < cfg.repetitions; ++r) tasks.push_back({k, g, r});
    }
  }
  const std::vector<TaskResult> done = run_tasks(cfg, plans, point_ids, tasks);

  std::vector<PointOutcome> out;
  std::size_t cursor = 0;
  for (std::size_t k = 0; k < plans.size(); ++k) {
    const PointPlan& plan = plans[k];
    PointOutcome po;
    po.point = cfg.grid[point_ids[k]];
    po.skipped = plan.skipped;
    std::map<std::size_t, std::vector<ScoreStats>> reps;
    PairedErrors paired;
    for (std::size_t g = 0; g < plan.groups.size(); ++g) {
      const Group& grp = plan.groups[g];
      std::vector<ScoreStats> diffs;
      for (std::size_t r = 0; r < cfg.repetitions; ++r, ++cursor) {
        const TaskResult& tr = done[cursor];
        for (std::size_t i = 0; i < grp.procs.size(); ++i) {
          reps[procedure_index(grp.procs[i])].push_back(tr.stats[i]);
          if (i < tr.traces.size()) po.traces[procedure_name(grp.procs[i])] = tr.traces[i];
        }
        diffs.resize(tr.diffs.size());
        for (std::size_t k = 0; k < tr.diffs.size(); ++k) diffs[k].merge(tr.diffs[k]);
      }
      for (std::size_t i = 0, k = 0; i < grp.procs.size(); ++i) {
        for (std::size_t j = i + 1; j < grp.procs.size(); ++j, ++k) {
          const std::size_t a = procedure_index(grp.procs[i]);
          const std::size_t b = procedure_index(grp.procs[j]);
          paired[{std::min(a, b), std::max(a, b)}] =
              std::sqrt(diffs[k].variance() / static_cast<double>(diffs[k].n()));
        }
      }
    }
    for (const Procedure& p : plan.applicable) {
      po.results.push_back(make_result(p, cfg.quantity, reps.at(procedure_index(p))));
    }
    po.gate = unbiasedness_gate(po.results, cfg.gate_sigmas, paired);
    for (Metric m : cfg.metrics) {
      const Selection sel = select_best(po.results, m, cfg.level);
      po.selection[m] = sel;
      po.gain[m] = gain_factor(po.results, cfg.default_for_quantity(), sel, m);
    }
    out.push_back(std::move(po));
  }
  return out;
}

}  // namespace

GateReport unbiasedness_gate(const std::vector<ProcedureResult>& results, double sigmas,
                             const PairedErrors& paired) {
  GateReport rep;
  for (std::size_t i = 0; i < results.size(); ++i) {
    for (std::size_t j = i + 1; j < results.size(); ++j) {
      const double a = results[i].estimate;
      const double b = results[j].estimate;
      const double diff = std::abs(a - b);
      const double allowance =
          kRoundingAllowance * std::max({std::abs(a), std::abs(b), 1.0});
      const std::size_t pi = procedure_index(results[i].procedure);
      const std::size_t pj = procedure_index(results[j].procedure);
      const auto it = paired.find({std::min(pi, pj), std::max(pi, pj)});
      const double se = it != paired.end()
                            ? it->second
                            : std::hypot(results[i].std_error, results[j].std_error);
      double ratio = 0.0;
      if (diff > allowance) {
        ratio = se > 0.0 ? (diff - allowance) / se : std::numeric_limits<double>::infinity();
      }
      if (ratio > sigmas) rep.passed = false;
      if (ratio > rep.worst_ratio || rep.worst_pair.empty()) {
        rep.worst_ratio = ratio;
        rep.worst_pair =
            procedure_name(results[i].procedure) + "/" + procedure_name(results[j].procedure);
      }
    }
  }
  return rep;
}

bool PartitionMap::all_gates_passed() const {
  for (const PointOutcome& p : points) {
    if (!p.gate.passed) return false;
  }
  return true;
}

PointOutcome run_point(const SweepConfig& cfg, std::size_t point_index) {
  return std::move(run_points(cfg, {point_index}).front());
}

PartitionMap run_sweep(const SweepConfig& cfg) {
  std::vector<std::size_t> ids(cfg.grid.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  PartitionMap map;
  map.config = cfg;
  map.points = run_points(cfg, ids);
  return map;
}

}  // namespace slabmc
