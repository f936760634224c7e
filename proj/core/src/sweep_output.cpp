#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "slabmc/sweep.hpp"

#ifndef SLABMC_VERSION
#define SLABMC_VERSION "unknown"
#endif

namespace slabmc {

using nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

std::string point_columns(const SweepConfig& cfg, std::size_t i, const GridPoint& g) {
  std::string s = std::to_string(i) + ',' + std::string(setting_name(cfg.setting)) + ',' +
                  format_double(g.survival) + ',' + format_double(g.collisionality) + ',';
  if (cfg.setting == Setting::OneD0D) {
    s += format_double(g.pr) + ",,";
  } else {
    s += ',' + format_double(g.mu) + ',' + format_double(g.sigma);
  }
  return s;
}

json point_json(const SweepConfig& cfg, const GridPoint& g) {
  json p{{"survival", g.survival}, {"collisionality", g.collisionality}};
  if (cfg.setting == Setting::OneD0D) {
    p["pr"] = g.pr;
  } else {
    p["mu"] = g.mu;
    p["sigma"] = g.sigma;
  }
  return p;
}

std::string results_csv(const PartitionMap& map) {
  const SweepConfig& cfg = map.config;
  std::ostringstream os;
  os << "point,setting,survival,collisionality,pr,mu,sigma,procedure,quantity,metric,"
        "estimate,std_error,variance,expected_collisions,metric_value,metric_se,"
        "repetitions,particles\n";
  for (std::size_t i = 0; i < map.points.size(); ++i) {
    const PointOutcome& po = map.points[i];
    const std::string cols = point_columns(cfg, i, po.point);
    for (const ProcedureResult& r : po.results) {
      for (Metric m : cfg.metrics) {
        os << cols << ',' << procedure_name(r.procedure) << ','
           << quantity_name(r.quantity) << ',' << metric_name(m) << ','
           << format_double(r.estimate) << ',' << format_double(r.std_error) << ','
           << format_double(r.variance) << ',' << format_double(r.expected_collisions)
           << ',' << format_double(r.metric(m)) << ',' << format_double(r.metric_se(m))
           << ',' << r.repetitions << ',' << r.particles << '\n';
      }
    }
  }
  return os.str();
}

std::string gain_csv(const PartitionMap& map) {
  const SweepConfig& cfg = map.config;
  std::ostringstream os;
  os << "point,setting,survival,collisionality,pr,mu,sigma,metric,default,winner,"
        "conclusive,gain\n";
  const std::string def = procedure_name(cfg.default_for_quantity());
  for (std::size_t i = 0; i < map.points.size(); ++i) {
    const PointOutcome& po = map.points[i];
    const std::string cols = point_columns(cfg, i, po.point);
    for (Metric m : cfg.metrics) {
      const Selection& sel = po.selection.at(m);
      os << cols << ',' << metric_name(m) << ',' << def << ','
         << procedure_name(po.results[sel.leader].procedure) << ','
         << (sel.conclusive ? 1 : 0) << ',' << format_double(po.gain.at(m)) << '\n';
    }
  }
  return os.str();
}

json number_or_string(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

std::string partition_json(const PartitionMap& map) {
  const SweepConfig& cfg = map.config;
  json entries = json::array();
  for (std::size_t i = 0; i < map.points.size(); ++i) {
    const PointOutcome& po = map.points[i];
    json e{{"point", i}, {"params", point_json(cfg, po.point)}};
    e["gate"] = {{"passed", po.gate.passed},
                 {"worst_ratio", number_or_string(po.gate.worst_ratio)},
                 {"worst_pair", po.gate.worst_pair}};
    json skipped = json::array();
    for (const Procedure& p : po.skipped) skipped.push_back(procedure_name(p));
    e["skipped"] = skipped;
    json sels = json::object();
    for (Metric m : cfg.metrics) {
      const Selection& sel = po.selection.at(m);
      const ProcedureResult& lead = po.results[sel.leader];
      json s{{"winner", procedure_name(lead.procedure)},
             {"conclusive", sel.conclusive},
             {"metric_value", number_or_string(lead.metric(m))},
             {"level", sel.level},
             {"gain", number_or_string(po.gain.at(m))}};
      if (sel.runner_up) {
        const ProcedureResult& run = po.results[*sel.runner_up];
        s["runner_up"] = procedure_name(run.procedure);
        s["runner_up_metric_value"] = number_or_string(run.metric(m));
        s["margin"] = number_or_string(sel.margin);
      }
      sels[std::string(metric_name(m))] = s;
    }
    e["selection"] = sels;
    entries.push_back(e);
  }
  json root{{"schema_version", kResultsSchemaVersion},
            {"setting", setting_name(cfg.setting)},
            {"quantity", quantity_name(cfg.quantity)},
            {"default_procedure", procedure_name(cfg.default_for_quantity())},
            {"points", entries}};
  return root.dump(2) + "\n";
}

std::string manifest_json(const PartitionMap& map) {
  json root{{"schema_version", kResultsSchemaVersion},
            {"version", SLABMC_VERSION},
            {"seed", map.config.seed},
            {"all_gates_passed", map.all_gates_passed()},
            {"points", map.points.size()},
            {"config", json::parse(config_to_json(map.config))}};
  return root.dump(2) + "\n";
}

}  // namespace

void emit_outputs(const PartitionMap& map, const std::filesystem::path& dir) {
  if (map.points.empty()) throw ConfigError("emit_outputs: empty partition map");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  const std::string results = results_csv(map);
  const std::string partition = partition_json(map);
  const std::string gain = gain_csv(map);
  const std::string manifest = manifest_json(map);
  write_file(dir / "results.csv", results);
  write_file(dir / "partition.json", partition);
  write_file(dir / "gain.csv", gain);
  write_file(dir / "manifest.json", manifest);

  bool any_traces = false;
  for (const PointOutcome& po : map.points) any_traces = any_traces || !po.traces.empty();
  if (!any_traces) return;
  const std::filesystem::path tdir = dir / "traces";
  std::filesystem::create_directories(tdir, ec);
  if (ec) throw IoError("cannot create " + tdir.string() + ": " + ec.message());
  for (std::size_t i = 0; i < map.points.size(); ++i) {
    for (const auto& [name, text] : map.points[i].traces) {
      write_file(tdir / ("point" + std::to_string(i) + "_" + name + ".txt"), text);
    }
  }
}

}  // namespace slabmc
