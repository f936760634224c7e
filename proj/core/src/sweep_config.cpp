#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "slabmc/sweep.hpp"

namespace slabmc {

using nlohmann::json;

std::string_view setting_name(Setting s) {
  return s == Setting::OneD0D ? "1d0d" : "1d1d";
}

std::optional<Setting> parse_setting(std::string_view name) {
  if (name == "1d0d") return Setting::OneD0D;
  if (name == "1d1d") return Setting::OneD1D;
  return std::nullopt;
}

Procedure SweepConfig::default_for_quantity() const {
  if (default_procedure) return *default_procedure;
  if (quantity == Quantity::Momentum) return {SimKind::Analog, EstimatorKind::Collision};
  return {SimKind::Analog, EstimatorKind::TrackLength};
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

std::vector<double> number_list(const json& j, const char* key) {
  const json& v = j.at(key);
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
    return out;
  }
  require(v.is_array(), std::string(key) + ": expected a number or a list");
  for (const json& e : v) {
    require(e.is_number(), std::string(key) + ": non-numeric entry");
    out.push_back(e.get<double>());
  }
  require(!out.empty(), std::string(key) + ": empty list");
  return out;
}

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

std::size_t count_value(const json& j, const char* key) {
  const json& v = j.at(key);
  require(v.is_number() && v.get<double>() >= 0.0 &&
              v.get<double>() == std::floor(v.get<double>()),
          std::string(key) + ": expected a non-negative integer");
  return static_cast<std::size_t>(v.get<double>());
}

GridPoint point_from_json(const json& p, Setting setting) {
  require(p.is_object(), "points: entries must be objects");
  GridPoint g;
  g.survival = get_as<double>(p, "survival");
  g.collisionality = get_as<double>(p, "collisionality");
  if (setting == Setting::OneD0D) {
    g.pr = get_as<double>(p, "pr");
  } else if (p.contains("mu")) {
    g.mu = get_as<double>(p, "mu");
    g.sigma = get_as<double>(p, "sigma");
  } else {
    g.pr = get_as<double>(p, "pr");
    const Maxwellian m = maxwellian_for_pr(g.pr);
    g.mu = m.mu;
    g.sigma = m.sigma;
  }
  return g;
}

std::vector<GridPoint> product_grid(const json& j, Setting setting) {
  const auto surv = number_list(j, "survival");
  const auto coll = number_list(j, "collisionality");
  std::vector<GridPoint> grid;
  if (setting == Setting::OneD1D && j.contains("mu")) {
    require(!j.contains("pr"), "give either pr or mu/sigma for 1d1d");
    const auto mus = number_list(j, "mu");
    const auto sigmas = number_list(j, "sigma");
    for (double s : surv)
      for (double c : coll)
        for (double mu : mus)
          for (double sg : sigmas) grid.push_back({s, c, 0.5, mu, sg});
    return grid;
  }
  const auto prs = number_list(j, "pr");
  for (double s : surv) {
    for (double c : coll) {
      for (double pr : prs) {
        GridPoint g{s, c, pr, 0.0, 1.0};
        if (setting == Setting::OneD1D) {
          try {
            const Maxwellian m = maxwellian_for_pr(pr);
            g.mu = m.mu;
            g.sigma = m.sigma;
          } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
          }
        }
        grid.push_back(g);
      }
    }
  }
  return grid;
}

const std::set<std::string> kKnownKeys{
    "setting",  "quantity",    "metric",      "metrics",
    "survival", "collisionality", "pr",       "mu",
    "sigma",    "points",      "length",      "procedures",
    "particles", "repetitions", "seed",       "level",
    "default_procedure", "common_random_numbers", "threads", "dump_traces",
    "gate_sigmas"};

}  // namespace

void validate(const SweepConfig& cfg) {
  require(!cfg.grid.empty(), "grid: no parameter points");
  require(cfg.particles >= kMinParticles, "particles: at least 1000 required");
  require(cfg.repetitions >= kMinRepetitions, "repetitions: at least 3 required");
  require(!cfg.metrics.empty(), "metrics: at least one metric required");
  require(!cfg.procedures.empty(), "procedures: at least one procedure required");
  require(std::isfinite(cfg.length) && cfg.length > 0.0, "length: must be positive");
  require(cfg.level > 0.0 && cfg.level < 1.0, "level: must lie in (0, 1)");
  require(cfg.gate_sigmas > 0.0, "gate_sigmas: must be positive");
  for (const Procedure& p : cfg.procedures) {
    require(is_valid(p), "procedures: invalid combination");
  }
  const Procedure def = cfg.default_for_quantity();
  bool has_default = false;
  for (const Procedure& p : cfg.procedures) has_default = has_default || p == def;
  require(has_default, "default_procedure: not among the configured procedures");
  for (const GridPoint& g : cfg.grid) {
    try {
      make_background(cfg, g);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("grid: ") + e.what());
    }
  }
}

SweepConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require(j.is_object(), "config must be a JSON object");
  for (const auto& item : j.items()) {
    require(kKnownKeys.count(item.key()) == 1, "unknown config key: " + item.key());
  }

  SweepConfig cfg;
  if (j.contains("setting")) {
    const auto s = parse_setting(get_as<std::string>(j, "setting"));
    require(s.has_value(), "setting: expected 1d0d or 1d1d");
    cfg.setting = *s;
  }
  if (j.contains("quantity")) {
    const auto q = parse_quantity(get_as<std::string>(j, "quantity"));
    require(q.has_value(), "quantity: unknown quantity");
    cfg.quantity = *q;
  }
  if (j.contains("metric") || j.contains("metrics")) {
    require(!(j.contains("metric") && j.contains("metrics")),
            "give either metric or metrics");
    const json& m = j.contains("metric") ? j.at("metric") : j.at("metrics");
    std::vector<std::string> names;
    if (m.is_string()) {
      names.push_back(m.get<std::string>());
    } else {
      require(m.is_array(), "metrics: expected a string or a list");
      for (const json& e : m) {
        require(e.is_string(), "metrics: entries must be strings");
        names.push_back(e.get<std::string>());
      }
    }
    cfg.metrics.clear();
    for (const std::string& n : names) {
      const auto metric = parse_metric(n);
      require(metric.has_value(), "metrics: unknown metric " + n);
      cfg.metrics.push_back(*metric);
    }
  }
  if (j.contains("points")) {
    require(j.at("points").is_array(), "points: expected a list");
    for (const json& p : j.at("points")) cfg.grid.push_back(point_from_json(p, cfg.setting));
  } else {
    require(j.contains("survival") && j.contains("collisionality"),
            "grid: survival and collisionality are required");
    cfg.grid = product_grid(j, cfg.setting);
  }
  if (j.contains("length")) cfg.length = get_as<double>(j, "length");
  if (j.contains("procedures")) {
    require(j.at("procedures").is_array(), "procedures: expected a list");
    cfg.procedures.clear();
    for (const json& e : j.at("procedures")) {
      require(e.is_string(), "procedures: entries must be strings");
      const auto p = parse_procedure(e.get<std::string>());
      require(p.has_value(), "procedures: unknown procedure " + e.get<std::string>());
      cfg.procedures.push_back(*p);
    }
  }
  if (j.contains("particles")) cfg.particles = count_value(j, "particles");
  if (j.contains("repetitions")) cfg.repetitions = count_value(j, "repetitions");
  if (j.contains("seed")) {
    require(j.at("seed").is_number_unsigned(), "seed: expected an unsigned integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("level")) cfg.level = get_as<double>(j, "level");
  if (j.contains("default_procedure")) {
    const auto p = parse_procedure(get_as<std::string>(j, "default_procedure"));
    require(p.has_value(), "default_procedure: unknown procedure");
    cfg.default_procedure = *p;
  }
  if (j.contains("common_random_numbers")) {
    cfg.common_random_numbers = get_as<bool>(j, "common_random_numbers");
  }
  if (j.contains("threads")) cfg.threads = count_value(j, "threads");
  if (j.contains("dump_traces")) cfg.dump_traces = count_value(j, "dump_traces");
  if (j.contains("gate_sigmas")) cfg.gate_sigmas = get_as<double>(j, "gate_sigmas");

  validate(cfg);
  return cfg;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string config_to_json(const SweepConfig& cfg) {
  json j;
  j["setting"] = setting_name(cfg.setting);
  j["quantity"] = quantity_name(cfg.quantity);
  j["metrics"] = json::array();
  for (Metric m : cfg.metrics) j["metrics"].push_back(metric_name(m));
  j["points"] = json::array();
  for (const GridPoint& g : cfg.grid) {
    json p{{"survival", g.survival}, {"collisionality", g.collisionality}};
    if (cfg.setting == Setting::OneD0D) {
      p["pr"] = g.pr;
    } else {
      p["mu"] = g.mu;
      p["sigma"] = g.sigma;
    }
    j["points"].push_back(p);
  }
  j["length"] = cfg.length;
  j["procedures"] = json::array();
  for (const Procedure& p : cfg.procedures) j["procedures"].push_back(procedure_name(p));
  j["particles"] = cfg.particles;
  j["repetitions"] = cfg.repetitions;
  j["seed"] = cfg.seed;
  j["level"] = cfg.level;
  j["default_procedure"] = procedure_name(cfg.default_for_quantity());
  j["common_random_numbers"] = cfg.common_random_numbers;
  j["threads"] = cfg.threads;
  j["dump_traces"] = cfg.dump_traces;
  j["gate_sigmas"] = cfg.gate_sigmas;
  return j.dump(2);
}

Background make_background(const SweepConfig& cfg, const GridPoint& p) {
  if (cfg.setting == Setting::OneD0D) {
    return make_1d0d_background({p.survival, p.collisionality, p.pr}, cfg.length);
  }
  return make_1d1d_background(p.survival, p.collisionality, Maxwellian{p.mu, p.sigma},
                              cfg.length);
}

}  // namespace slabmc
