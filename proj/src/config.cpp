#include "offsim/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace offsim {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string &field, const std::string &msg) {
  throw SimError(ErrorCode::config_error, "config field '" + field + "': " + msg);
}

Money money_at(const json &j, const std::string &field) {
  if (!j.is_number()) bad(field, "expected a number");
  Money m = Money::from_double(j.get<double>());
  if (m < Money()) bad(field, "must be >= 0");
  return m;
}

MoneyDist dist_at(const json &j, const std::string &field) {
  MoneyDist d;
  if (j.contains("constant")) {
    d.is_constant = true;
    d.lo = d.hi = money_at(j["constant"], field + ".constant");
  } else if (j.contains("uniform")) {
    const auto &u = j["uniform"];
    if (!u.is_array() || u.size() != 2) bad(field + ".uniform", "expected [lo, hi]");
    d.is_constant = false;
    d.lo = money_at(u[0], field + ".uniform[0]");
    d.hi = money_at(u[1], field + ".uniform[1]");
    if (d.hi < d.lo) bad(field + ".uniform", "lo must be <= hi");
  } else {
    bad(field, "expected {constant: x} or {uniform: [lo, hi]}");
  }
  return d;
}

}  // namespace

Topology Scenario::build_topology() const {
  if (topology_file) return Topology::load(*topology_file);
  if (topology_gen) {
    const GeometricParams &g = *topology_gen;
    return Topology::generate_geometric(g.handhelds, g.aps, g.radius, g.seed,
                                        g.max_attempts);
  }
  throw SimError(ErrorCode::config_error, "no topology source configured");
}

Scenario scenario_from_json_text(const std::string &text,
                                 const std::string &base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &e) {
    throw SimError(ErrorCode::config_error,
                   std::string("config parse error: ") + e.what());
  }
  if (!j.contains("version") || j["version"] != 1) {
    bad("version", "must be 1");
  }

  Scenario sc;
  GameConfig &g = sc.game;

  const auto &topo = j.contains("topology") ? j["topology"] : json::object();
  if (topo.contains("file")) {
    std::string p = topo["file"].get<std::string>();
    sc.topology_file = p.starts_with('/') ? p : base_dir + "/" + p;
  } else if (topo.contains("generate")) {
    const auto &gen = topo["generate"];
    GeometricParams gp;
    gp.handhelds = gen.value("handhelds", gp.handhelds);
    gp.aps = gen.value("aps", gp.aps);
    gp.radius = gen.value("radius", gp.radius);
    gp.seed = gen.value("seed", gp.seed);
    gp.max_attempts = gen.value("max_attempts", gp.max_attempts);
    sc.topology_gen = gp;
  } else {
    bad("topology", "expected {file: path} or {generate: {...}}");
  }

  if (j.contains("strategies")) {
    const auto &s = j["strategies"];
    if (s.contains("default")) {
      g.default_strategy =
          strategy_kind_from_string(s["default"].get<std::string>());
    }
    if (s.contains("nodes")) {
      for (const auto &[key, val] : s["nodes"].items()) {
        g.node_strategies[static_cast<NodeId>(std::stol(key))] =
            strategy_kind_from_string(val.get<std::string>());
      }
    }
  }

  if (j.contains("packet")) {
    const auto &p = j["packet"];
    if (p.contains("b0")) g.b0 = dist_at(p["b0"], "packet.b0");
    if (p.contains("f0")) {
      const auto &f = p["f0"];
      if (f.contains("fraction")) {
        g.f0_fraction = f["fraction"].get<double>();
        if (g.f0_fraction < 0.0 || g.f0_fraction > 1.0) {
          bad("packet.f0.fraction", "must be in [0, 1]");
        }
      } else {
        g.f0_dist = dist_at(f, "packet.f0");
      }
    }
    if (p.contains("h0")) {
      const auto &h = p["h0"];
      if (h.contains("constant")) {
        g.h0.mode = H0Rule::Mode::constant;
        g.h0.value = h["constant"].get<int>();
      } else if (h.contains("shortest_plus")) {
        g.h0.mode = H0Rule::Mode::shortest_plus;
        g.h0.value = h["shortest_plus"].get<int>();
      } else {
        bad("packet.h0", "expected {constant: n} or {shortest_plus: slack}");
      }
    }
  }

  g.auction_window = j.value("auction_window", g.auction_window);
  g.rounds = j.value("rounds", g.rounds);
  g.games_per_round = j.value("games_per_round", g.games_per_round);
  g.seed = j.value("seed", g.seed);
  g.greedy_bids_zero = j.value("greedy_bids_zero", g.greedy_bids_zero);

  if (j.contains("stranded")) {
    std::string s = j["stranded"].get<std::string>();
    if (s == "strategy") {
      g.stranded = StrandedPolicy::strategy;
    } else if (s == "always_bypass") {
      g.stranded = StrandedPolicy::always_bypass;
    } else if (s == "never_bypass") {
      g.stranded = StrandedPolicy::never_bypass;
    } else {
      bad("stranded", "expected strategy | always_bypass | never_bypass");
    }
  }

  if (j.contains("strategy_params")) {
    const auto &p = j["strategy_params"];
    StrategyParams &sp = g.params;
    sp.budget_fraction = p.value("budget_fraction", sp.budget_fraction);
    sp.fine_fraction = p.value("fine_fraction", sp.fine_fraction);
    sp.k1 = p.value("k1", sp.k1);
    sp.k2 = p.value("k2", sp.k2);
    sp.c_cap = p.value("c_cap", sp.c_cap);
    if (p.contains("bid_time_window")) {
      const auto &w = p["bid_time_window"];
      if (!w.is_array() || w.size() != 2) {
        bad("strategy_params.bid_time_window", "expected [lo, hi] fractions");
      }
      sp.bid_time_lo = w[0].get<double>();
      sp.bid_time_hi = w[1].get<double>();
    }
  }

  g.validate();
  return sc;
}

Scenario load_scenario(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw SimError(ErrorCode::config_error, "cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  auto slash = path.find_last_of('/');
  std::string dir = slash == std::string::npos ? "." : path.substr(0, slash);
  return scenario_from_json_text(ss.str(), dir);
}

}  // namespace offsim
