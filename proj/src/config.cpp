#include "fracbubble/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "fracbubble/errors.hpp"
#include "fracbubble/io.hpp"

namespace fracbubble {

namespace {

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const std::exception& e) {
    config_error("ConfigType", std::string("field '") + key + "': " + e.what());
  }
}

const Json& object_at(const Json& j, const char* key) {
  static const Json empty = Json::object();
  if (!j.contains(key)) return empty;
  if (!j[key].is_object()) config_error("ConfigType", std::string("field '") + key + "' must be an object");
  return j[key];
}

double parse_m(const Json& t) {
  if (!t.contains("m") || t["m"].is_null()) return std::numeric_limits<double>::infinity();
  if (t["m"].is_string()) {
    if (t["m"].get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    config_error("ConfigType", "growth term m must be a number, null or \"inf\"");
  }
  return t["m"].get<double>();
}

}  // namespace

Grid default_grid(int n) {
  if (n == 1) return make_grid(1, 40.0, 4096);
  if (n == 2) return make_grid(2, 16.0, 256);
  return make_grid(3, 8.0, 64);
}

RunConfig default_config() { return parse_config(R"({"n":1,"s":0.2,"q":1.5,"eps":0.0,"weight":{"bumps":[{"c":[0.0],"r":1.0,"a":1.0,"k":2}]}})"); }

RunConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    config_error("ConfigParse", e.what());
  }
  if (!j.is_object()) config_error("ConfigType", "top level must be an object");
  RunConfig c;
  const int n = get_or<int>(j, "n", 1);
  c.params = validate(n, get_or<double>(j, "s", 0.2), get_or<double>(j, "q", 1.5), get_or<double>(j, "eps", 0.0));

  const Json& w = object_at(j, "weight");
  if (!w.contains("bumps") || !w["bumps"].is_array()) config_error("EmptyWeight", "weight.bumps is missing");
  std::vector<Bump> bumps;
  for (const Json& b : w["bumps"]) {
    Bump bp;
    bp.c = get_or<std::vector<double>>(b, "c", std::vector<double>(n, 0.0));
    bp.r = get_or<double>(b, "r", 1.0);
    bp.a = get_or<double>(b, "a", 1.0);
    bp.k = get_or<int>(b, "k", 2);
    bumps.push_back(std::move(bp));
  }
  c.weight = CompactWeight(n, std::move(bumps));
  check_weight(c.params, c.weight);

  const Json& g = object_at(j, "grid");
  const Grid dg = default_grid(n);
  c.grid = make_grid(n, get_or<double>(g, "L", dg.L), get_or<int>(g, "N", dg.N));

  const Json& ls = object_at(j, "landscape");
  c.landscape.mu_min = get_or<double>(ls, "mu_min", c.landscape.mu_min);
  c.landscape.mu_max = get_or<double>(ls, "mu_max", c.landscape.mu_max);
  c.landscape.mu_count = get_or<int>(ls, "mu_count", c.landscape.mu_count);
  c.landscape.xi_half_width = get_or<double>(ls, "xi_half_width", c.landscape.xi_half_width);
  c.landscape.xi_count = get_or<int>(ls, "xi_count", c.landscape.xi_count);
  if (!(c.landscape.mu_min > 0.0 && c.landscape.mu_max > c.landscape.mu_min) || c.landscape.mu_count < 2 ||
      c.landscape.xi_count < 0 || !(c.landscape.xi_half_width >= 0.0)) {
    config_error("SweepInvalid", "landscape sweep needs 0 < mu_min < mu_max, mu_count ≥ 2, xi_count ≥ 0");
  }

  const Json& as = object_at(j, "asymptotics");
  c.windows.mu_first = get_or<int>(as, "mu_first", c.windows.mu_first);
  c.windows.mu_last = get_or<int>(as, "mu_last", c.windows.mu_last);
  c.windows.mu_first_sublinear = get_or<int>(as, "mu_first_sublinear", c.windows.mu_first_sublinear);
  c.windows.mu_last_sublinear = get_or<int>(as, "mu_last_sublinear", c.windows.mu_last_sublinear);
  c.windows.xi_first = get_or<double>(as, "xi_first", c.windows.xi_first);
  c.windows.xi_last = get_or<double>(as, "xi_last", c.windows.xi_last);
  c.small_mu_first = get_or<int>(as, "small_mu_first", c.small_mu_first);
  c.small_mu_last = get_or<int>(as, "small_mu_last", c.small_mu_last);
  if (c.windows.mu_last <= c.windows.mu_first || c.windows.mu_last_sublinear <= c.windows.mu_first_sublinear ||
      !(c.windows.xi_last > c.windows.xi_first && c.windows.xi_first > 0.0) ||
      c.small_mu_last < c.small_mu_first + 4) {
    config_error("SweepInvalid", "asymptotics windows are empty or too short");
  }

  const Json& sv = object_at(j, "solve");
  c.eps_list = get_or<std::vector<double>>(sv, "eps", c.eps_list);
  for (double e : c.eps_list) {
    if (!(e >= 0.0) || !std::isfinite(e)) config_error("ExponentRange", "every eps in solve.eps must be ≥ 0");
  }

  const Json& rg = object_at(j, "regularity");
  if (rg.contains("terms")) {
    c.growth.clear();
    for (const Json& t : rg["terms"]) {
      GrowthTerm term;
      term.gamma = get_or<double>(t, "gamma", 0.0);
      term.m = parse_m(t);
      if (t.contains("a") && !t["a"].is_null()) term.a = t["a"].get<double>();
      c.growth.push_back(term);
    }
  }
  c.deltas = get_or<std::vector<double>>(rg, "delta", c.deltas);
  for (double d : c.deltas) {
    if (!(d > 0.0)) config_error("ExponentRange", "regularity.delta entries must be positive");
  }

  c.seed = get_or<unsigned>(j, "seed", c.seed);
  c.threads = get_or<int>(j, "threads", c.threads);
  if (c.threads < 1) config_error("ConfigType", "threads must be at least 1");
  c.source = canonical_json(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) config_error("ConfigNotFound", "cannot read config " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_json(const RunConfig& c) {
  Json j;
  j["n"] = c.params.n;
  j["s"] = c.params.s;
  j["q"] = c.params.q;
  j["eps"] = c.params.eps;
  Json bumps = Json::array();
  for (const Bump& b : c.weight.bumps()) bumps.push_back({{"c", b.c}, {"r", b.r}, {"a", b.a}, {"k", b.k}});
  j["weight"] = {{"bumps", bumps}};
  j["grid"] = {{"L", c.grid.L}, {"N", c.grid.N}};
  j["landscape"] = {{"mu_min", c.landscape.mu_min},
                    {"mu_max", c.landscape.mu_max},
                    {"mu_count", c.landscape.mu_count},
                    {"xi_half_width", c.landscape.xi_half_width},
                    {"xi_count", c.landscape.xi_count}};
  j["asymptotics"] = {{"mu_first", c.windows.mu_first},
                      {"mu_last", c.windows.mu_last},
                      {"mu_first_sublinear", c.windows.mu_first_sublinear},
                      {"mu_last_sublinear", c.windows.mu_last_sublinear},
                      {"xi_first", c.windows.xi_first},
                      {"xi_last", c.windows.xi_last},
                      {"small_mu_first", c.small_mu_first},
                      {"small_mu_last", c.small_mu_last}};
  j["solve"] = {{"eps", c.eps_list}};
  Json terms = Json::array();
  for (const GrowthTerm& t : c.growth) {
    Json jt{{"gamma", t.gamma}};
    jt["m"] = std::isinf(t.m) ? Json("inf") : Json(t.m);
    if (!std::isnan(t.a)) jt["a"] = t.a;
    terms.push_back(jt);
  }
  j["regularity"] = {{"terms", terms}, {"delta", c.deltas}};
  j["seed"] = c.seed;
  return j.dump();
}

std::string config_digest(const RunConfig& c) { return sha256_hex(canonical_json(c)); }

}  // namespace fracbubble
