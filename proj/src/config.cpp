#include "tidecoh/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace tidecoh {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw ConfigError("config field '" + field + "': " + msg);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) fail(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
  }
}

const json* section(const json& root, const char* name) {
  if (!root.contains(name)) return nullptr;
  const json& s = root.at(name);
  if (!s.is_object()) fail(name, "expected an object");
  return &s;
}

complex read_complex(const json& obj, const std::string& where, const char* key, complex fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  const std::string field = where + "." + key;
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    fail(field, "expected a complex number as [re, im]");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

double read_positive(const json& obj, const std::string& where, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  const double x = v.get<double>();
  if (!(x > 0.0) || !std::isfinite(x)) fail(where + "." + key, "must be positive");
  return x;
}

std::uint64_t read_count(const json& obj, const std::string& where, const char* key, std::uint64_t fallback,
                         std::uint64_t min_value) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    fail(where + "." + key, "expected a non-negative integer");
  }
  const auto x = v.get<std::uint64_t>();
  if (x < min_value) fail(where + "." + key, "must be at least " + std::to_string(min_value));
  return x;
}

void check_pair(complex a, complex b, const std::string& field, const char* names) {
  const double n2 = std::norm(a) + std::norm(b);
  if (std::abs(n2 - 1.0) > numerics().input_norm) {
    std::ostringstream os;
    os.precision(12);
    os << "normalization violated: " << names << " = " << n2 << " (must be 1 within "
       << numerics().input_norm << ")";
    fail(field, os.str());
  }
}

json complex_json(complex z) { return json::array({z.real(), z.imag()}); }

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config syntax error: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(root, "", {"preparation", "coupling", "dynamics", "screen", "identity"});

  ScenarioConfig cfg;
  if (const json* p = section(root, "preparation")) {
    reject_unknown(*p, "preparation", {"c_A", "c_B"});
    cfg.scenario.c_a = read_complex(*p, "preparation", "c_A", cfg.scenario.c_a);
    cfg.scenario.c_b = read_complex(*p, "preparation", "c_B", cfg.scenario.c_b);
  }
  check_pair(cfg.scenario.c_a, cfg.scenario.c_b, "preparation", "|c_A|^2 + |c_B|^2");
  if (const json* c = section(root, "coupling")) {
    reject_unknown(*c, "coupling", {"d", "e"});
    cfg.scenario.d = read_complex(*c, "coupling", "d", cfg.scenario.d);
    cfg.scenario.e = read_complex(*c, "coupling", "e", cfg.scenario.e);
  }
  check_pair(cfg.scenario.d, cfg.scenario.e, "coupling", "|d|^2 + |e|^2");

  if (const json* d = section(root, "dynamics")) {
    reject_unknown(*d, "dynamics", {"gamma", "t_max", "n_grid", "n_traj", "seed"});
    cfg.dynamics.gamma = read_positive(*d, "dynamics", "gamma", cfg.dynamics.gamma);
    cfg.dynamics.t_max = read_positive(*d, "dynamics", "t_max", cfg.dynamics.t_max);
    cfg.dynamics.n_grid = read_count(*d, "dynamics", "n_grid", cfg.dynamics.n_grid, 2);
    cfg.dynamics.n_traj = read_count(*d, "dynamics", "n_traj", cfg.dynamics.n_traj, 1);
    if (d->contains("seed")) {
      cfg.dynamics.seed = read_count(*d, "dynamics", "seed", 0, 0);
      cfg.seed_from_config = true;
    }
  }
  if (const json* s = section(root, "screen")) {
    reject_unknown(*s, "screen",
                   {"n_pixels", "slit_separation", "distance", "wavelength", "envelope_width", "n_hits"});
    cfg.screen.n_pixels = read_count(*s, "screen", "n_pixels", cfg.screen.n_pixels, 2);
    cfg.screen.slit_separation = read_positive(*s, "screen", "slit_separation", cfg.screen.slit_separation);
    cfg.screen.distance = read_positive(*s, "screen", "distance", cfg.screen.distance);
    cfg.screen.wavelength = read_positive(*s, "screen", "wavelength", cfg.screen.wavelength);
    cfg.screen.envelope_width = read_positive(*s, "screen", "envelope_width", cfg.screen.envelope_width);
    cfg.n_hits = read_count(*s, "screen", "n_hits", cfg.n_hits, 0);
  }
  if (const json* i = section(root, "identity")) {
    reject_unknown(*i, "identity", {"random_sweep"});
    cfg.random_sweep = read_count(*i, "identity", "random_sweep", 0, 0);
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string ScenarioConfig::canonical() const {
  json j;
  j["preparation"] = {{"c_A", complex_json(scenario.c_a)}, {"c_B", complex_json(scenario.c_b)}};
  j["coupling"] = {{"d", complex_json(scenario.d)}, {"e", complex_json(scenario.e)}};
  j["dynamics"] = {{"gamma", dynamics.gamma},   {"t_max", dynamics.t_max}, {"n_grid", dynamics.n_grid},
                   {"n_traj", dynamics.n_traj}, {"seed", dynamics.seed}};
  j["screen"] = {{"n_pixels", screen.n_pixels},     {"slit_separation", screen.slit_separation},
                 {"distance", screen.distance},     {"wavelength", screen.wavelength},
                 {"envelope_width", screen.envelope_width}, {"n_hits", n_hits}};
  j["identity"] = {{"random_sweep", random_sweep}};
  return j.dump();
}

std::string ScenarioConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::uint64_t resolve_seed(const ScenarioConfig& cfg, std::optional<std::uint64_t> flag) {
  if (flag) return *flag;
  if (cfg.seed_from_config) return cfg.dynamics.seed;
  if (const char* env = std::getenv("TIDECOH_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("TIDECOH_SEED is not a non-negative integer: '") + env + "'");
  }
  return 0;
}

}  // namespace tidecoh
