#include "axns/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"

namespace axns {

using json = nlohmann::json;

std::string to_string(Interpolation scheme) {
  return scheme == Interpolation::Bilinear ? "bilinear" : "cubic";
}

Interpolation parse_interpolation(const std::string& name) {
  if (name == "bilinear") return Interpolation::Bilinear;
  if (name == "cubic") return Interpolation::Cubic;
  throw std::invalid_argument("unknown interpolation '" + name + "'");
}

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

// Reads one JSON object and remembers which keys were consumed.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  [[nodiscard]] bool has(const std::string& key) const { return node_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return node_.at(key);
  }

  void number(const std::string& key, double& out, bool required = false) {
    if (!present(key, required)) return;
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(join(path_, key), "expected a number");
    out = v.get<double>();
  }

  void optional_number(const std::string& key, std::optional<double>& out) {
    if (!has(key)) return;
    const json& v = raw(key);
    if (v.is_null()) {
      out.reset();
      return;
    }
    if (!v.is_number()) throw ConfigError(join(path_, key), "expected a number or null");
    out = v.get<double>();
  }

  template <class Int>
  void integer(const std::string& key, Int& out, bool required = false) {
    if (!present(key, required)) return;
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(join(path_, key), "expected an integer");
    if constexpr (std::is_unsigned_v<Int>) {
      if (v.is_number_unsigned()) {
        out = v.get<Int>();
        return;
      }
      throw ConfigError(join(path_, key), "expected a non-negative integer");
    } else {
      out = v.get<Int>();
    }
  }

  void string(const std::string& key, std::string& out, bool required = false) {
    if (!present(key, required)) return;
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(join(path_, key), "expected a string");
    out = v.get<std::string>();
  }

  [[nodiscard]] std::string path(const std::string& key) const { return join(path_, key); }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(join(path_, it.key()), "unknown key");
    }
  }

 private:
  bool present(const std::string& key, bool required) const {
    if (has(key)) return true;
    if (required) throw ConfigError(join(path_, key), "missing required key");
    return false;
  }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

// Leading dotted key of a validation message such as "solver.mu must be positive".
std::string message_path(const std::string& what) {
  const auto end = what.find_first_of(" :");
  return end == std::string::npos ? what : what.substr(0, end);
}

template <class F>
void wrap(F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    throw ConfigError(message_path(what), what);
  }
}

GridSpec read_grid(const json& node) {
  Section s(node, "grid");
  GridSpec g;
  s.integer("nr", g.nr, true);
  s.integer("nz", g.nz, true);
  s.number("r_max", g.r_max, true);
  s.number("z_min", g.z_min, true);
  s.number("z_max", g.z_max, true);
  s.finish();
  return g;
}

SolverConfig read_solver(const json& node) {
  Section s(node, "solver");
  SolverConfig c;
  s.number("mu", c.mu);
  if (s.has("dt")) {
    s.optional_number("dt", c.dt);
    if (c.dt) c.cfl.reset();
  }
  if (s.has("cfl")) s.optional_number("cfl", c.cfl);
  s.number("t_end", c.t_end);
  s.number("projection_tol", c.projection_tol);
  s.integer("snapshot_every", c.snapshot_every);
  s.finish();
  return c;
}

DataSpec read_data(const json& node) {
  Section s(node, "data");
  DataSpec d;
  std::string kind;
  s.string("kind", kind, true);
  try {
    d.kind = parse_data_kind(kind);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(s.path("kind"), e.what());
  }
  s.number("N0", d.N0);
  s.number("circulation", d.circulation);
  s.number("nu", d.nu);
  s.number("t_offset", d.t_offset);
  s.number("amplitude", d.amplitude);
  s.number("ring_radius", d.ring_radius);
  s.number("ring_z", d.ring_z);
  s.number("core_radius", d.core_radius);
  s.number("swirl", d.swirl);
  s.integer("seed", d.seed);
  s.integer("modes", d.modes);
  s.finish();
  return d;
}

MicroscopeConfig read_microscope(const json& node) {
  Section s(node, "microscope");
  MicroscopeConfig m;
  s.number("epsilon", m.epsilon);
  s.number("sigma0", m.sigma0);
  s.number("holder_alpha", m.holder_alpha);
  s.number("ratio_threshold", m.ratio_threshold);
  s.integer("cube_space", m.cube_space);
  s.integer("cube_time", m.cube_time);
  std::string interp = to_string(m.interpolation);
  s.string("interpolation", interp);
  try {
    m.interpolation = parse_interpolation(interp);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(s.path("interpolation"), e.what());
  }
  s.optional_number("half_width", m.half_width);
  s.finish();
  return m;
}

InvariantConfig read_invariants(const json& node) {
  Section s(node, "invariants");
  InvariantConfig c;
  s.optional_number("h0", c.h0);
  s.number("bound_tol", c.bound_tol);
  s.number("rvtheta_step_tol", c.rvtheta_step_tol);
  s.number("energy_step_tol", c.energy_step_tol);
  s.number("divergence_factor", c.divergence_factor);
  s.number("projection_tol", c.projection_tol);
  s.number("scaling_lambda", c.scaling_lambda);
  s.number("scaling_ratio_tol", c.scaling_ratio_tol);
  s.number("rspeed_tol", c.rspeed_tol);
  if (s.has("refinement")) {
    const json& v = s.raw("refinement");
    if (!v.is_array()) throw ConfigError(s.path("refinement"), "expected an array of integers");
    c.refinement.clear();
    for (const json& e : v) {
      if (!e.is_number_integer()) throw ConfigError(s.path("refinement"), "expected an array of integers");
      c.refinement.push_back(e.get<int>());
    }
  }
  s.finish();
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  j["grid"] = {{"nr", c.grid.nr},       {"nz", c.grid.nz},       {"r_max", c.grid.r_max},
               {"z_min", c.grid.z_min}, {"z_max", c.grid.z_max}};
  json solver = {{"mu", c.solver.mu},
                 {"t_end", c.solver.t_end},
                 {"projection_tol", c.solver.projection_tol},
                 {"snapshot_every", c.solver.snapshot_every}};
  solver["dt"] = c.solver.dt ? json(*c.solver.dt) : json(nullptr);
  solver["cfl"] = c.solver.cfl ? json(*c.solver.cfl) : json(nullptr);
  j["solver"] = solver;
  const DataSpec& d = c.data;
  j["data"] = {{"kind", to_string(d.kind)},
               {"N0", d.N0},
               {"circulation", d.circulation},
               {"nu", d.nu},
               {"t_offset", d.t_offset},
               {"amplitude", d.amplitude},
               {"ring_radius", d.ring_radius},
               {"ring_z", d.ring_z},
               {"core_radius", d.core_radius},
               {"swirl", d.swirl},
               {"seed", d.seed},
               {"modes", d.modes}};
  const MicroscopeConfig& m = c.microscope;
  j["microscope"] = {{"epsilon", m.epsilon},
                     {"sigma0", m.sigma0},
                     {"holder_alpha", m.holder_alpha},
                     {"ratio_threshold", m.ratio_threshold},
                     {"cube_space", m.cube_space},
                     {"cube_time", m.cube_time},
                     {"interpolation", to_string(m.interpolation)},
                     {"half_width", m.half_width ? json(*m.half_width) : json(nullptr)}};
  const InvariantConfig& v = c.invariants;
  j["invariants"] = {{"h0", v.h0 ? json(*v.h0) : json(nullptr)},
                     {"bound_tol", v.bound_tol},
                     {"rvtheta_step_tol", v.rvtheta_step_tol},
                     {"energy_step_tol", v.energy_step_tol},
                     {"divergence_factor", v.divergence_factor},
                     {"projection_tol", v.projection_tol},
                     {"scaling_lambda", v.scaling_lambda},
                     {"scaling_ratio_tol", v.scaling_ratio_tol},
                     {"rspeed_tol", v.rspeed_tol},
                     {"refinement", v.refinement}};
  j["output_dir"] = c.output_dir.string();
  j["history_capacity"] = c.history_capacity;
  if (!c.sweep.empty()) {
    json sw = json::object();
    for (const auto& [key, values] : c.sweep) {
      json list = json::array();
      for (const std::string& s : values) list.push_back(json::parse(s));
      sw[key] = list;
    }
    j["sweep"] = sw;
  }
  return j;
}

RunConfig from_json(const json& doc) {
  Section root(doc, "");
  RunConfig c;
  if (!root.has("grid")) throw ConfigError("grid", "missing required key");
  if (!root.has("data")) throw ConfigError("data", "missing required key");
  c.grid = read_grid(root.raw("grid"));
  if (root.has("solver")) c.solver = read_solver(root.raw("solver"));
  c.data = read_data(root.raw("data"));
  if (root.has("microscope")) c.microscope = read_microscope(root.raw("microscope"));
  if (root.has("invariants")) c.invariants = read_invariants(root.raw("invariants"));
  std::string out = c.output_dir.string();
  root.string("output_dir", out);
  c.output_dir = out;
  root.integer("history_capacity", c.history_capacity);
  if (root.has("sweep")) {
    const json& sw = root.raw("sweep");
    if (!sw.is_object()) throw ConfigError("sweep", "expected an object");
    for (auto it = sw.begin(); it != sw.end(); ++it) {
      const std::string path = "sweep." + it.key();
      if (!it.value().is_array() || it.value().empty()) {
        throw ConfigError(path, "expected a non-empty array");
      }
      if (it.key().find('.') == std::string::npos || it.key().rfind("sweep", 0) == 0) {
        throw ConfigError(path, "expected a dotted key path such as data.amplitude");
      }
      auto& values = c.sweep[it.key()];
      for (const json& v : it.value()) values.push_back(v.dump());
    }
  }
  root.finish();
  c.validate();
  return c;
}

}  // namespace

void RunConfig::validate() const {
  wrap([&] { (void)grid.make(); });
  wrap([&] { solver.validate(); });
  wrap([&] { data.validate(); });
  wrap([&] { microscope.validate(); });
  wrap([&] { invariants.validate(); });
  if (history_capacity < 3) throw ConfigError("history_capacity", "must be >= 3");
  if (output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
  if (data.kind == DataKind::LambOseen && solver.mu != data.nu) {
    throw ConfigError("data.nu", "Lamb-Oseen data needs data.nu equal to solver.mu");
  }
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  try {
    return from_json(doc);
  } catch (const json::exception& e) {
    throw ConfigError("<document>", e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const RunConfig& config) { return to_json(config).dump(2) + "\n"; }

std::vector<RunConfig> expand_sweep(const RunConfig& config) {
  if (config.sweep.empty()) return {config};
  RunConfig base = config;
  base.sweep.clear();
  const json doc = to_json(base);
  std::vector<std::pair<std::string, std::vector<std::string>>> axes(config.sweep.begin(),
                                                                     config.sweep.end());
  std::vector<std::size_t> idx(axes.size(), 0);
  std::vector<RunConfig> out;
  for (;;) {
    json d = doc;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const json::json_pointer ptr("/" + [&] {
        std::string p = axes[a].first;
        for (char& ch : p) {
          if (ch == '.') ch = '/';
        }
        return p;
      }());
      if (!d.contains(ptr)) throw ConfigError("sweep." + axes[a].first, "unknown key path");
      d[ptr] = json::parse(axes[a].second[idx[a]]);
    }
    std::ostringstream name;
    name << "run_" << std::setw(3) << std::setfill('0') << out.size();
    d["output_dir"] = (config.output_dir / name.str()).string();
    // dt and cfl are exclusive; a swept dt replaces the adaptive rule.
    if (config.sweep.count("solver.dt") && !d["solver"]["dt"].is_null()) d["solver"]["cfl"] = nullptr;
    out.push_back(from_json(d));
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < axes[a].second.size()) break;
      idx[a] = 0;
      if (a == 0) return out;
    }
    if (axes.empty()) return out;
  }
}

}  // namespace axns
