#include "wavekin/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace wavekin {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

Vec3 read_vec(const json& j) {
  if (!j.is_array() || j.empty() || j.size() > 3) throw ConfigError("vectors are arrays of 1 to 3 numbers");
  Vec3 v{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

json write_vec(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

SpectralProfile read_profile(const json& j, const std::string& where) {
  reject_unknown(j, {"family", "amplitude", "width", "center", "entries"}, where);
  const std::string fam = j.value("family", std::string("gaussian"));
  const double amp = j.value("amplitude", 1.0);
  const double width = j.value("width", 1.0);
  const Vec3 center = j.contains("center") ? read_vec(j["center"]) : Vec3{0.0, 0.0, 0.0};
  if (fam == "gaussian") return SpectralProfile::gaussian(amp, width, center);
  if (fam == "bump") return SpectralProfile::bump(amp, width, center);
  if (fam == "table") {
    std::vector<std::pair<Vec3, double>> entries;
    for (const auto& e : j.at("entries")) {
      reject_unknown(e, {"k", "value"}, where + ".entries");
      entries.emplace_back(read_vec(e.at("k")), e.at("value").get<double>());
    }
    return SpectralProfile::table(std::move(entries));
  }
  throw ConfigError("unknown profile family '" + fam + "' in " + where);
}

json write_profile(const SpectralProfile& p) {
  json j;
  switch (p.family()) {
    case ProfileFamily::Gaussian:
      j["family"] = "gaussian";
      break;
    case ProfileFamily::Bump:
      j["family"] = "bump";
      break;
    case ProfileFamily::Table:
      j["family"] = "table";
      break;
  }
  if (p.family() == ProfileFamily::Table) {
    json e = json::array();
    for (const auto& [k, v] : p.entries()) e.push_back({{"k", write_vec(k)}, {"value", v}});
    j["entries"] = e;
  } else {
    j["amplitude"] = p.amplitude();
    j["width"] = p.width();
    j["center"] = write_vec(p.center());
  }
  return j;
}

json write_quad(const ResonantQuadrature& q) {
  return {{"support", q.support}, {"angular", q.angular}, {"order", q.order},
          {"radial_panel", q.radial_panel}, {"line_panel", q.line_panel}};
}

ResonantQuadrature read_quad(const json& j) {
  reject_unknown(j, {"support", "angular", "order", "radial_panel", "line_panel"}, "kinetic.quadrature");
  ResonantQuadrature q;
  read(j, "support", q.support);
  read(j, "angular", q.angular);
  read(j, "order", q.order);
  read(j, "radial_panel", q.radial_panel);
  read(j, "line_panel", q.line_panel);
  return q;
}

RunConfig from_json(const json& root) {
  reject_unknown(root, {"torus", "scaling", "profiles", "sim", "kinetic", "picard", "sigma", "count", "output_dir",
                        "seed", "threads"},
                 "config");
  RunConfig c = default_config();
  if (root.contains("torus")) {
    const json& t = root["torus"];
    reject_unknown(t, {"dim", "L", "zeta", "cutoff"}, "torus");
    read(t, "dim", c.model.torus.dim);
    read(t, "L", c.model.torus.L);
    if (t.contains("zeta")) c.model.torus.zeta = read_vec(t["zeta"]);
    read(t, "cutoff", c.model.torus.cutoff);
  }
  if (root.contains("scaling")) {
    const json& s = root["scaling"];
    reject_unknown(s, {"kappa1", "kappa2", "nu0", "T", "T_over_Tkin", "forcing_nu", "r", "linear"}, "scaling");
    read(s, "linear", c.model.law.linear);
    read(s, "kappa1", c.model.law.kappa1);
    read(s, "kappa2", c.model.law.kappa2);
    read(s, "nu0", c.model.law.nu0);
    read(s, "T", c.model.law.T);
    read(s, "r", c.model.r);
    if (s.contains("T_over_Tkin") && !s["T_over_Tkin"].is_null()) c.T_over_Tkin = s["T_over_Tkin"].get<double>();
    if (s.contains("forcing_nu") && !s["forcing_nu"].is_null()) c.model.law.forcing_nu = s["forcing_nu"].get<double>();
  }
  c.model.law.L = c.model.torus.L;
  if (c.T_over_Tkin) c.model.law.T = *c.T_over_Tkin * c.model.law.T_kin();
  if (root.contains("profiles")) {
    const json& p = root["profiles"];
    reject_unknown(p, {"c", "b"}, "profiles");
    if (p.contains("c")) c.model.c = read_profile(p["c"], "profiles.c");
    if (p.contains("b")) c.model.b = read_profile(p["b"], "profiles.b");
  }
  if (root.contains("sim")) {
    const json& s = root["sim"];
    reject_unknown(s, {"dt", "t_end", "ensemble", "store_every", "dealias", "linear_companion"}, "sim");
    read(s, "dt", c.sim.dt);
    read(s, "t_end", c.sim.t_end);
    read(s, "ensemble", c.sim.ensemble_size);
    read(s, "store_every", c.sim.store_every);
    read(s, "dealias", c.sim.dealias);
    read(s, "linear_companion", c.sim.linear_companion);
  }
  if (root.contains("kinetic")) {
    const json& k = root["kinetic"];
    reject_unknown(k, {"n_radial", "n_angular", "cutoff", "dt", "t_end", "quadrature"}, "kinetic");
    read(k, "n_radial", c.kinetic.n_radial);
    read(k, "n_angular", c.kinetic.n_angular);
    read(k, "cutoff", c.kinetic.cutoff);
    read(k, "dt", c.kinetic.dt);
    read(k, "t_end", c.kinetic.t_end);
    if (k.contains("quadrature")) c.kinetic.quad = read_quad(k["quadrature"]);
  }
  if (root.contains("picard")) {
    const json& p = root["picard"];
    reject_unknown(p, {"N", "steps", "ensemble"}, "picard");
    read(p, "N", c.picard.N);
    read(p, "steps", c.picard.steps);
    read(p, "ensemble", c.picard.ensemble);
  }
  if (root.contains("sigma")) {
    const json& s = root["sigma"];
    reject_unknown(s, {"k", "tau", "nu", "varrho"}, "sigma");
    if (s.contains("k")) c.sigma.k = read_vec(s["k"]);
    read(s, "tau", c.sigma.tau);
    read(s, "nu", c.sigma.nu);
    read(s, "varrho", c.sigma.varrho);
  }
  if (root.contains("count")) {
    const json& s = root["count"];
    reject_unknown(s, {"T", "alpha", "theta", "k", "tree_order"}, "count");
    read(s, "T", c.count.T);
    read(s, "alpha", c.count.alpha);
    read(s, "theta", c.count.theta);
    read(s, "tree_order", c.count.tree_order);
    if (s.contains("k")) c.count.k = read_vec(s["k"]);
  }
  read(root, "output_dir", c.output_dir);
  read(root, "seed", c.seed);
  read(root, "threads", c.threads);
  c.sim.seed = c.seed;
  c.sim.threads = c.threads;
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  j["torus"] = {{"dim", c.model.torus.dim},
                {"L", c.model.torus.L},
                {"zeta", write_vec(c.model.torus.zeta)},
                {"cutoff", c.model.torus.cutoff}};
  json s = {{"kappa1", c.model.law.kappa1}, {"kappa2", c.model.law.kappa2}, {"nu0", c.model.law.nu0},
            {"r", c.model.r}, {"linear", c.model.law.linear}};
  if (c.T_over_Tkin)
    s["T_over_Tkin"] = *c.T_over_Tkin;
  else
    s["T"] = c.model.law.T;
  if (c.model.law.forcing_nu) s["forcing_nu"] = *c.model.law.forcing_nu;
  j["scaling"] = s;
  j["profiles"] = {{"c", write_profile(c.model.c)}, {"b", write_profile(c.model.b)}};
  j["sim"] = {{"dt", c.sim.dt},
              {"t_end", c.sim.t_end},
              {"ensemble", c.sim.ensemble_size},
              {"store_every", c.sim.store_every},
              {"dealias", c.sim.dealias},
              {"linear_companion", c.sim.linear_companion}};
  j["kinetic"] = {{"n_radial", c.kinetic.n_radial}, {"n_angular", c.kinetic.n_angular},
                  {"cutoff", c.kinetic.cutoff},     {"dt", c.kinetic.dt},
                  {"t_end", c.kinetic.t_end},       {"quadrature", write_quad(c.kinetic.quad)}};
  j["picard"] = {{"N", c.picard.N}, {"steps", c.picard.steps}, {"ensemble", c.picard.ensemble}};
  j["sigma"] = {{"k", write_vec(c.sigma.k)}, {"tau", c.sigma.tau}, {"nu", c.sigma.nu}, {"varrho", c.sigma.varrho}};
  j["count"] = {{"T", c.count.T},
                {"alpha", c.count.alpha},
                {"theta", c.count.theta},
                {"k", write_vec(c.count.k)},
                {"tree_order", c.count.tree_order}};
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  return j;
}

}  // namespace

RunConfig default_config() {
  RunConfig c;
  c.model.torus.dim = 2;
  c.model.torus.L = 8.0;
  c.model.torus.cutoff = 2.0;
  c.model.law = ScalingLaw::make(8.0, 0.5, 1.0, 4.0);
  c.model.c = SpectralProfile::gaussian(1.0, 1.0);
  c.model.b = SpectralProfile::zero();
  c.sim.t_end = 1.0;
  c.sim.ensemble_size = 64;
  c.sim.store_every = 10;
  return c;
}

void RunConfig::validate() const {
  try {
    model.validate();
    sim.validate();
    kinetic.quad.validate();
    if (T_over_Tkin && !(*T_over_Tkin > 0.0)) throw std::invalid_argument("T_over_Tkin must be positive");
    if (kinetic.n_radial < 4 || kinetic.n_angular < 4 || kinetic.n_angular % 2 != 0)
      throw std::invalid_argument("kinetic grid needs n_radial >= 4 and an even n_angular >= 4");
    if (!(kinetic.cutoff > 0.0) || !(kinetic.dt > 0.0) || !(kinetic.t_end > 0.0))
      throw std::invalid_argument("kinetic cutoff, dt and t_end must be positive");
    if (picard.N < 0 || picard.N > 4) throw std::invalid_argument("picard.N must lie in [0, 4]");
    if (picard.steps < 1 || picard.ensemble < 2) throw std::invalid_argument("picard needs steps >= 1, ensemble >= 2");
    if (!(sigma.nu > 0.0) || !(sigma.tau >= 0.0) || !(sigma.varrho >= 0.0))
      throw std::invalid_argument("sigma study needs nu > 0, tau >= 0, varrho >= 0");
    if (!(count.T > 0.0) || !(count.alpha >= 0.0) || !(count.theta >= 0.0) || count.tree_order < 0 ||
        count.tree_order > 4)
      throw std::invalid_argument("count study parameters out of range");
    if (output_dir.empty()) throw std::invalid_argument("output_dir must not be empty");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

bool RunConfig::operator==(const RunConfig& o) const { return serialize_config(*this) == serialize_config(o); }

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  try {
    c = from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config has a field of the wrong type: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) { return to_json(c).dump(2); }

std::string config_hash(const RunConfig& c) {
  // output location and thread count do not change results
  json j = to_json(c);
  j.erase("output_dir");
  j.erase("threads");
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace wavekin
