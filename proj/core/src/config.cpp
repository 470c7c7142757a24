#include "fsi/config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fsi/errors.hpp"

namespace fsi {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  if (v == "inf" || v == "infinity") return INFINITY;
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split_list(v)) out.push_back(to_double(key, s));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + fmt(xs[i]);
  return s;
}

const char* family_name(GeometrySpec::Family f) {
  switch (f) {
    case GeometrySpec::Family::Annulus: return "annulus";
    case GeometrySpec::Family::Shell: return "shell";
    case GeometrySpec::Family::Strip: return "strip";
  }
  return "?";
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["geometry.family"] = [](RunConfig& c, auto&, auto& v) { c.geometry.family = GeometrySpec::parse_family(v); };
    t["geometry.r_inner"] = [](RunConfig& c, auto& k, auto& v) { c.geometry.r_inner = to_double(k, v); };
    t["geometry.r_outer"] = [](RunConfig& c, auto& k, auto& v) { c.geometry.r_outer = to_double(k, v); };
    t["geometry.h"] = [](RunConfig& c, auto& k, auto& v) { c.geometry.h = to_double(k, v); };
    t["geometry.length"] = [](RunConfig& c, auto& k, auto& v) { c.geometry.length = to_double(k, v); };
    t["geometry.height"] = [](RunConfig& c, auto& k, auto& v) { c.geometry.height = to_double(k, v); };

    t["material.rho_B"] = [](RunConfig& c, auto& k, auto& v) { c.material.rho_B = to_double(k, v); };
    t["material.rho_L"] = [](RunConfig& c, auto& k, auto& v) { c.material.rho_L = to_double(k, v); };
    t["material.lambda"] = [](RunConfig& c, auto& k, auto& v) { c.material.lambda = to_double(k, v); };
    t["material.mu_hat"] = [](RunConfig& c, auto& k, auto& v) { c.material.mu_hat = to_double(k, v); };
    t["material.mu"] = [](RunConfig& c, auto& k, auto& v) { c.material.mu = to_double(k, v); };

    t["time.T"] = [](RunConfig& c, auto& k, auto& v) { c.fixed_point.T = to_double(k, v); };
    t["time.dt"] = [](RunConfig& c, auto& k, auto& v) { c.fixed_point.dt = to_double(k, v); };

    t["fixed_point.tol_inner"] = [](RunConfig& c, auto& k, auto& v) { c.fixed_point.tol_inner = to_double(k, v); };
    t["fixed_point.tol_outer"] = [](RunConfig& c, auto& k, auto& v) { c.fixed_point.tol_outer = to_double(k, v); };
    t["fixed_point.max_inner"] = [](RunConfig& c, auto& k, auto& v) { c.fixed_point.max_inner = to_int(k, v); };
    t["fixed_point.max_outer"] = [](RunConfig& c, auto& k, auto& v) { c.fixed_point.max_outer = to_int(k, v); };
    t["fixed_point.shrink_factor"] = [](RunConfig& c, auto& k, auto& v) {
      c.fixed_point.shrink_factor = to_double(k, v);
    };
    t["fixed_point.strikes"] = [](RunConfig& c, auto& k, auto& v) { c.fixed_point.strikes = to_int(k, v); };
    t["fixed_point.backward_euler_first_step"] = [](RunConfig& c, auto& k, auto& v) {
      c.fixed_point.backward_euler_first_step = to_bool(k, v);
    };
    t["fixed_point.interface_load"] = [](RunConfig& c, auto& k, auto& v) {
      if (v == "reaction") c.fixed_point.interface_load = InterfaceLoad::Reaction;
      else if (v == "traction") c.fixed_point.interface_load = InterfaceLoad::Traction;
      else throw ConfigError(k + ": expected reaction or traction");
    };
    t["fixed_point.compat_tol"] = [](RunConfig& c, auto& k, auto& v) { c.fixed_point.compat_tol = to_double(k, v); };
    t["fixed_point.track_energy"] = [](RunConfig& c, auto& k, auto& v) {
      c.fixed_point.track_energy = to_bool(k, v);
    };

    t["data.family"] = [](RunConfig& c, auto&, auto& v) {
      if (v != "flux-violating") parse_data_family(v);
      c.data.family = v;
    };
    t["data.amplitude"] = [](RunConfig& c, auto& k, auto& v) { c.data.amplitude = to_double(k, v); };
    t["data.u0_file"] = [](RunConfig& c, auto&, auto& v) { c.data.u0_file = v; };
    t["data.u1_file"] = [](RunConfig& c, auto&, auto& v) { c.data.u1_file = v; };
    t["data.v0_file"] = [](RunConfig& c, auto&, auto& v) { c.data.v0_file = v; };

    t["output.directory"] = [](RunConfig& c, auto&, auto& v) { c.output.directory = v; };
    t["output.vtk"] = [](RunConfig& c, auto& k, auto& v) { c.output.vtk = to_bool(k, v); };
    t["output.csv"] = [](RunConfig& c, auto& k, auto& v) { c.output.csv = to_bool(k, v); };
    t["output.iteration_dumps"] = [](RunConfig& c, auto& k, auto& v) { c.output.iteration_dumps = to_bool(k, v); };

    t["run.seed"] = [](RunConfig& c, auto& k, auto& v) {
      const long long s = to_int(k, v);
      if (s < 0) throw ConfigError(k + ": must be nonnegative");
      c.seed = static_cast<std::uint64_t>(s);
    };
    t["run.deterministic"] = [](RunConfig& c, auto& k, auto& v) { c.deterministic = to_bool(k, v); };

    t["mms.h"] = [](RunConfig& c, auto& k, auto& v) { c.mms.h = to_doubles(k, v); };
    t["mms.T"] = [](RunConfig& c, auto& k, auto& v) { c.mms.T = to_double(k, v); };
    t["mms.dt_over_h"] = [](RunConfig& c, auto& k, auto& v) { c.mms.dt_over_h = to_double(k, v); };

    t["dependence.perturbation"] = [](RunConfig& c, auto&, auto& v) {
      parse_data_family(v);
      c.dependence.perturbation = v;
    };
    t["dependence.perturbation_amplitude"] = [](RunConfig& c, auto& k, auto& v) {
      c.dependence.perturbation_amplitude = to_double(k, v);
    };
    t["dependence.eps"] = [](RunConfig& c, auto& k, auto& v) { c.dependence.eps = to_doubles(k, v); };

    t["inequalities.lemmas"] = [](RunConfig& c, auto& k, auto& v) {
      c.inequalities.lemmas.clear();
      for (const auto& s : split_list(v)) c.inequalities.lemmas.push_back(parse_lemma_id(s));
      if (c.inequalities.lemmas.empty()) throw ConfigError(k + ": empty list");
    };
    t["inequalities.samples"] = [](RunConfig& c, auto& k, auto& v) { c.inequalities.samples = to_int(k, v); };
    t["inequalities.T_grid"] = [](RunConfig& c, auto& k, auto& v) { c.inequalities.T_grid = to_doubles(k, v); };
    t["inequalities.theta"] = [](RunConfig& c, auto& k, auto& v) { c.inequalities.params.theta = to_double(k, v); };
    t["inequalities.m1"] = [](RunConfig& c, auto& k, auto& v) { c.inequalities.params.m1 = to_double(k, v); };
    t["inequalities.m2"] = [](RunConfig& c, auto& k, auto& v) { c.inequalities.params.m2 = to_double(k, v); };
    t["inequalities.s"] = [](RunConfig& c, auto& k, auto& v) { c.inequalities.params.s = to_double(k, v); };
    t["inequalities.sigma"] = [](RunConfig& c, auto& k, auto& v) { c.inequalities.params.sigma = to_double(k, v); };
    t["inequalities.p"] = [](RunConfig& c, auto& k, auto& v) { c.inequalities.params.p = to_double(k, v); };
    t["inequalities.q"] = [](RunConfig& c, auto& k, auto& v) { c.inequalities.params.q = to_double(k, v); };
    t["inequalities.s1"] = [](RunConfig& c, auto& k, auto& v) { c.inequalities.params.s1 = to_double(k, v); };
    t["inequalities.s2"] = [](RunConfig& c, auto& k, auto& v) { c.inequalities.params.s2 = to_double(k, v); };
    return t;
  }();
  return table;
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty()) return path;
  fs::path p(path);
  if (p.is_relative()) p = fs::path(base_dir) / p;
  if (!fs::exists(p)) throw ConfigError("data file not found: " + p.string());
  return p.lexically_normal().string();
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  RunConfig cfg;
  const auto& table = setters();
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("key '" + section + "' outside a section");
    for (const auto& [key, node] : body) {
      const std::string full = section + "." + key;
      auto it = table.find(full);
      if (it == table.end()) throw ConfigError("unknown setting '" + full + "'");
      it->second(cfg, full, trim(node.get_value<std::string>()));
    }
  }
  auto& d = cfg.data;
  const int set = !d.u0_file.empty() + !d.u1_file.empty() + !d.v0_file.empty();
  if (set != 0 && set != 3) throw ConfigError("data: u0_file, u1_file and v0_file must be given together");
  d.u0_file = resolve(d.u0_file, base_dir);
  d.u1_file = resolve(d.u1_file, base_dir);
  d.v0_file = resolve(d.v0_file, base_dir);
  cfg.material.validate();
  cfg.fixed_point.validate();
  if (cfg.inequalities.samples < 1) throw ConfigError("inequalities.samples must be positive");
  if (cfg.output.directory.empty()) throw ConfigError("output.directory must not be empty");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  const fs::path parent = fs::path(path).parent_path();
  return parse_config(ss.str(), parent.empty() ? "." : parent.string());
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  const auto& g = geometry;
  os << "geometry.family = " << family_name(g.family) << '\n'
     << "geometry.r_inner = " << fmt(g.r_inner) << '\n'
     << "geometry.r_outer = " << fmt(g.r_outer) << '\n'
     << "geometry.h = " << fmt(g.h) << '\n'
     << "geometry.length = " << fmt(g.length) << '\n'
     << "geometry.height = " << fmt(g.height) << '\n';
  const auto& m = material;
  os << "material.rho_B = " << fmt(m.rho_B) << '\n'
     << "material.rho_L = " << fmt(m.rho_L) << '\n'
     << "material.lambda = " << fmt(m.lambda) << '\n'
     << "material.mu_hat = " << fmt(m.mu_hat) << '\n'
     << "material.mu = " << fmt(m.mu) << '\n';
  const auto& f = fixed_point;
  os << "time.T = " << fmt(f.T) << '\n'
     << "time.dt = " << fmt(f.dt) << '\n'
     << "fixed_point.tol_inner = " << fmt(f.tol_inner) << '\n'
     << "fixed_point.tol_outer = " << fmt(f.tol_outer) << '\n'
     << "fixed_point.max_inner = " << f.max_inner << '\n'
     << "fixed_point.max_outer = " << f.max_outer << '\n'
     << "fixed_point.shrink_factor = " << fmt(f.shrink_factor) << '\n'
     << "fixed_point.strikes = " << f.strikes << '\n'
     << "fixed_point.backward_euler_first_step = " << f.backward_euler_first_step << '\n'
     << "fixed_point.interface_load = " << (f.interface_load == InterfaceLoad::Reaction ? "reaction" : "traction")
     << '\n'
     << "fixed_point.compat_tol = " << fmt(f.compat_tol) << '\n'
     << "fixed_point.track_energy = " << f.track_energy << '\n';
  os << "data.family = " << data.family << '\n'
     << "data.amplitude = " << fmt(data.amplitude) << '\n'
     << "data.u0_file = " << data.u0_file << '\n'
     << "data.u1_file = " << data.u1_file << '\n'
     << "data.v0_file = " << data.v0_file << '\n';
  os << "mms.h = " << join(mms.h) << '\n'
     << "mms.T = " << fmt(mms.T) << '\n'
     << "mms.dt_over_h = " << fmt(mms.dt_over_h) << '\n';
  os << "dependence.perturbation = " << dependence.perturbation << '\n'
     << "dependence.perturbation_amplitude = " << fmt(dependence.perturbation_amplitude) << '\n'
     << "dependence.eps = " << join(dependence.eps) << '\n';
  const auto& q = inequalities;
  os << "inequalities.lemmas = ";
  for (size_t i = 0; i < q.lemmas.size(); ++i) os << (i ? "," : "") << to_string(q.lemmas[i]);
  os << '\n'
     << "inequalities.samples = " << q.samples << '\n'
     << "inequalities.T_grid = " << join(q.T_grid) << '\n'
     << "inequalities.theta = " << fmt(q.params.theta) << '\n'
     << "inequalities.m1 = " << fmt(q.params.m1) << '\n'
     << "inequalities.m2 = " << fmt(q.params.m2) << '\n'
     << "inequalities.s = " << fmt(q.params.s) << '\n'
     << "inequalities.sigma = " << fmt(q.params.sigma) << '\n'
     << "inequalities.p = " << fmt(q.params.p) << '\n'
     << "inequalities.q = " << fmt(q.params.q) << '\n'
     << "inequalities.s1 = " << fmt(q.params.s1) << '\n'
     << "inequalities.s2 = " << fmt(q.params.s2) << '\n';
  os << "run.seed = " << seed << '\n' << "run.deterministic = " << deterministic << '\n';
  return os.str();
}

std::string RunConfig::hash() const {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
  return buf;
}

FieldSnapshot read_field_file(const std::string& path, const SpacePtr& space, int components) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read field file " + path);
  std::vector<double> vals;
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    vals.push_back(to_double(path, line));
  }
  const int n = space->num_dofs() * components;
  if (static_cast<int>(vals.size()) != n)
    throw ShapeError(path + ": expected " + std::to_string(n) + " values, got " + std::to_string(vals.size()));
  return FieldSnapshot(space, components, Eigen::Map<Eigen::VectorXd>(vals.data(), n), 0.0);
}

void write_field_file(const std::string& path, const FieldSnapshot& f) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path);
  for (int i = 0; i < f.values.size(); ++i) os << fmt(f.values(i)) << '\n';
}

}  // namespace fsi
