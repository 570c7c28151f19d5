#include "run_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tpbessel/errors.hpp"

namespace tpbcli {

namespace {

std::string trim(const std::string& s)
{
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string norm_key(std::string k)
{
  k = trim(k);
  if (k.rfind("--", 0) == 0) k = k.substr(2);
  std::replace(k.begin(), k.end(), '_', '-');
  return k;
}

std::vector<std::string> split(const std::string& s, char sep)
{
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double to_num(const std::string& key, const std::string& v)
{
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty()) return d;
  } catch (const std::exception&) {
  }
  throw config_error("invalid number for " + key + ": '" + v + "'");
}

int to_int(const std::string& key, const std::string& v)
{
  double d = to_num(key, v);
  if (d != std::floor(d) || std::abs(d) > 1e9) throw config_error("invalid integer for " + key + ": '" + v + "'");
  return static_cast<int>(d);
}

bool to_bool(const std::string& key, const std::string& v)
{
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw config_error("invalid boolean for " + key + ": '" + v + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& v)
{
  std::vector<double> out;
  for (const auto& p : split(v, ',')) out.push_back(to_num(key, p));
  return out;
}

std::vector<int> to_ints(const std::string& key, const std::string& v)
{
  std::vector<int> out;
  for (const auto& p : split(v, ',')) out.push_back(to_int(key, p));
  return out;
}

std::string num(double x)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string cnum(cdouble z) { return num(z.real()) + "," + num(z.imag()); }

template <class T> std::string join(const std::vector<T>& v, const char* sep, std::string (*f)(T))
{
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += f(v[i]);
  }
  return out;
}

std::string inum(int x) { return std::to_string(x); }

const std::vector<std::string> kFunctions = {"J", "Y", "H1", "H2", "J'", "Y'", "H1'", "H2'"};

}  // namespace

cdouble parse_complex(const std::string& s)
{
  auto parts = split(s, ',');
  if (parts.size() == 1) return {to_num("z", parts[0]), 0.0};
  if (parts.size() == 2) return {to_num("z", parts[0]), to_num("z", parts[1])};
  throw config_error("invalid complex number '" + s + "' (expected re,im)");
}

const char* command_name(Command c)
{
  switch (c) {
    case Command::error_map: return "error-map";
    case Command::nu_sweep: return "nu-sweep";
    case Command::contour_convergence: return "contour-convergence";
    case Command::table1_fit: return "table1-fit";
  }
  return "?";
}

const char* method_name(Method m)
{
  switch (m) {
    case Method::lg: return "lg";
    case Method::airy_type: return "airy-type";
    case Method::both: return "both";
  }
  return "?";
}

const std::vector<std::string>& config_keys()
{
  static const std::vector<std::string> keys = {
      "command", "nu", "nu-min", "nu-max", "nu-count", "nu-log", "nu-list", "z", "grid", "grid-count",
      "random-points", "inside-contour", "function", "method", "contour-center", "contour-radius",
      "nodes", "terms", "margin", "nu-guard", "threshold", "seed", "threads", "n-list", "n-ref",
      "precision", "oracle-cache", "compute-oracle", "output"};
  return keys;
}

void apply_setting(RunConfig& c, const std::string& raw_key, const std::string& raw_value)
{
  const std::string key = norm_key(raw_key);
  const std::string v = trim(raw_value);
  if (key == "command") {
    if (v == "error-map") c.command = Command::error_map;
    else if (v == "nu-sweep") c.command = Command::nu_sweep;
    else if (v == "contour-convergence") c.command = Command::contour_convergence;
    else if (v == "table1-fit") c.command = Command::table1_fit;
    else throw config_error("unknown command '" + v + "'");
  } else if (key == "nu") {
    c.nu = to_num(key, v);
  } else if (key == "nu-min") {
    c.nu_min = to_num(key, v);
  } else if (key == "nu-max") {
    c.nu_max = to_num(key, v);
  } else if (key == "nu-count") {
    c.nu_count = to_int(key, v);
  } else if (key == "nu-log") {
    c.nu_log = to_bool(key, v);
  } else if (key == "nu-list") {
    c.nu_list = to_doubles(key, v);
  } else if (key == "z") {
    c.z.clear();
    for (const auto& p : split(v, ';')) c.z.push_back(parse_complex(p));
  } else if (key == "grid") {
    auto g = to_doubles(key, v);
    if (g.size() != 4) throw config_error("grid needs x0,x1,y0,y1");
    c.grid_x0 = g[0];
    c.grid_x1 = g[1];
    c.grid_y0 = g[2];
    c.grid_y1 = g[3];
  } else if (key == "grid-count") {
    auto g = to_ints(key, v);
    if (g.size() != 2) throw config_error("grid-count needs nx,ny");
    c.grid_nx = g[0];
    c.grid_ny = g[1];
  } else if (key == "random-points") {
    c.random_points = to_int(key, v);
  } else if (key == "inside-contour") {
    c.inside_contour = to_bool(key, v);
  } else if (key == "function") {
    if (std::find(kFunctions.begin(), kFunctions.end(), v) == kFunctions.end())
      throw config_error("unknown function '" + v + "'");
    c.function = v;
  } else if (key == "method") {
    if (v == "lg") c.method = Method::lg;
    else if (v == "airy-type") c.method = Method::airy_type;
    else if (v == "both") c.method = Method::both;
    else throw config_error("unknown method '" + v + "'");
  } else if (key == "contour-center") {
    c.contour_center = parse_complex(v);
  } else if (key == "contour-radius") {
    c.contour_radius = to_num(key, v);
  } else if (key == "nodes") {
    c.nodes = to_int(key, v);
  } else if (key == "terms") {
    c.terms = to_ints(key, v);
  } else if (key == "margin") {
    c.margin = to_num(key, v);
  } else if (key == "nu-guard") {
    c.nu_guard = to_num(key, v);
  } else if (key == "threshold") {
    c.threshold = to_num(key, v);
  } else if (key == "seed") {
    try {
      std::size_t pos = 0;
      c.seed = std::stoull(v, &pos);
      if (pos != v.size()) throw config_error("");
    } catch (const std::exception&) {
      throw config_error("invalid seed '" + v + "'");
    }
  } else if (key == "threads") {
    c.threads = to_int(key, v);
  } else if (key == "n-list") {
    c.n_list = to_ints(key, v);
  } else if (key == "n-ref") {
    c.n_ref = to_int(key, v);
  } else if (key == "precision") {
    if (v == "double") c.precision = Precision::double_;
    else if (v == "ext") c.precision = Precision::ext;
    else throw config_error("precision must be double or ext");
  } else if (key == "oracle-cache") {
    c.oracle_cache = v;
  } else if (key == "compute-oracle") {
    c.compute_oracle = to_bool(key, v);
  } else if (key == "output") {
    c.output = v;
  } else {
    throw config_error("unknown key '" + raw_key + "'");
  }
}

Settings read_config_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw config_error("cannot read config file " + path);
  Settings out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

Settings describe(const RunConfig& c)
{
  Settings d;
  d.emplace_back("command", command_name(c.command));
  d.emplace_back("nu", num(c.nu));
  d.emplace_back("nu-min", num(c.nu_min));
  d.emplace_back("nu-max", num(c.nu_max));
  d.emplace_back("nu-count", inum(c.nu_count));
  d.emplace_back("nu-log", c.nu_log ? "true" : "false");
  d.emplace_back("nu-list", join<double>(c.nu_list, ",", num));
  d.emplace_back("z", join<cdouble>(c.z, ";", cnum));
  d.emplace_back("grid", num(c.grid_x0) + "," + num(c.grid_x1) + "," + num(c.grid_y0) + "," + num(c.grid_y1));
  d.emplace_back("grid-count", inum(c.grid_nx) + "," + inum(c.grid_ny));
  d.emplace_back("random-points", inum(c.random_points));
  d.emplace_back("inside-contour", c.inside_contour ? "true" : "false");
  d.emplace_back("function", c.function);
  d.emplace_back("method", method_name(c.method));
  d.emplace_back("contour-center", cnum(c.contour_center));
  d.emplace_back("contour-radius", num(c.contour_radius));
  d.emplace_back("nodes", inum(c.nodes));
  d.emplace_back("terms", join<int>(c.terms, ",", inum));
  d.emplace_back("margin", num(c.margin));
  d.emplace_back("nu-guard", num(c.nu_guard));
  d.emplace_back("threshold", num(c.threshold));
  d.emplace_back("seed", std::to_string(c.seed));
  d.emplace_back("threads", inum(c.threads));
  d.emplace_back("n-list", join<int>(c.n_list, ",", inum));
  d.emplace_back("n-ref", inum(c.n_ref));
  d.emplace_back("precision", c.precision == Precision::ext ? "ext" : "double");
  d.emplace_back("oracle-cache", c.oracle_cache);
  d.emplace_back("compute-oracle", c.compute_oracle ? "true" : "false");
  d.emplace_back("output", c.output);
  return d;
}

RunConfig defaults_for(Command c)
{
  RunConfig r;
  r.command = c;
  switch (c) {
    case Command::error_map:
      break;
    case Command::nu_sweep:
      r.nu_min = 10.0;
      r.nu_max = 200.0;
      r.nu_count = 20;
      r.method = Method::airy_type;
      break;
    case Command::contour_convergence:
      r.nu = 10.25;
      r.method = Method::airy_type;
      break;
    case Command::table1_fit:
      r.nu_list = {5.25, 8.25, 12.25, 16.25, 20.25};
      r.z = {cdouble(1.0, 0.0), cdouble(1.0, 0.05)};
      r.terms = {6, 10};
      r.method = Method::airy_type;
      break;
  }
  return r;
}

RunConfig build_config(const Settings& file, const Settings& flags)
{
  Command cmd = Command::error_map;
  bool found = false;
  for (const auto* src : {&flags, &file}) {
    for (const auto& [k, v] : *src) {
      if (norm_key(k) == "command") {
        RunConfig probe;
        apply_setting(probe, k, v);
        cmd = probe.command;
        found = true;
        break;
      }
    }
    if (found) break;
  }
  if (!found) throw config_error("no command given");
  RunConfig cfg = defaults_for(cmd);
  for (const auto& [k, v] : file) apply_setting(cfg, k, v);
  for (const auto& [k, v] : flags) apply_setting(cfg, k, v);
  cfg.command = cmd;
  return cfg;
}

tpbessel::ContourSpec RunConfig::contour(int n_terms) const
{
  tpbessel::ContourSpec s;
  s.center = contour_center;
  s.radius = contour_radius;
  s.nodes = nodes;
  s.m = n_terms / 2;
  return s;
}

std::vector<double> RunConfig::nu_values() const
{
  if (!nu_list.empty()) return nu_list;
  if (nu_count <= 0) return {nu};
  if (nu_count == 1) return {nu_min};
  std::vector<double> out;
  for (int i = 0; i < nu_count; ++i) {
    double t = static_cast<double>(i) / (nu_count - 1);
    out.push_back(nu_log ? nu_min * std::pow(nu_max / nu_min, t) : nu_min + (nu_max - nu_min) * t);
  }
  return out;
}

void RunConfig::validate() const
{
  if (grid_nx < 1 || grid_ny < 1) throw config_error("grid counts must be >= 1");
  if (random_points < 0) throw config_error("random-points must be >= 0");
  if (!(grid_x1 >= grid_x0) || !(grid_y1 >= grid_y0)) throw config_error("grid corners out of order");
  if (!(threshold > 0)) throw config_error("threshold must be > 0");
  if (z.empty()) throw config_error("z list is empty");
  if (terms.empty()) throw config_error("terms list is empty");
  for (double v : nu_values())
    if (!(v > 0) || !std::isfinite(v)) throw config_error("nu values must be positive");
  if (nu_count > 1 && !(nu_max > nu_min)) throw config_error("nu-max must exceed nu-min");
  if (nu_log && nu_count > 1 && !(nu_min > 0)) throw config_error("log sweep needs nu-min > 0");
  if (!(margin >= 0 && margin < 1)) throw config_error("margin must lie in [0, 1)");
  if (threads < 0) throw config_error("threads must be >= 0");
  const bool needs_airy = method != Method::lg || command == Command::contour_convergence ||
                          command == Command::table1_fit;
  for (int n : terms) {
    if (n < 0 || n > 20) throw config_error("terms must lie in [0, 20]");
    if (needs_airy) {
      if (n < 2 || n % 2) throw config_error("airy-type needs an even number of terms >= 2");
      try {
        contour(n).validate();
      } catch (const tpbessel::spec_error& e) {
        throw config_error(std::string("contour: ") + e.what());
      }
    }
  }
  if (method == Method::lg && (function == "Y" || function == "Y'") && command != Command::table1_fit &&
      command != Command::contour_convergence)
    throw config_error("Y is not available from the exponential forms; use airy-type");
  if (command == Command::contour_convergence) {
    if (n_list.empty()) throw config_error("n-list is empty");
    for (int n : n_list)
      if (n < 8 || n > n_ref) throw config_error("n-list entries must lie in [8, n-ref]");
  }
  if (command == Command::table1_fit && nu_values().size() < 3)
    throw config_error("table1-fit needs at least 3 nu values");
}

}  // namespace tpbcli
