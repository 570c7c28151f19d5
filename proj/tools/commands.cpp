#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "tpbessel/cauchy_tp.hpp"
#include "tpbessel/errors.hpp"
#include "tpbessel/lg_bessel.hpp"

namespace tpbcli {

using namespace tpbessel;

missing_oracle::missing_oracle(std::vector<std::string> points)
    : std::runtime_error("oracle cache is missing " + std::to_string(points.size()) + " value(s)"),
      points_(std::move(points))
{
}

std::string fmt17(double x)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

void parallel_for(int n, int threads, const std::function<void(int)>& f)
{
  if (n <= 0) return;
  int t = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  t = std::clamp(t, 1, n);
  if (t == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int k = 0; k < t; ++k) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(mu);
          if (!first) first = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first) std::rethrow_exception(first);
}

std::optional<OracleFn> oracle_fn(const std::string& f)
{
  static const std::map<std::string, OracleFn> m = {
      {"J", OracleFn::J},    {"Y", OracleFn::Y},    {"H1", OracleFn::H1},   {"H2", OracleFn::H2},
      {"J'", OracleFn::Jp},  {"Y'", OracleFn::Yp},  {"H1'", OracleFn::H1p}, {"H2'", OracleFn::H2p}};
  auto it = m.find(f);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

double table1_constant(int n)
{
  switch (n) {
    case 4: return 0.00015;
    case 6: return 0.00013;
    case 8: return 0.00021;
    case 10: return 0.00051;
    case 12: return 0.0018;
    case 14: return 0.0089;
    case 16: return 0.056;
    case 18: return 0.46;
    default: return 0.0;
  }
}

PowerFit fit_power_law(const std::vector<double>& nu, const std::vector<double>& err)
{
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < nu.size() && i < err.size(); ++i) {
    if (!(err[i] > 0) || !(nu[i] > 0)) continue;
    double x = std::log(nu[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  PowerFit f;
  f.used = n;
  double den = n * sxx - sx * sx;
  if (n < 2 || den == 0.0) return f;
  f.slope = (n * sxy - sx * sy) / den;
  f.constant = std::exp((sy - f.slope * sx) / n);
  return f;
}

namespace {

bool near_integer(double nu) { return std::abs(nu - std::round(nu)) < 0.05; }

// Mirrors the oracle's own domain checks so that refusals are not reported
// as missing cache data.
bool oracle_accepts(const OracleRequest& r)
{
  bool needs_y = r.fn != OracleFn::J && r.fn != OracleFn::Jp;
  if (needs_y && near_integer(r.nu)) return false;
  if (r.z == cdouble(0.0)) return false;
  return r.nu >= 0.0;
}

std::string describe_request(const OracleRequest& r)
{
  char buf[160];
  std::snprintf(buf, sizeof buf, "nu=%.17g z=(%.17g,%.17g) %s", r.nu, r.z.real(), r.z.imag(),
                oracle_tag(r.fn));
  return buf;
}

}  // namespace

OracleSource::OracleSource(std::string cache_path, bool compute, int threads)
    : path_(std::move(cache_path)), compute_(compute), threads_(threads)
{
  if (!path_.empty()) cache_.load(path_);
}

void OracleSource::prefetch(const std::vector<OracleRequest>& reqs)
{
  std::vector<OracleRequest> missing;
  for (const auto& r : reqs) {
    if (!oracle_accepts(r) || cache_.find(r.nu, r.z, r.fn)) continue;
    bool dup = std::any_of(missing.begin(), missing.end(), [&](const OracleRequest& m) {
      return m.nu == r.nu && m.z == r.z && m.fn == r.fn;
    });
    if (!dup) missing.push_back(r);
  }
  if (missing.empty()) return;
  if (!compute_) {
    std::vector<std::string> pts;
    for (const auto& m : missing) pts.push_back(describe_request(m));
    throw missing_oracle(std::move(pts));
  }
  std::mutex mu;
  parallel_for(static_cast<int>(missing.size()), threads_, [&](int i) {
    const auto& m = missing[i];
    try {
      cache_.insert(m.nu, m.z, m.fn, oracle_eval(m.fn, m.nu, m.z));
    } catch (const tpbessel::domain_error&) {
      std::lock_guard<std::mutex> lk(mu);
      rejected_.push_back(m);
    } catch (const precision_error&) {
      std::lock_guard<std::mutex> lk(mu);
      rejected_.push_back(m);
    }
  });
  if (!path_.empty()) cache_.save(path_);
}

bool OracleSource::available(const OracleRequest& r) const
{
  return oracle_accepts(r) && cache_.find(r.nu, r.z, r.fn).has_value();
}

cdouble OracleSource::value(const OracleRequest& r) const
{
  auto v = cache_.find(r.nu, r.z, r.fn);
  if (!v) throw missing_oracle({describe_request(r)});
  return *v;
}

namespace {

struct Evaluated {
  bool ok = false;
  cdouble value;
};

bool is_derivative(const std::string& f) { return !f.empty() && f.back() == '\''; }

Evaluated eval_lg(const std::string& function, double nu, cdouble z, int n)
{
  std::string base = is_derivative(function) ? function.substr(0, function.size() - 1) : function;
  LGFunction f = base == "J" ? LGFunction::J : base == "H1" ? LGFunction::H1 : LGFunction::H2;
  try {
    LGValue v = lg_eval({nu, z, n, f});
    return {true, is_derivative(function) ? v.derivative : v.value};
  } catch (const guard_error&) {
  } catch (const tpbessel::domain_error&) {
  }
  return {};
}

cdouble pick(const EvalResult& r, const std::string& f)
{
  if (f == "J") return r.J;
  if (f == "Y") return r.Y;
  if (f == "H1") return r.H1;
  if (f == "H2") return r.H2;
  if (f == "J'") return r.Jp;
  if (f == "Y'") return r.Yp;
  if (f == "H1'") return r.H1p;
  return r.H2p;
}

Evaluated eval_airy(const AiryTypeEvaluator& ev, const std::string& function, double nu, cdouble z)
{
  try {
    return {true, pick(ev.eval(nu, z), function)};
  } catch (const guard_error&) {
  } catch (const tpbessel::domain_error&) {
  }
  return {};
}

CauchyOptions cauchy_options(const RunConfig& cfg)
{
  CauchyOptions o;
  o.margin_fraction = cfg.margin;
  o.nu_min = cfg.nu_guard;
  return o;
}

void write_header(std::ostringstream& out, const RunConfig& cfg)
{
  out << "# tpbessel " << command_name(cfg.command) << "\n";
  for (const auto& [k, v] : describe(cfg)) out << "# " << k << " = " << v << "\n";
}

struct Row {
  double nu;
  cdouble z;
  Method method;
  int n;
  Evaluated eval;
};

// Shared tail of error-map and nu-sweep: fetch oracle values, write rows.
CommandResult finish_rows(const RunConfig& cfg, OracleSource& oracle, const std::vector<Row>& rows)
{
  const OracleFn fn = *oracle_fn(cfg.function);
  std::vector<OracleRequest> reqs;
  for (const auto& r : rows)
    if (r.eval.ok) reqs.push_back({r.nu, r.z, fn});
  oracle.prefetch(reqs);

  std::ostringstream out;
  write_header(out, cfg);
  out << "nu,re_z,im_z,method,n_terms,value_re,value_im,ref_re,ref_im,rel_err,status\n";
  int evaluated = 0, failed = 0;
  for (const auto& r : rows) {
    out << fmt17(r.nu) << ',' << fmt17(r.z.real()) << ',' << fmt17(r.z.imag()) << ','
        << method_name(r.method) << ',' << r.n << ',';
    if (!r.eval.ok) {
      out << ",,,,,guard\n";
      continue;
    }
    out << fmt17(r.eval.value.real()) << ',' << fmt17(r.eval.value.imag()) << ',';
    OracleRequest q{r.nu, r.z, fn};
    if (!oracle.available(q)) {
      out << ",,,no-oracle\n";
      continue;
    }
    cdouble ref = oracle.value(q);
    double e = rel_err(r.eval.value, ref);
    ++evaluated;
    bool fail = !(e <= cfg.threshold);
    failed += fail;
    out << fmt17(ref.real()) << ',' << fmt17(ref.imag()) << ',' << fmt17(e) << ','
        << (fail ? "fail" : "ok") << "\n";
  }
  out << "# evaluated = " << evaluated << "\n";
  out << "# above_threshold = " << failed << "\n";
  CommandResult res;
  res.csv = out.str();
  bool any_ok = std::any_of(rows.begin(), rows.end(), [](const Row& r) { return r.eval.ok; });
  if (!rows.empty() && !any_ok) {
    res.exit_code = kGuardRejected;
    res.message = "every point was rejected by the validity guards";
  }
  return res;
}

std::vector<Method> methods(Method m)
{
  if (m == Method::both) return {Method::lg, Method::airy_type};
  return {m};
}

}  // namespace

std::vector<cdouble> grid_points(const RunConfig& cfg)
{
  std::vector<cdouble> pts;
  const ContourSpec spec = cfg.contour(cfg.terms.front() >= 2 ? cfg.terms.front() : 14);
  const double keep = spec.radius * (1.0 - cfg.margin);
  auto inside = [&](cdouble z) { return !cfg.inside_contour || std::abs(z - spec.center) <= keep; };
  if (cfg.random_points > 0) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> ux(cfg.grid_x0, cfg.grid_x1), uy(cfg.grid_y0, cfg.grid_y1);
    long tries = 0;
    const long max_tries = 1000L * cfg.random_points + 1000;
    while (static_cast<int>(pts.size()) < cfg.random_points && tries++ < max_tries) {
      double x = ux(rng);
      double y = uy(rng);
      cdouble z(x, y);
      if (inside(z)) pts.push_back(z);
    }
    return pts;
  }
  for (int j = 0; j < cfg.grid_ny; ++j) {
    double y = cfg.grid_ny == 1 ? cfg.grid_y0 : cfg.grid_y0 + (cfg.grid_y1 - cfg.grid_y0) * j / (cfg.grid_ny - 1);
    for (int i = 0; i < cfg.grid_nx; ++i) {
      double x = cfg.grid_nx == 1 ? cfg.grid_x0 : cfg.grid_x0 + (cfg.grid_x1 - cfg.grid_x0) * i / (cfg.grid_nx - 1);
      cdouble z(x, y);
      if (inside(z)) pts.push_back(z);
    }
  }
  return pts;
}

CommandResult run_error_map(const RunConfig& cfg, OracleSource& oracle)
{
  const auto pts = grid_points(cfg);
  const int n = cfg.terms.front();
  const auto ms = methods(cfg.method);
  std::unique_ptr<AiryTypeEvaluator> ev;
  if (cfg.method != Method::lg)
    ev = std::make_unique<AiryTypeEvaluator>(cauchy_options(cfg), cfg.contour(n),
                                             ContourSpec{{1.0, 0.0}, 0.5, 150, n / 2});
  std::vector<Row> rows(pts.size() * ms.size());
  parallel_for(static_cast<int>(pts.size()), cfg.threads, [&](int i) {
    for (std::size_t k = 0; k < ms.size(); ++k) {
      Row& r = rows[i * ms.size() + k];
      r = {cfg.nu, pts[i], ms[k], n, {}};
      r.eval = ms[k] == Method::lg ? eval_lg(cfg.function, cfg.nu, pts[i], n)
                                   : eval_airy(*ev, cfg.function, cfg.nu, pts[i]);
    }
  });
  return finish_rows(cfg, oracle, rows);
}

CommandResult run_nu_sweep(const RunConfig& cfg, OracleSource& oracle)
{
  const auto nus = cfg.nu_values();
  const auto ms = methods(cfg.method);
  std::map<int, std::unique_ptr<AiryTypeEvaluator>> evs;
  if (cfg.method != Method::lg)
    for (int n : cfg.terms)
      evs[n] = std::make_unique<AiryTypeEvaluator>(cauchy_options(cfg), cfg.contour(n),
                                                   ContourSpec{{1.0, 0.0}, 0.5, 150, n / 2});
  struct Task {
    cdouble z;
    int n;
    double nu;
    Method m;
  };
  std::vector<Task> tasks;
  for (cdouble z : cfg.z)
    for (int n : cfg.terms)
      for (Method m : ms)
        for (double nu : nus) tasks.push_back({z, n, nu, m});
  std::vector<Row> rows(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), cfg.threads, [&](int i) {
    const Task& t = tasks[i];
    rows[i] = {t.nu, t.z, t.m, t.n, {}};
    rows[i].eval = t.m == Method::lg ? eval_lg(cfg.function, t.nu, t.z, t.n)
                                     : eval_airy(*evs.at(t.n), cfg.function, t.nu, t.z);
  });
  return finish_rows(cfg, oracle, rows);
}

namespace {

void check_inside(const RunConfig& cfg, const ContourSpec& spec, double nu, cdouble z)
{
  if (!(nu >= cfg.nu_guard)) throw guard_error("nu below nu-guard");
  if (!(std::abs(z - spec.center) <= spec.radius * (1.0 - cfg.margin)))
    throw guard_error("z outside the contour minus the margin");
}

template <class R>
std::vector<TPCoeffsT<R>> coeffs_for_sizes(const RunConfig& cfg, const std::vector<int>& sizes, cdouble z)
{
  std::vector<TPCoeffsT<R>> out(sizes.size());
  parallel_for(static_cast<int>(sizes.size()), cfg.threads, [&](int i) {
    ContourSpec s = cfg.contour(cfg.terms.front());
    s.nodes = sizes[i];
    auto table = ContourTableT<R>::build(s);
    auto nodes = assemble_nodes<R>(table, R(cfg.nu));
    out[i] = tp_coeffs_generic<R>(table, nodes, from_cdouble<R>(z));
  });
  return out;
}

template <class R> double rel(const complex_t<R>& a, const complex_t<R>& ref)
{
  return static_cast<double>(abs(a - ref) / abs(ref));
}

}  // namespace

CommandResult run_contour_convergence(const RunConfig& cfg)
{
  const ContourSpec spec = cfg.contour(cfg.terms.front());
  std::vector<int> sizes = cfg.n_list;
  sizes.push_back(cfg.n_ref);

  std::ostringstream out;
  write_header(out, cfg);
  if (cfg.precision == Precision::double_)
    out << "# note = double precision; deviations near 1e-16 are rounding, not discretization\n";
  out << "re_z,im_z,nu,precision,N,dev_A,dev_B\n";
  for (cdouble z : cfg.z) {
    check_inside(cfg, spec, cfg.nu, z);
    std::vector<double> devA(cfg.n_list.size()), devB(cfg.n_list.size());
    if (cfg.precision == Precision::ext) {
      auto c = coeffs_for_sizes<ext_real>(cfg, sizes, z);
      for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
        devA[i] = rel<ext_real>(c[i].A, c.back().A);
        devB[i] = rel<ext_real>(c[i].B, c.back().B);
      }
    } else {
      auto c = coeffs_for_sizes<double>(cfg, sizes, z);
      for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
        devA[i] = rel_err(c[i].A, c.back().A);
        devB[i] = rel_err(c[i].B, c.back().B);
      }
    }
    std::vector<double> xs, ya, yb;
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
      out << fmt17(z.real()) << ',' << fmt17(z.imag()) << ',' << fmt17(cfg.nu) << ','
          << (cfg.precision == Precision::ext ? "ext" : "double") << ',' << cfg.n_list[i] << ','
          << fmt17(devA[i]) << ',' << fmt17(devB[i]) << "\n";
      if (devA[i] > 0 && devB[i] > 0) {
        xs.push_back(cfg.n_list[i]);
        ya.push_back(std::log10(devA[i]));
        yb.push_back(std::log10(devB[i]));
      }
    }
    auto slope = [&](const std::vector<double>& y) {
      double mx = 0, my = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += y[i];
      mx /= xs.size();
      my /= xs.size();
      double num = 0, den = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) num += (xs[i] - mx) * (y[i] - my), den += (xs[i] - mx) * (xs[i] - mx);
      return num / den;
    };
    if (xs.size() >= 2)
      out << "# slope_log10_per_node z=" << fmt17(z.real()) << ',' << fmt17(z.imag()) << " A = " << fmt17(slope(ya))
          << " B = " << fmt17(slope(yb)) << "\n";
  }
  return {out.str(), kOk, ""};
}

CommandResult run_table1_fit(const RunConfig& cfg, OracleSource& oracle)
{
  const auto nus = cfg.nu_values();
  if (nus.size() < 3) throw config_error("table1-fit needs at least 3 nu values");
  for (cdouble z : cfg.z)
    for (int n : cfg.terms)
      for (double nu : nus) check_inside(cfg, cfg.contour(n), nu, z);

  const bool ext = cfg.precision == Precision::ext;
  if (!ext) {
    std::vector<OracleRequest> reqs;
    for (cdouble z : cfg.z)
      for (double nu : nus) reqs.push_back({nu, z, OracleFn::H1});
    oracle.prefetch(reqs);
  }

  std::ostringstream out;
  write_header(out, cfg);
  out << "kind,n_terms,nu,re_z,im_z,rel_err,slope,constant,table_constant,ratio\n";
  for (int n : cfg.terms) {
    const ContourSpec spec = cfg.contour(n);
    std::vector<double> err(nus.size() * cfg.z.size());
    if (ext) {
      auto table = ContourTableT<ext_real>::build(spec);
      PrecisionBudget b;
      b.target_rel = 1e-32;
      parallel_for(static_cast<int>(nus.size()), cfg.threads, [&](int i) {
        auto nodes = assemble_nodes<ext_real>(table, ext_real(nus[i]));
        for (std::size_t k = 0; k < cfg.z.size(); ++k) {
          auto v = eval_airy_type_generic<ext_real>(table, nodes, from_cdouble<ext_real>(cfg.z[k]));
          auto d = oracle_eval_digits(OracleFn::H1, nus[i], cfg.z[k], 40, b);
          ext_complex ref{ext_real(d.re), ext_real(d.im)};
          err[k * nus.size() + i] = rel<ext_real>(v.H1, ref);
        }
      });
    } else {
      auto table = ContourTable::build(spec);
      CauchyOptions o = cauchy_options(cfg);
      parallel_for(static_cast<int>(nus.size()), cfg.threads, [&](int i) {
        for (std::size_t k = 0; k < cfg.z.size(); ++k) {
          auto r = eval_airy_type(table, nus[i], cfg.z[k], o);
          err[k * nus.size() + i] = rel_err(r.H1, oracle.value({nus[i], cfg.z[k], OracleFn::H1}));
        }
      });
    }
    std::vector<double> fx;
    for (std::size_t k = 0; k < cfg.z.size(); ++k) {
      for (std::size_t i = 0; i < nus.size(); ++i) {
        fx.push_back(nus[i]);
        out << "point," << n << ',' << fmt17(nus[i]) << ',' << fmt17(cfg.z[k].real()) << ','
            << fmt17(cfg.z[k].imag()) << ',' << fmt17(err[k * nus.size() + i]) << ",,,,\n";
      }
    }
    PowerFit f = fit_power_law(fx, err);
    double tc = table1_constant(n);
    out << "fit," << n << ",,,," << "," << fmt17(f.slope) << ',' << fmt17(f.constant) << ',';
    if (tc > 0)
      out << fmt17(tc) << ',' << fmt17(f.constant / tc) << "\n";
    else
      out << ",\n";
  }
  return {out.str(), kOk, ""};
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
  try {
    cfg.validate();
    OracleSource oracle(cfg.oracle_cache, cfg.compute_oracle, cfg.threads);
    CommandResult r;
    switch (cfg.command) {
      case Command::error_map: r = run_error_map(cfg, oracle); break;
      case Command::nu_sweep: r = run_nu_sweep(cfg, oracle); break;
      case Command::contour_convergence: r = run_contour_convergence(cfg); break;
      case Command::table1_fit: r = run_table1_fit(cfg, oracle); break;
    }
    out << r.csv;
    if (r.exit_code != kOk) err << "error: " << r.message << "\n";
    return r.exit_code;
  } catch (const config_error& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const spec_error& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const guard_error& e) {
    err << "rejected: " << e.what() << "\n";
    return kGuardRejected;
  } catch (const missing_oracle& e) {
    err << "error: " << e.what() << " (use --compute-oracle or a complete --oracle-cache):\n";
    for (const auto& p : e.points()) err << "  " << p << "\n";
    return kMissingOracle;
  }
}

}  // namespace tpbcli
