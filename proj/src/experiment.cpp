#include "thermovi/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>

#include "thermovi/csv.hpp"
#include "thermovi/errors.hpp"
#include "thermovi/reference.hpp"

namespace thermovi::bench {

using continuous::ThermoState;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad number for '" + key + "': " + s);
  }
}

Vec to_vec(const std::string& key, const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.empty()) throw ConfigError("config: empty vector for '" + key + "'");
  Vec v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) v(static_cast<Eigen::Index>(i)) = to_double(key, parts[i]);
  return v;
}

double max_abs_diff(const Vec& a, const Vec& b) { return (a - b).cwiseAbs().maxCoeff(); }

std::string format_h(double h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", h);
  return buf;
}

// Sequential access (nondecreasing k) to the comparison solution on the grid.
using TruthFn = std::function<ThermoState(std::size_t)>;

TruthFn exact_truth(const systems::SystemCatalogEntry& e, const ThermoState& x0, double h) {
  struct Cursor {
    std::size_t k = 0;
    long double S = 0.0L;
  };
  auto cur = std::make_shared<Cursor>();
  cur->S = x0.S;
  const systems::ExactSolution ex = *e.exact;
  return [cur, ex, x0, h](std::size_t k) {
    if (k < cur->k) throw ConfigError("exact truth: non-sequential access");
    while (cur->k < k) {
      const double a = static_cast<double>(cur->k) * h;
      const double b = static_cast<double>(cur->k + 1) * h;
      cur->S += reference::exact_entropy_increment(ex, x0, a, b);
      ++cur->k;
    }
    const double t = static_cast<double>(k) * h;
    return ThermoState{ex.q(x0, t), ex.v(x0, t), static_cast<double>(cur->S)};
  };
}

TruthFn stored_truth(std::shared_ptr<const continuous::Trajectory> tr) {
  return [tr](std::size_t k) { return tr->states.at(k); };
}

std::string trajectory_header(int n) {
  std::string h = "t";
  for (int i = 1; i <= n; ++i) h += ",q_" + std::to_string(i);
  for (int i = 1; i <= n; ++i) h += ",v_" + std::to_string(i);
  return h + ",S,H_plus,H_minus,H_vel";
}

std::string trajectory_row(double t, const Vec& q, const Vec& v, double S, double Hp, double Hm, double Hv) {
  std::vector<std::string> cells;
  cells.reserve(2 * q.size() + 5);
  cells.push_back(csv::format(t));
  for (Eigen::Index i = 0; i < q.size(); ++i) cells.push_back(csv::format(q(i)));
  for (Eigen::Index i = 0; i < v.size(); ++i) cells.push_back(csv::format(v(i)));
  cells.push_back(csv::format(S));
  cells.push_back(csv::format(Hp));
  cells.push_back(csv::format(Hm));
  cells.push_back(csv::format(Hv));
  return csv::join(cells);
}

struct Tracker {
  MethodReport& r;
  std::size_t window;
  double H0;
  double S_prev = 0.0;

  void compare(std::size_t k, const Vec& q, double S, const ThermoState& truth) {
    r.max_pos_err = std::max(r.max_pos_err, max_abs_diff(q, truth.q));
    const double eS = std::abs(S - truth.S);
    r.max_S_err = std::max(r.max_S_err, eS);
    if (k < window) r.max_S_err_window = std::max(r.max_S_err_window, eS);
    if (k > 0 && S < S_prev) r.entropy_monotone = false;
    S_prev = S;
  }
};

struct Setup {
  systems::SystemCatalogEntry entry;
  ThermoState x0;
  discrete::DiscreteTriple start;
  std::size_t N = 0;
  double H0 = 0.0;
};

void run_variational(const ExperimentConfig& cfg, const Setup& s, const TruthFn& truth, MethodReport& r,
                     std::vector<std::string>* rows) {
  const auto d = discrete::midpoint_discretize(s.entry.lagrangian, cfg.h);
  const auto& H = s.entry.H;
  Tracker tr{r, cfg.entropy_window, s.H0};
  tr.compare(0, s.x0.q, s.x0.S, truth(0));
  if (rows) rows->push_back(trajectory_row(0.0, s.x0.q, s.x0.v, s.x0.S, kNaN, kNaN, kNaN));

  discrete::DiscreteTriple t = s.start;
  Vec prev_p_plus;
  std::size_t k = 1;
  try {
    for (; k <= s.N; ++k) {
      // t = (q_{k-1}, q_k, S_{k-1}).
      if (k >= 2) {
        solve::StepReport rep;
        t = discrete::discrete_flow(d, t, cfg.newton, &rep);
        r.max_newton_residual = std::max(r.max_newton_residual, rep.residual);
        r.max_newton_iterations = std::max(r.max_newton_iterations, rep.iterations);
      }
      const double S_k = discrete::entropy_update(d, t);
      const auto mom = discrete::discrete_momenta(d, t);
      const Vec vel = (t.q1 - t.q0) / cfg.h;
      const double Hp = H(t.q1, mom.p_plus, S_k);
      const double Hm = H(t.q0, mom.p_minus, t.S0);
      const double Hv = H(t.q1, vel, S_k);
      if (!t.q1.allFinite() || !std::isfinite(S_k)) throw ConvergenceError("non-finite state");
      r.max_H_dev = std::max(r.max_H_dev, std::abs(Hp - s.H0));
      r.max_H_minus_dev = std::max(r.max_H_minus_dev, std::abs(Hm - s.H0));
      r.max_H_vel_dev = std::max(r.max_H_vel_dev, std::abs(Hv - s.H0));
      r.max_H_pm_gap = std::max(r.max_H_pm_gap, std::abs(Hp - Hm));
      if (k >= 2) r.momentum_matching = std::max(r.momentum_matching, max_abs_diff(prev_p_plus, mom.p_minus));
      prev_p_plus = mom.p_plus;
      tr.compare(k, t.q1, S_k, truth(k));
      if (rows) rows->push_back(trajectory_row(static_cast<double>(k) * cfg.h, t.q1, mom.p_plus, S_k, Hp, Hm, Hv));
      r.steps = k;
    }
  } catch (const Error& e) {
    r.failed = true;
    r.failed_step = k;
    r.failure = e.what();
  }
}

// Explicit methods share the bookkeeping; `advance` produces state k from k-1.
void run_explicit(const ExperimentConfig& cfg, const Setup& s, const TruthFn& truth, MethodReport& r,
                  const std::function<ThermoState(std::size_t, const ThermoState&)>& advance,
                  std::vector<std::string>* rows) {
  const auto& sys = s.entry.lagrangian;
  const auto& H = s.entry.H;
  Tracker tr{r, cfg.entropy_window, s.H0};
  tr.compare(0, s.x0.q, s.x0.S, truth(0));
  if (rows) rows->push_back(trajectory_row(0.0, s.x0.q, s.x0.v, s.x0.S, kNaN, kNaN, kNaN));
  ThermoState x = s.x0;
  std::size_t k = 1;
  try {
    for (; k <= s.N; ++k) {
      const ThermoState next = advance(k, x);
      if (!next.finite()) throw ConvergenceError("non-finite state");
      if (sys.guard) sys.guard(next);
      const double Hx = H(next.q, sys.dLdv(next), next.S);
      const double Hv = H(next.q, Vec((next.q - x.q) / cfg.h), next.S);
      r.max_H_dev = std::max(r.max_H_dev, std::abs(Hx - s.H0));
      r.max_H_vel_dev = std::max(r.max_H_vel_dev, std::abs(Hv - s.H0));
      tr.compare(k, next.q, next.S, truth(k));
      if (rows) rows->push_back(trajectory_row(static_cast<double>(k) * cfg.h, next.q, next.v, next.S, kNaN, kNaN, Hv));
      x = next;
      r.steps = k;
    }
  } catch (const Error& e) {
    r.failed = true;
    r.failed_step = k;
    r.failure = e.what();
  }
}

}  // namespace

Method parse_method(const std::string& s) {
  if (s == "variational") return Method::variational;
  if (s == "rk2" || s == "midpoint") return Method::rk2;
  if (s == "reference") return Method::reference;
  throw ConfigError("unknown method '" + s + "'");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::variational: return "variational";
    case Method::rk2: return "rk2";
    case Method::reference: return "reference";
  }
  return "?";
}

void validate(const ExperimentConfig& cfg) {
  if (!(cfg.h > 0.0)) throw ConfigError("h must be positive");
  if (!(cfg.t_final >= cfg.h)) throw ConfigError("t_final must be at least h");
  if (cfg.methods.empty()) throw ConfigError("methods list is empty");
  if (!cfg.init_mode.empty()) solve::parse_init_mode(cfg.init_mode);
  solve::validate(cfg.newton);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config '" + path + "'");
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "system") cfg.system = val;
    else if (key == "h") cfg.h = to_double(key, val);
    else if (key == "t_final") cfg.t_final = to_double(key, val);
    else if (key == "gamma" || key == "c" || key == "a" || key == "b") cfg.params[key] = to_double(key, val);
    else if (key == "q0") cfg.q0 = to_vec(key, val);
    else if (key == "v0") cfg.v0 = to_vec(key, val);
    else if (key == "q1") cfg.q1 = to_vec(key, val);
    else if (key == "S0") cfg.S0 = to_double(key, val);
    else if (key == "init_mode") cfg.init_mode = val;
    else if (key == "methods") {
      cfg.methods.clear();
      for (const auto& m : split(val, ',')) cfg.methods.push_back(parse_method(m));
    } else if (key == "out") cfg.out_dir = val;
    else if (key == "entropy_window") cfg.entropy_window = static_cast<std::size_t>(to_double(key, val));
    else if (key == "newton_tol") cfg.newton.tol = to_double(key, val);
    else if (key == "newton_max_iter") cfg.newton.max_iter = static_cast<int>(to_double(key, val));
    else throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return cfg;
}

systems::SystemCatalogEntry make_entry(const ExperimentConfig& cfg) {
  auto get = [&](const std::string& k, double def) {
    const auto it = cfg.params.find(k);
    return it == cfg.params.end() ? def : it->second;
  };
  const double gamma = get("gamma", 0.1);
  if (cfg.system == "ideal-gas") return systems::ideal_gas(gamma, get("c", 1.5));
  if (cfg.system == "van-der-waals") return systems::van_der_waals(gamma, get("a", 1000.0), get("b", 0.1));
  return systems::by_name(cfg.system, gamma);
}

HamiltonianSeries hamiltonian_estimates(const systems::SystemCatalogEntry& e, const discrete::DiscreteThermoSystem& d,
                                        const discrete::DiscretePath& path) {
  const std::size_t N = path.steps();
  HamiltonianSeries out;
  out.plus.assign(N + 1, kNaN);
  out.minus.assign(N + 1, kNaN);
  out.vel.assign(N + 1, kNaN);
  for (std::size_t k = 1; k <= N; ++k) {
    const auto t = path.triple(k - 1);
    const auto mom = discrete::discrete_momenta(d, t);
    out.plus[k] = e.H(path.qs[k], mom.p_plus, path.Ss[k]);
    out.minus[k] = e.H(path.qs[k - 1], mom.p_minus, path.Ss[k - 1]);
    out.vel[k] = e.H(path.qs[k], Vec((path.qs[k] - path.qs[k - 1]) / path.h), path.Ss[k]);
  }
  return out;
}

const MethodReport& ErrorReport::get(Method m) const {
  for (const auto& r : methods)
    if (r.method == m) return r;
  throw ConfigError("report has no method " + to_string(m));
}

ErrorReport run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  Setup s;
  s.entry = make_entry(cfg);
  const int n = s.entry.n();
  s.x0 = s.entry.initial;
  if (cfg.q0) s.x0.q = *cfg.q0;
  if (cfg.v0) s.x0.v = *cfg.v0;
  if (cfg.S0) s.x0.S = *cfg.S0;
  if (s.x0.q.size() != n || s.x0.v.size() != n) throw ConfigError("initial state has the wrong dimension");
  s.N = reference::steps_for(cfg.t_final, cfg.h);
  s.H0 = s.entry.H(s.x0.q, s.entry.lagrangian.dLdv(s.x0), s.x0.S);

  ErrorReport report;
  report.system = s.entry.name();
  report.h = cfg.h;
  report.t_final = cfg.t_final;

  const bool want_variational = std::find(cfg.methods.begin(), cfg.methods.end(), Method::variational) !=
                                cfg.methods.end();
  if (want_variational) {
    if (cfg.q1) {
      if (cfg.q1->size() != n) throw ConfigError("q1 has the wrong dimension");
      s.start = {s.x0.q, *cfg.q1, s.x0.S};
    } else {
      const auto mode = solve::parse_init_mode(cfg.init_mode.empty() ? s.entry.default_init_mode : cfg.init_mode);
      s.start = solve::initialize(s.entry, s.x0.q, s.x0.v, s.x0.S, cfg.h, mode);
    }
  }

  std::shared_ptr<const continuous::Trajectory> ref;
  auto reference_traj = [&]() {
    if (!ref) {
      ref = std::make_shared<const continuous::Trajectory>(
          reference::reference_integrate(s.entry.lagrangian, s.x0, cfg.h, s.N));
    }
    return ref;
  };
  const bool have_exact = s.entry.exact.has_value();
  report.truth = have_exact ? "exact" : "reference";
  auto make_truth = [&]() { return have_exact ? exact_truth(s.entry, s.x0, cfg.h) : stored_truth(reference_traj()); };

  const bool write = !cfg.out_dir.empty();
  std::vector<std::string> summary;
  for (const Method m : cfg.methods) {
    MethodReport r;
    r.method = m;
    std::vector<std::string> rows;
    auto* rows_ptr = write ? &rows : nullptr;
    const auto t0 = std::chrono::steady_clock::now();
    const TruthFn truth = make_truth();
    switch (m) {
      case Method::variational:
        run_variational(cfg, s, truth, r, rows_ptr);
        break;
      case Method::rk2: {
        const auto& sys = s.entry.lagrangian;
        const double h = cfg.h;
        run_explicit(cfg, s, truth, r,
                     [&sys, h](std::size_t, const ThermoState& x) { return reference::rk2_midpoint(sys, x, h); },
                     rows_ptr);
        break;
      }
      case Method::reference: {
        std::shared_ptr<const continuous::Trajectory> tr;
        try {
          tr = reference_traj();
        } catch (const Error& e) {
          r.failed = true;
          r.failure = e.what();
          break;
        }
        run_explicit(cfg, s, truth, r, [tr](std::size_t k, const ThermoState&) { return tr->states.at(k); },
                     rows_ptr);
        break;
      }
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (write) {
      csv::write(cfg.out_dir + "/" + report.system + "_" + to_string(m) + "_h" + format_h(cfg.h) + ".csv",
                 trajectory_header(n), rows);
      summary.push_back(csv::join({report.system, to_string(m), csv::format(cfg.h), csv::format(r.max_pos_err),
                                   csv::format(r.max_S_err), csv::format(r.max_H_dev)}));
    }
    report.methods.push_back(r);
  }
  if (write) csv::write(cfg.out_dir + "/summary.csv", "system,method,h,max_pos_err,max_S_err,max_H_dev", summary);
  return report;
}

double loglog_slope(const std::vector<double>& hs, const std::vector<double>& errors) {
  if (hs.size() < 2 || hs.size() != errors.size()) throw ConfigError("convergence: need at least two step sizes");
  double mx = 0, my = 0;
  const double m = static_cast<double>(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (!(hs[i] > 0.0) || !(errors[i] > 0.0)) throw ConfigError("convergence: step sizes and errors must be positive");
    mx += std::log(hs[i]) / m;
    my += std::log(errors[i]) / m;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const double dx = std::log(hs[i]) - mx;
    sxy += dx * (std::log(errors[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw ConfigError("convergence: step sizes must differ");
  return sxy / sxx;
}

ConvergenceResult convergence_study(const ExperimentConfig& base, const std::vector<double>& hs, Method method) {
  if (hs.size() < 2) throw ConfigError("convergence: need at least two step sizes");
  ConvergenceResult out;
  for (const double h : hs) {
    ExperimentConfig cfg = base;
    cfg.h = h;
    cfg.methods = {method};
    cfg.out_dir.clear();
    const auto rep = run_experiment(cfg);
    const auto& r = rep.get(method);
    if (r.failed) throw StepFailure(r.failed_step, r.failure);
    out.hs.push_back(h);
    out.errors.push_back(r.max_pos_err);
  }
  out.slope = loglog_slope(out.hs, out.errors);
  return out;
}

}  // namespace thermovi::bench
