#include "thermovi/sweep.hpp"

#include <algorithm>
#include <exception>
#include <random>

#include "thermovi/geometry.hpp"

namespace thermovi::sweep {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * std::generate_canonical<double, 53>(rng);
}

Vec uniform_vec(std::mt19937_64& rng, int n, double lo, double hi) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = uniform(rng, lo, hi);
  return v;
}

GeometryBatch combine(GeometryBatch a, const GeometryBatch& b) {
  a.points += b.points;
  a.flat_vs_coordinates = std::max(a.flat_vs_coordinates, b.flat_vs_coordinates);
  a.eta_of_evolution = std::max(a.eta_of_evolution, b.eta_of_evolution);
  a.omega_identity = std::max(a.omega_identity, b.omega_identity);
  a.reeb_omega = std::max(a.reeb_omega, b.reeb_omega);
  a.reeb_eta = std::max(a.reeb_eta, b.reeb_eta);
  a.reeb_roundtrip = std::max(a.reeb_roundtrip, b.reeb_roundtrip);
  a.contact = std::max(a.contact, b.contact);
  return a;
}

GeometryBatch check_point(const systems::SystemCatalogEntry& e, const PhasePoint& x) {
  auto pt = systems::hamiltonian_point(e, x.q, x.p, x.S);
  const auto c = geometry::check_fields(pt);
  GeometryBatch g;
  g.points = 1;
  g.flat_vs_coordinates = c.flat_vs_coordinates;
  g.eta_of_evolution = c.eta_of_evolution;
  g.omega_identity = c.omega_identity;
  g.reeb_omega = c.reeb_omega;
  g.reeb_eta = c.reeb_eta;
  g.reeb_roundtrip = c.reeb_roundtrip;

  pt.Ffr = -pt.p * pt.dHdS();
  const auto s = geometry::assemble_structure(pt);
  g.contact = max_abs(Vec(geometry::evolution_field(s, pt) - geometry::contact_evolution_field(pt)));
  return g;
}

}  // namespace

std::vector<bench::ErrorReport> run_cells(const std::vector<bench::ExperimentConfig>& cells, Execution exec) {
  std::vector<bench::ErrorReport> out(cells.size());
  const long n = static_cast<long>(cells.size());
  if (exec == Execution::serial) {
    for (long i = 0; i < n; ++i) out[i] = bench::run_experiment(cells[i]);
    return out;
  }
  std::vector<std::exception_ptr> errors(cells.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = bench::run_experiment(cells[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<bench::ExperimentConfig> oscillator_table_cells(const std::vector<double>& hs, double gamma,
                                                            double t_final) {
  std::vector<bench::ExperimentConfig> cells;
  for (const double h : hs) {
    bench::ExperimentConfig c;
    c.system = "oscillator";
    c.params["gamma"] = gamma;
    c.h = h;
    c.t_final = t_final;
    c.init_mode = "exact";
    c.methods = {bench::Method::variational, bench::Method::rk2};
    cells.push_back(c);
  }
  return cells;
}

std::vector<PhasePoint> random_phase_points(const systems::SystemCatalogEntry& e, std::size_t count,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto& b = e.box;
  const int n = e.n();
  std::vector<PhasePoint> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    PhasePoint x;
    x.q = uniform_vec(rng, n, b.q_lo, b.q_hi);
    x.p = uniform_vec(rng, n, b.v_lo, b.v_hi);
    x.S = uniform(rng, b.S_lo, b.S_hi);
    pts.push_back(x);
  }
  return pts;
}

std::vector<discrete::DiscreteTriple> random_triples(const systems::SystemCatalogEntry& e, double h,
                                                     std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto& b = e.box;
  const int n = e.n();
  std::vector<discrete::DiscreteTriple> ts;
  ts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    discrete::DiscreteTriple t;
    t.q0 = uniform_vec(rng, n, b.q_lo, b.q_hi);
    t.q1 = t.q0 + h * uniform_vec(rng, n, b.v_lo, b.v_hi);
    t.S0 = uniform(rng, b.S_lo, b.S_hi);
    ts.push_back(t);
  }
  return ts;
}

GeometryBatch geometry_batch(const systems::SystemCatalogEntry& e, const std::vector<PhasePoint>& pts,
                             Execution exec) {
  const long n = static_cast<long>(pts.size());
  std::vector<GeometryBatch> per(pts.size());
  if (exec == Execution::serial) {
    for (long i = 0; i < n; ++i) per[i] = check_point(e, pts[i]);
  } else {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) per[i] = check_point(e, pts[i]);
  }
  GeometryBatch out;
  for (const auto& g : per) out = combine(out, g);
  return out;
}

double pullback_batch(const discrete::DiscreteThermoSystem& d, const std::vector<discrete::DiscreteTriple>& ts,
                      Execution exec) {
  const long n = static_cast<long>(ts.size());
  std::vector<double> defects(ts.size(), 0.0);
  if (exec == Execution::serial) {
    for (long i = 0; i < n; ++i) defects[i] = discrete::pullback_check(d, ts[i]);
  } else {
    std::vector<std::exception_ptr> errors(ts.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < n; ++i) {
      try {
        defects[i] = discrete::pullback_check(d, ts[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return defects.empty() ? 0.0 : *std::max_element(defects.begin(), defects.end());
}

}  // namespace thermovi::sweep
