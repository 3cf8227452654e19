#include "thermovi/integrate.hpp"

#include "thermovi/errors.hpp"
#include "thermovi/reference.hpp"

namespace thermovi::solve {

discrete::DiscretePath integrate(const discrete::DiscreteThermoSystem& d, const Vec& q0, const Vec& q1, double S0,
                                 std::size_t N, const NewtonConfig& cfg, std::vector<StepReport>* reports) {
  validate(cfg);
  discrete::DiscretePath path;
  path.h = d.h;
  path.qs.reserve(N + 1);
  path.Ss.reserve(N + 1);
  path.qs.push_back(q0);
  path.Ss.push_back(S0);
  if (N == 0) return path;
  try {
    if (d.guard) d.guard({q0, q1, S0});
  } catch (const Error& e) {
    throw StepFailure(1, e.what());
  }
  path.qs.push_back(q1);
  if (reports) reports->reserve(N - 1);

  discrete::DiscreteTriple t{q0, q1, S0};
  for (std::size_t k = 2; k <= N; ++k) {
    StepReport rep;
    try {
      t = discrete::discrete_flow(d, t, cfg, &rep);
      if (d.guard) d.guard(t);
    } catch (const Error& e) {
      throw StepFailure(k, e.what());
    }
    if (reports) reports->push_back(rep);
    path.qs.push_back(t.q1);
    path.Ss.push_back(t.S0);
  }
  // The entropy paired with the last position comes from the final triple.
  try {
    path.Ss.push_back(discrete::entropy_update(d, t));
  } catch (const Error& e) {
    throw StepFailure(N, e.what());
  }
  return path;
}

InitMode parse_init_mode(const std::string& s) {
  if (s == "exact") return InitMode::exact;
  if (s == "reference") return InitMode::reference;
  if (s == "hold") return InitMode::hold;
  if (s == "taylor") return InitMode::taylor;
  throw ConfigError("unknown init mode '" + s + "'");
}

std::string to_string(InitMode m) {
  switch (m) {
    case InitMode::exact: return "exact";
    case InitMode::reference: return "reference";
    case InitMode::hold: return "hold";
    case InitMode::taylor: return "taylor";
  }
  return "?";
}

discrete::DiscreteTriple initialize(const systems::SystemCatalogEntry& e, const Vec& q0, const Vec& v0, double S0,
                                    double h, InitMode mode) {
  if (!(h > 0.0)) throw ConfigError("initialize: time step must be positive");
  const continuous::ThermoState x0{q0, v0, S0};
  switch (mode) {
    case InitMode::exact:
      if (!e.exact) throw ConfigError("initialize: " + e.name() + " has no exact solution");
      return {q0, e.exact->q(x0, h), S0};
    case InitMode::reference: {
      const auto tr = reference::reference_integrate(e.lagrangian, x0, h, 1);
      return {q0, tr.states.back().q, S0};
    }
    case InitMode::hold:
      return {q0, q0, S0};
    case InitMode::taylor: {
      const auto f = continuous::continuous_rhs(e.lagrangian, x0);
      return {q0, q0 + h * v0 + 0.5 * h * h * f.vdot, S0};
    }
  }
  throw ConfigError("initialize: bad mode");
}

}  // namespace thermovi::solve
