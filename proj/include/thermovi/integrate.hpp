#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "thermovi/discrete.hpp"
#include "thermovi/systems.hpp"

namespace thermovi::solve {

/// Iterates the discrete flow N times from (q0, q1, S0). Any failure is
/// rethrown as StepFailure carrying the index of the step being computed
/// (the index of the new position q_{k}).
discrete::DiscretePath integrate(const discrete::DiscreteThermoSystem& d, const Vec& q0, const Vec& q1, double S0,
                                 std::size_t N, const NewtonConfig& cfg = {},
                                 std::vector<StepReport>* reports = nullptr);

enum class InitMode { exact, reference, hold, taylor };

InitMode parse_init_mode(const std::string& s);
std::string to_string(InitMode m);

/// First two positions from (q0, v0, S0):
///   exact      q1 = exact q(h)
///   reference  q1 from one adaptive step at tolerance 1e-10
///   hold       q1 = q0
///   taylor     q1 = q0 + h v0 + h^2/2 a(q0, v0, S0)
/// Throws ConfigError when the mode is unavailable for the system.
discrete::DiscreteTriple initialize(const systems::SystemCatalogEntry& e, const Vec& q0, const Vec& v0, double S0,
                                    double h, InitMode mode);

}  // namespace thermovi::solve
