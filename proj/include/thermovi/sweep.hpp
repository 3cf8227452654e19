#pragma once

#include <cstdint>
#include <vector>

#include "thermovi/discrete.hpp"
#include "thermovi/experiment.hpp"
#include "thermovi/systems.hpp"

namespace thermovi::sweep {

enum class Execution { serial, parallel };

/// Runs independent experiment cells; results come back in input order.
std::vector<bench::ErrorReport> run_cells(const std::vector<bench::ExperimentConfig>& cells, Execution exec);

/// Oscillator cells (variational and rk2) for each h, exact start.
std::vector<bench::ExperimentConfig> oscillator_table_cells(const std::vector<double>& hs, double gamma = 0.1,
                                                            double t_final = 1000.0);

/// Random (q, p, S) points drawn uniformly from the entry's sample box.
struct PhasePoint {
  Vec q, p;
  double S = 0.0;
};
std::vector<PhasePoint> random_phase_points(const systems::SystemCatalogEntry& e, std::size_t count,
                                            std::uint64_t seed);

/// Random triples: q0 from the box, q1 = q0 + h v with v from the box, S0
/// from the box.
std::vector<discrete::DiscreteTriple> random_triples(const systems::SystemCatalogEntry& e, double h,
                                                     std::size_t count, std::uint64_t seed);

/// Worst residuals of the pointwise field identities over a batch.
struct GeometryBatch {
  std::size_t points = 0;
  double flat_vs_coordinates = 0.0;
  double eta_of_evolution = 0.0;
  double omega_identity = 0.0;
  double reeb_omega = 0.0;
  double reeb_eta = 0.0;
  double reeb_roundtrip = 0.0;
  double contact = 0.0;  // |E - Y_H| with F^fr = -p dH/dS
};

GeometryBatch geometry_batch(const systems::SystemCatalogEntry& e, const std::vector<PhasePoint>& pts,
                             Execution exec);

/// Largest pullback defect over the triples.
double pullback_batch(const discrete::DiscreteThermoSystem& d, const std::vector<discrete::DiscreteTriple>& ts,
                      Execution exec);

}  // namespace thermovi::sweep
