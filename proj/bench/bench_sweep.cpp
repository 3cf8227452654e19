// Serial vs OpenMP timing of the sweep kernels. Results of both paths must
// agree exactly; the program exits 1 if they do not.

#include <chrono>
#include <cstdio>
#include <functional>

#include <omp.h>

#include "thermovi/discrete.hpp"
#include "thermovi/sweep.hpp"
#include "thermovi/systems.hpp"

using namespace thermovi;

static double seconds(const std::function<void()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  bool same = true;

  {
    std::vector<bench::ExperimentConfig> cells = sweep::oscillator_table_cells({0.1, 0.05, 0.02, 0.01});
    for (const std::string g : {"ideal-gas", "van-der-waals", "two-pistons"}) {
      bench::ExperimentConfig c;
      c.system = g;
      c.h = 0.01;
      c.t_final = 10.0;
      c.methods = {bench::Method::variational, bench::Method::rk2};
      cells.push_back(c);
    }
    std::vector<bench::ErrorReport> a, b;
    const double ts = seconds([&] { a = sweep::run_cells(cells, sweep::Execution::serial); });
    const double tp = seconds([&] { b = sweep::run_cells(cells, sweep::Execution::parallel); });
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t m = 0; m < a[i].methods.size(); ++m)
        same = same && a[i].methods[m].max_pos_err == b[i].methods[m].max_pos_err &&
               a[i].methods[m].max_S_err == b[i].methods[m].max_S_err;
    std::printf("%-28s serial %8.3f s  parallel %8.3f s  speedup %5.2f\n", "experiment cells", ts, tp, ts / tp);
  }

  {
    const auto e = systems::ideal_gas();
    const auto pts = sweep::random_phase_points(e, 200000, 7);
    sweep::GeometryBatch a, b;
    const double ts = seconds([&] { a = sweep::geometry_batch(e, pts, sweep::Execution::serial); });
    const double tp = seconds([&] { b = sweep::geometry_batch(e, pts, sweep::Execution::parallel); });
    same = same && a.flat_vs_coordinates == b.flat_vs_coordinates && a.contact == b.contact;
    std::printf("%-28s serial %8.3f s  parallel %8.3f s  speedup %5.2f\n", "geometry batch (2e5 pts)", ts, tp,
                ts / tp);
  }

  {
    const auto e = systems::ideal_gas();
    const auto d = discrete::midpoint_discretize(e.lagrangian, 0.01);
    const auto ts_ = sweep::random_triples(e, 0.01, 2000, 11);
    double a = 0, b = 0;
    const double ts = seconds([&] { a = sweep::pullback_batch(d, ts_, sweep::Execution::serial); });
    const double tp = seconds([&] { b = sweep::pullback_batch(d, ts_, sweep::Execution::parallel); });
    same = same && a == b;
    std::printf("%-28s serial %8.3f s  parallel %8.3f s  speedup %5.2f\n", "pullback batch (2000)", ts, tp, ts / tp);
  }

  std::printf("serial and parallel results %s\n", same ? "identical" : "DIFFER");
  return same ? 0 : 1;
}
