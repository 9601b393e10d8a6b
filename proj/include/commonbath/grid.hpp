// grid.hpp: grid sweeps over time and distance
//
// Every sweep has an OpenMP kernel and a serial reference. Both evaluate the
// same per-point function, so results are identical entry by entry; the
// serial versions exist for tests and the benchmark.

#pragma once

#include <vector>

#include "commonbath/dynamics.hpp"
#include "commonbath/entanglement.hpp"

namespace commonbath::grid {

enum class Execution { Serial, Parallel };

std::vector<DensityMatrix> evolve_series(const Scenario& scn, const EvolveOptions& opts = {},
                                         Execution exec = Execution::Parallel);

std::vector<double> concurrence_series(const Scenario& scn, const EvolveOptions& opts = {},
                                       Execution exec = Execution::Parallel);

// h_int(n, delta) for every combination; row-major over (n, delta).
std::vector<double> interaction_table(const std::vector<double>& exponents, double alpha,
                                      const std::vector<double>& deltas, Execution exec = Execution::Parallel);

struct OnsetRow {
    double tau;
    double delta;
    double f_correction;
    double h_f;
    double h_total;
};

// Row-major over (delta, tau).
std::vector<OnsetRow> onset_table(const SpectralModel& model, const std::vector<double>& deltas,
                                  const std::vector<double>& taus, Execution exec = Execution::Parallel);

// tau_max * k / steps for k = 0..steps.
std::vector<double> uniform_times(double tau_max, int steps);

} // namespace commonbath::grid
