#include "commonbath/grid.hpp"

#include <exception>

#include "commonbath/errors.hpp"

namespace commonbath::grid {

namespace {

// Runs body(i) for i in [0, count). Exceptions thrown inside the parallel
// region are captured and the first one is rethrown after the loop.
template <class Body>
void for_each_index(std::size_t count, Execution exec, Body&& body)
{
    if (exec == Execution::Serial) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < count; ++i) {
        try {
            body(i);
        } catch (...) {
#pragma omp critical(commonbath_grid_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

} // namespace

std::vector<DensityMatrix> evolve_series(const Scenario& scn, const EvolveOptions& opts, Execution exec)
{
    scn.validate();
    std::vector<DensityMatrix> out(scn.time_grid.size());
    for_each_index(out.size(), exec, [&](std::size_t i) { out[i] = evolve(scn, scn.time_grid[i], opts); });
    return out;
}

std::vector<double> concurrence_series(const Scenario& scn, const EvolveOptions& opts, Execution exec)
{
    scn.validate();
    std::vector<double> out(scn.time_grid.size());
    for_each_index(out.size(), exec,
                   [&](std::size_t i) { out[i] = concurrence(evolve(scn, scn.time_grid[i], opts)).value; });
    return out;
}

std::vector<double> interaction_table(const std::vector<double>& exponents, double alpha,
                                      const std::vector<double>& deltas, Execution exec)
{
    if (exponents.empty() || deltas.empty()) {
        throw ValidationError("interaction table needs at least one n and one delta");
    }
    std::vector<double> out(exponents.size() * deltas.size());
    for_each_index(out.size(), exec, [&](std::size_t i) {
        const SpectralModel model{exponents[i / deltas.size()], alpha};
        out[i] = induced_interaction(model, Geometry{deltas[i % deltas.size()]});
    });
    return out;
}

std::vector<OnsetRow> onset_table(const SpectralModel& model, const std::vector<double>& deltas,
                                  const std::vector<double>& taus, Execution exec)
{
    if (deltas.empty() || taus.empty()) {
        throw ValidationError("onset table needs at least one delta and one tau");
    }
    std::vector<OnsetRow> out(deltas.size() * taus.size());
    for_each_index(out.size(), exec, [&](std::size_t i) {
        const Geometry geom{deltas[i / taus.size()]};
        const double tau = taus[i % taus.size()];
        const double h_int = induced_interaction(model, geom);
        const double h_f = onset_HF(model, geom, tau);
        out[i] = {tau, geom.delta, onset_F(model, geom, tau), h_f, h_int + h_f};
    });
    return out;
}

std::vector<double> uniform_times(double tau_max, int steps)
{
    if (!(tau_max > 0.0) || steps < 1) {
        throw ValidationError("time grid needs tau_max > 0 and steps >= 1");
    }
    std::vector<double> t(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k) {
        t[k] = tau_max * k / steps;
    }
    return t;
}

} // namespace commonbath::grid
