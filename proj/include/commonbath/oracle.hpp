// oracle.hpp: truncated discrete-bath references for the continuum solution
//
// Each mode couples to qubit 1 as g (a + a^dagger) and to qubit 2 as
// g (a e^{i phase} + a^dagger e^{-i phase}), phase = k (r2 - r1).

#pragma once

#include <cstddef>
#include <vector>

#include "commonbath/dynamics.hpp"

namespace commonbath::oracle {

struct Mode {
    double omega{1.0};
    double g{0.0};
    double phase{0.0};
};

struct DiscreteBathSpec {
    std::vector<Mode> modes;
    int fock_cutoff{2};
    double theta{0.0};
    // Each listed mode stands for a +k / -k pair sharing omega, each carrying
    // g^2 / 2 with phases +phase and -phase.
    bool mirrored{false};

    // Throws ValidationError / TruncationError.
    void validate() const;
    // Occupation probability of the highest retained Fock level, maximised over modes.
    double top_level_occupation() const;
};

struct BruteForceOptions {
    std::size_t max_dimension{4096};
    // Thermal bath configurations lighter than this are skipped.
    double weight_cutoff{1e-16};
};

// Smallest cutoff meeting the thermal occupation bound (< 1e-6) whose Poisson
// tail for the largest coherent displacement is below displacement_tol.
int suggest_fock_cutoff(const DiscreteBathSpec& bath, double displacement_tol = 1e-12);

DensityMatrix brute_force_evolve(const DensityMatrix& initial, const DiscreteBathSpec& bath, double t,
                                 const BruteForceOptions& opts = {});

// Diagonalises the full Hamiltonian once and evaluates every requested time.
std::vector<DensityMatrix> brute_force_series(const DensityMatrix& initial, const DiscreteBathSpec& bath,
                                              const std::vector<double>& times, const BruteForceOptions& opts = {});

// Closed-form product over modes. For unmirrored baths this includes the
// phase odd in the mode phase, which cancels between +k / -k partners.
DensityMatrix discrete_exact_evolve(const DensityMatrix& initial, const DiscreteBathSpec& bath, double t);

// Midpoint rule: omega_j = (j - 1/2) d, g_j^2 = alpha omega_j^n e^{-omega_j} d,
// d = omega_max / mode_count, phase_j = omega_j delta. Produces a mirrored
// bath whose Fock cutoff satisfies the occupation bound at theta.
DiscreteBathSpec discretize(const SpectralModel& model, const Geometry& geom, double theta, int mode_count,
                            double omega_max);

} // namespace commonbath::oracle
