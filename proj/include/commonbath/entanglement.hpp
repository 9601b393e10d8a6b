#pragma once

#include <array>

#include "commonbath/dynamics.hpp"

namespace commonbath {

struct ConcurrenceResult {
    double value{0.0};
    std::array<double, 4> r_eigenvalues{}; // eigenvalues of R, descending
};

// sigma_y sigma_y rho* sigma_y sigma_y, conjugation taken in the computational basis.
// The result is returned in the computational basis.
DensityMatrix spin_flip(const DensityMatrix& rho);

// Wootters concurrence from the eigenvalues of R = sqrt(sqrt(rho) rho~ sqrt(rho)).
ConcurrenceResult concurrence(const DensityMatrix& rho);

// Same quantity from the square roots of the eigenvalues of rho rho~.
ConcurrenceResult concurrence_via_product(const DensityMatrix& rho);

} // namespace commonbath
