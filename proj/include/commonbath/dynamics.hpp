// dynamics.hpp: exact reduced density matrix of the two-qubit system
//
// Computational ordering |uu>, |ud>, |du>, |dd> (sigma_z eigenstates).
// Coupling ordering |++>, |+->, |-+>, |--> with |+-> = (|u> +- |d>)/sqrt(2).

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "commonbath/spectral.hpp"

namespace commonbath {

using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

enum class Basis { Computational, Coupling };

struct StateTolerances {
    double hermitian{1e-12};
    double trace{1e-12};
    double min_eigenvalue{-1e-10};
};

class DensityMatrix {
public:
    DensityMatrix();

    // Throws ValidationError if the matrix is not a density matrix.
    DensityMatrix(const Matrix4c& entries, Basis basis, const StateTolerances& tol = {});

    static DensityMatrix from_pure(const Vector4c& amplitudes, Basis basis = Basis::Computational);
    static DensityMatrix maximally_mixed(Basis basis = Basis::Computational);

    // Skips validation; used for intermediate results that are checked later.
    static DensityMatrix unchecked(const Matrix4c& entries, Basis basis);

    const Matrix4c& entries() const { return entries_; }
    Basis basis() const { return basis_; }
    std::complex<double> operator()(int row, int col) const { return entries_(row, col); }

    // Empty string when valid, otherwise a description of the first violation.
    std::string violation(const StateTolerances& tol = {}) const;
    double min_eigenvalue() const;
    double purity() const;

private:
    Matrix4c entries_;
    Basis basis_;
};

// Named initial states.
enum class InitialState { UpUp, Bell, SymmetricUpDown };
DensityMatrix make_initial_state(InitialState which);

struct Projector {
    LambdaPair lambda;

    // |l1 l2><l1 l2| in the requested basis.
    Matrix4c matrix(Basis basis = Basis::Coupling) const;
};

struct Scenario {
    SpectralModel model;
    Geometry geom;
    double theta{0.05};
    DensityMatrix initial;
    std::vector<double> time_grid;

    void validate() const;
};

struct EvolveOptions {
    IntegrationOptions integration;
    bool decoherence{true}; // false drops Re L, leaving the coherent phases
};

// Unitary change of basis; applying it twice with the original tag returns the input.
DensityMatrix basis_transform(const DensityMatrix& rho, Basis target);

// rho(tau) from the coupling-basis entry-wise solution. The result is in
// the basis of the initial state. Throws NumericalError if the result
// violates density-matrix invariants.
DensityMatrix evolve(const Scenario& scn, double tau, const EvolveOptions& opts = {});

// Noise-free reference exp(-i H tau) |psi> with H = H_int sigma_x sigma_x,
// plus F(tau) when include_onset is set. Requires a pure initial state.
DensityMatrix coherent_state(const Scenario& scn, double tau, bool include_onset = false);

// tau -> infinity state. Throws ValidationError when an undamped entry
// keeps oscillating, i.e. the limit does not exist for this initial state.
DensityMatrix limit_state(const Scenario& scn, const IntegrationOptions& opts = {});

// The 4x4 exponents for rho_coupling(tau)(i, j) = rho(0)(i, j) exp(L_ij).
Eigen::Matrix4cd exponent_matrix(const SpectralModel& model, const Geometry& geom, double theta, double tau,
                                 const EvolveOptions& opts = {});

// Hadamard-product transform matrix: columns are coupling states in the computational basis.
const Matrix4c& coupling_to_computational();

} // namespace commonbath
