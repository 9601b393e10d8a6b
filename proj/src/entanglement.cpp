#include "commonbath/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "commonbath/errors.hpp"

namespace commonbath {

namespace {

// Eigenvalues below this are roundoff on a unit-trace 4x4 matrix.
constexpr double kNoiseFloor = 1e-14;
constexpr double kNegativeLimit = -1e-10;

const Matrix4c& sigma_yy()
{
    static const Matrix4c yy = [] {
        Eigen::Matrix2cd y;
        y << 0.0, std::complex<double>(0.0, -1.0), std::complex<double>(0.0, 1.0), 0.0;
        Matrix4c out;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                out.block<2, 2>(2 * i, 2 * j) = y(i, j) * y;
            }
        }
        return out;
    }();
    return yy;
}

Matrix4c flipped(const Matrix4c& m)
{
    return sigma_yy() * m.conjugate() * sigma_yy();
}

Matrix4c hermitian_sqrt(const Matrix4c& m)
{
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(0.5 * (m + m.adjoint()));
    if (es.info() != Eigen::Success) {
        throw NumericalError("eigensolver failed on density matrix");
    }
    Eigen::Vector4d roots;
    for (int i = 0; i < 4; ++i) {
        const double w = es.eigenvalues()(i);
        if (w < kNegativeLimit) {
            throw NumericalError("density matrix has eigenvalue " + std::to_string(w));
        }
        roots(i) = w > kNoiseFloor ? std::sqrt(w) : 0.0;
    }
    return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

ConcurrenceResult from_eigenvalues(std::array<double, 4> lambda)
{
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    ConcurrenceResult r;
    r.r_eigenvalues = lambda;
    r.value = std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
    return r;
}

} // namespace

DensityMatrix spin_flip(const DensityMatrix& rho)
{
    const auto comp = basis_transform(rho, Basis::Computational);
    return DensityMatrix::unchecked(flipped(comp.entries()), Basis::Computational);
}

ConcurrenceResult concurrence(const DensityMatrix& rho)
{
    const Matrix4c m = basis_transform(rho, Basis::Computational).entries();
    // R^2 = X X^dagger with X = sqrt(rho) sqrt(rho~); sqrt(rho~) is the flip of sqrt(rho).
    const Matrix4c root = hermitian_sqrt(m);
    const Matrix4c x = root * flipped(root);
    Eigen::JacobiSVD<Matrix4c> svd(x);
    std::array<double, 4> lambda{};
    for (int i = 0; i < 4; ++i) {
        lambda[i] = svd.singularValues()(i);
    }
    return from_eigenvalues(lambda);
}

ConcurrenceResult concurrence_via_product(const DensityMatrix& rho)
{
    const Matrix4c m = basis_transform(rho, Basis::Computational).entries();
    Eigen::ComplexEigenSolver<Matrix4c> es(m * flipped(m), false);
    if (es.info() != Eigen::Success) {
        throw NumericalError("eigensolver failed on rho * rho~");
    }
    std::array<double, 4> lambda{};
    for (int i = 0; i < 4; ++i) {
        const double mu = es.eigenvalues()(i).real();
        if (mu < kNegativeLimit) {
            throw NumericalError("rho * rho~ has eigenvalue " + std::to_string(mu));
        }
        lambda[i] = mu > kNoiseFloor ? std::sqrt(mu) : 0.0;
    }
    return from_eigenvalues(lambda);
}

} // namespace commonbath
