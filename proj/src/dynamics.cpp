#include "commonbath/dynamics.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "commonbath/errors.hpp"

namespace commonbath {

namespace {

using namespace std::complex_literals;

int coupling_index(LambdaPair l)
{
    return (l.l1 == 1 ? 0 : 2) + (l.l2 == 1 ? 0 : 1);
}

Matrix4c to_coupling(const Matrix4c& m, Basis from)
{
    if (from == Basis::Coupling) {
        return m;
    }
    const auto& t = coupling_to_computational();
    return t.adjoint() * m * t;
}

Matrix4c from_coupling(const Matrix4c& m, Basis to)
{
    if (to == Basis::Coupling) {
        return m;
    }
    const auto& t = coupling_to_computational();
    return t * m * t.adjoint();
}

DensityMatrix checked_result(const Matrix4c& m, Basis basis)
{
    auto rho = DensityMatrix::unchecked(m, basis);
    if (const auto why = rho.violation(); !why.empty()) {
        throw NumericalError("evolved state is not a density matrix: " + why);
    }
    return rho;
}

} // namespace

const Matrix4c& coupling_to_computational()
{
    static const Matrix4c t = [] {
        Eigen::Matrix2cd h;
        const double s = 1.0 / std::sqrt(2.0);
        h << s, s, s, -s;
        Matrix4c out;
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                out.block<2, 2>(2 * i, 2 * j) = h(i, j) * h;
            }
        }
        return out;
    }();
    return t;
}

DensityMatrix::DensityMatrix() : entries_(Matrix4c::Zero()), basis_(Basis::Computational)
{
    entries_(0, 0) = 1.0;
}

DensityMatrix::DensityMatrix(const Matrix4c& entries, Basis basis, const StateTolerances& tol)
    : entries_(entries), basis_(basis)
{
    if (const auto why = violation(tol); !why.empty()) {
        throw ValidationError("not a density matrix: " + why);
    }
}

DensityMatrix DensityMatrix::from_pure(const Vector4c& amplitudes, Basis basis)
{
    const double norm = amplitudes.norm();
    if (!(norm > 0.0)) {
        throw ValidationError("pure state amplitudes must be nonzero");
    }
    const Vector4c v = amplitudes / norm;
    Matrix4c m = v * v.adjoint();
    m = 0.5 * (m + m.adjoint()).eval();
    return DensityMatrix(m, basis);
}

DensityMatrix DensityMatrix::maximally_mixed(Basis basis)
{
    return DensityMatrix(Matrix4c::Identity() / 4.0, basis);
}

DensityMatrix DensityMatrix::unchecked(const Matrix4c& entries, Basis basis)
{
    DensityMatrix rho;
    rho.entries_ = entries;
    rho.basis_ = basis;
    return rho;
}

std::string DensityMatrix::violation(const StateTolerances& tol) const
{
    std::ostringstream out;
    if (!entries_.allFinite()) {
        return "non-finite entries";
    }
    const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol.hermitian) {
        out << "hermiticity defect " << herm;
        return out.str();
    }
    const auto tr = entries_.trace();
    if (std::abs(tr - 1.0) > tol.trace) {
        out << "trace " << tr.real() << (tr.imag() >= 0 ? "+" : "") << tr.imag() << "i";
        return out.str();
    }
    const double mine = min_eigenvalue();
    if (mine < tol.min_eigenvalue) {
        out << "negative eigenvalue " << mine;
        return out.str();
    }
    return {};
}

double DensityMatrix::min_eigenvalue() const
{
    const Matrix4c h = 0.5 * (entries_ + entries_.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double DensityMatrix::purity() const
{
    return (entries_ * entries_).trace().real();
}

DensityMatrix make_initial_state(InitialState which)
{
    Vector4c v = Vector4c::Zero();
    const double s = 1.0 / std::sqrt(2.0);
    switch (which) {
    case InitialState::UpUp:
        v(0) = 1.0;
        break;
    case InitialState::Bell:
        v(0) = s;
        v(3) = s;
        break;
    case InitialState::SymmetricUpDown:
        v(1) = s;
        v(2) = s;
        break;
    }
    return DensityMatrix::from_pure(v, Basis::Computational);
}

Matrix4c Projector::matrix(Basis basis) const
{
    lambda.validate();
    Matrix4c m = Matrix4c::Zero();
    const int i = coupling_index(lambda);
    m(i, i) = 1.0;
    return from_coupling(m, basis);
}

void Scenario::validate() const
{
    model.validate();
    geom.validate();
    if (!(theta >= 0.0) || !std::isfinite(theta)) {
        throw ValidationError("theta must be finite and >= 0");
    }
    if (const auto why = initial.violation(); !why.empty()) {
        throw ValidationError("initial state: " + why);
    }
    for (std::size_t i = 0; i < time_grid.size(); ++i) {
        if (!(time_grid[i] >= 0.0) || !std::isfinite(time_grid[i])) {
            throw ValidationError("time grid entries must be finite and >= 0");
        }
        if (i > 0 && !(time_grid[i] > time_grid[i - 1])) {
            throw ValidationError("time grid must be strictly increasing");
        }
    }
}

DensityMatrix basis_transform(const DensityMatrix& rho, Basis target)
{
    if (rho.basis() == target) {
        return rho;
    }
    Matrix4c m = target == Basis::Coupling ? to_coupling(rho.entries(), rho.basis())
                                           : from_coupling(rho.entries(), target);
    return DensityMatrix::unchecked(m, target);
}

Eigen::Matrix4cd exponent_matrix(const SpectralModel& model, const Geometry& geom, double theta, double tau,
                                 const EvolveOptions& opts)
{
    // Re L depends on the pair only through (A, B); Im L is p times a common value.
    const double im_unit = im_exponent_unit(model, geom, tau, opts.integration);
    Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            const LambdaPair from = kCouplingStates[i];
            const LambdaPair to = kCouplingStates[j];
            const double re = opts.decoherence
                                  ? re_exponent(model, geom, theta, tau, from, to, opts.integration)
                                  : 0.0;
            const int p = from.product() - to.product();
            const double im = p * im_unit;
            out(i, j) = {re, im};
            out(j, i) = {re, -im};
        }
    }
    return out;
}

DensityMatrix evolve(const Scenario& scn, double tau, const EvolveOptions& opts)
{
    scn.validate();
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw ValidationError("tau must be finite and >= 0");
    }
    if (tau == 0.0) {
        return scn.initial;
    }
    const Matrix4c rho0 = to_coupling(scn.initial.entries(), scn.initial.basis());
    const auto l = exponent_matrix(scn.model, scn.geom, scn.theta, tau, opts);
    const Matrix4c rho = rho0.cwiseProduct(l.array().exp().matrix());
    return checked_result(from_coupling(rho, scn.initial.basis()), scn.initial.basis());
}

DensityMatrix coherent_state(const Scenario& scn, double tau, bool include_onset)
{
    scn.validate();
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw ValidationError("tau must be finite and >= 0");
    }
    const auto comp = basis_transform(scn.initial, Basis::Computational);
    if (std::abs(comp.purity() - 1.0) > 1e-10) {
        throw ValidationError("coherent_state requires a pure initial state");
    }
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(comp.entries());
    const Vector4c psi = es.eigenvectors().col(3);

    double coupling = induced_interaction(scn.model, scn.geom);
    if (include_onset) {
        coupling += onset_F(scn.model, scn.geom, tau);
    }
    const double phi = coupling * tau;
    // exp(-i phi sx sx) = cos(phi) - i sin(phi) sx sx; sx sx maps index q to 3 - q
    Vector4c out;
    for (int q = 0; q < 4; ++q) {
        out(q) = std::cos(phi) * psi(q) - 1i * std::sin(phi) * psi(3 - q);
    }
    Matrix4c m = out * out.adjoint();
    return checked_result(from_coupling(to_coupling(m, Basis::Computational), scn.initial.basis()),
                          scn.initial.basis());
}

DensityMatrix limit_state(const Scenario& scn, const IntegrationOptions& opts)
{
    scn.validate();
    const Matrix4c rho0 = to_coupling(scn.initial.entries(), scn.initial.basis());
    Matrix4c rho = rho0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i == j || std::abs(rho0(i, j)) < 1e-14) {
                continue;
            }
            const LambdaPair from = kCouplingStates[i];
            const LambdaPair to = kCouplingStates[j];
            const double re = re_exponent_limit(scn.model, scn.geom, scn.theta, from, to, opts);
            if (std::isinf(re)) {
                rho(i, j) = 0.0;
                continue;
            }
            if (from.product() != to.product()) {
                throw ValidationError("limit does not exist: an undamped coherence keeps rotating");
            }
            rho(i, j) = rho0(i, j) * std::exp(re);
        }
    }
    return checked_result(from_coupling(rho, scn.initial.basis()), scn.initial.basis());
}

} // namespace commonbath
