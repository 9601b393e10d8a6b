#include "commonbath/oracle.hpp"

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Eigenvalues>

#include "commonbath/errors.hpp"

namespace commonbath::oracle {

namespace {

using namespace std::complex_literals;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

constexpr double kMaxTopOccupation = 1e-6;

struct Oscillator {
    double omega;
    double g;
    double phase;
};

std::vector<Oscillator> oscillators(const DiscreteBathSpec& bath)
{
    std::vector<Oscillator> out;
    for (const auto& m : bath.modes) {
        if (bath.mirrored) {
            const double g = m.g / std::sqrt(2.0);
            out.push_back({m.omega, g, m.phase});
            out.push_back({m.omega, g, -m.phase});
        } else {
            out.push_back({m.omega, m.g, m.phase});
        }
    }
    return out;
}

// Normalised on the truncated ladder 0..levels-1.
double level_occupation(double omega, double theta, int levels, int n)
{
    if (theta == 0.0) {
        return n == 0 ? 1.0 : 0.0;
    }
    const double x = omega / theta;
    return std::exp(-n * x) * -std::expm1(-x) / -std::expm1(-levels * x);
}

double poisson_tail(double mean, int from)
{
    if (mean == 0.0) {
        return from <= 0 ? 1.0 : 0.0;
    }
    double term = std::exp(-mean);
    for (int k = 1; k <= from; ++k) {
        term *= mean / k;
    }
    double tail = 0.0;
    for (int k = from; k < from + 400; ++k) {
        tail += term;
        term *= mean / (k + 1);
        if (term < 1e-30 * tail) {
            break;
        }
    }
    return tail;
}

std::size_t checked_power(std::size_t base, std::size_t exp, std::size_t cap)
{
    std::size_t out = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (out > cap / base) {
            return cap + 1;
        }
        out *= base;
    }
    return out;
}

struct Component {
    double weight;
    Vector4c vector;
};

std::vector<Component> pure_components(const DensityMatrix& rho)
{
    const auto comp = basis_transform(rho, Basis::Computational);
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(0.5 * (comp.entries() + comp.entries().adjoint()));
    std::vector<Component> out;
    for (int i = 0; i < 4; ++i) {
        if (es.eigenvalues()(i) > 1e-15) {
            out.push_back({es.eigenvalues()(i), es.eigenvectors().col(i)});
        }
    }
    return out;
}

} // namespace

double DiscreteBathSpec::top_level_occupation() const
{
    double worst = 0.0;
    for (const auto& m : modes) {
        worst = std::max(worst, level_occupation(m.omega, theta, fock_cutoff, fock_cutoff - 1));
    }
    return worst;
}

void DiscreteBathSpec::validate() const
{
    if (fock_cutoff < 2) {
        throw ValidationError("fock_cutoff must be >= 2");
    }
    if (!(theta >= 0.0) || !std::isfinite(theta)) {
        throw ValidationError("bath theta must be finite and >= 0");
    }
    for (const auto& m : modes) {
        if (!(m.omega > 0.0) || !std::isfinite(m.omega)) {
            throw ValidationError("mode frequencies must be > 0");
        }
        if (!std::isfinite(m.g) || !std::isfinite(m.phase)) {
            throw ValidationError("mode coupling and phase must be finite");
        }
    }
    if (const double occ = top_level_occupation(); occ >= kMaxTopOccupation) {
        throw TruncationError("thermal occupation of the highest Fock level is " + std::to_string(occ)
                              + " (needs < 1e-6); raise fock_cutoff");
    }
}

int suggest_fock_cutoff(const DiscreteBathSpec& bath, double displacement_tol)
{
    const auto osc = oscillators(bath);
    for (int levels = 2; levels < 400; ++levels) {
        bool ok = true;
        for (const auto& o : osc) {
            if (level_occupation(o.omega, bath.theta, levels, levels - 1) >= kMaxTopOccupation) {
                ok = false;
                break;
            }
            // |alpha| <= 2 |f| / omega with |f| <= 2 g
            const double alpha = 4.0 * std::abs(o.g) / o.omega;
            const double nbar = bath.theta > 0.0 ? 1.0 / std::expm1(o.omega / bath.theta) : 0.0;
            const double mean = std::pow(alpha + std::sqrt(nbar), 2) + nbar;
            if (poisson_tail(mean, levels) >= displacement_tol) {
                ok = false;
                break;
            }
        }
        if (ok) {
            return levels;
        }
    }
    throw TruncationError("no Fock cutoff below 400 satisfies the truncation bounds");
}

std::vector<DensityMatrix> brute_force_series(const DensityMatrix& initial, const DiscreteBathSpec& bath,
                                              const std::vector<double>& times, const BruteForceOptions& opts)
{
    bath.validate();
    for (double t : times) {
        if (!(t >= 0.0) || !std::isfinite(t)) {
            throw ValidationError("times must be finite and >= 0");
        }
    }

    const auto osc = oscillators(bath);
    const auto levels = static_cast<std::size_t>(bath.fock_cutoff);
    const std::size_t bath_dim = checked_power(levels, osc.size(), opts.max_dimension);
    if (bath_dim > opts.max_dimension / 4) {
        throw CapacityError("brute-force dimension 4 * " + std::to_string(levels) + "^" + std::to_string(osc.size())
                            + " exceeds the cap of " + std::to_string(opts.max_dimension));
    }
    const auto nb = static_cast<Eigen::Index>(bath_dim);
    const Eigen::Index dim = 4 * nb;

    // Mixed-radix occupation numbers; oscillator 0 is the fastest digit.
    std::vector<Eigen::Index> stride(osc.size());
    Eigen::Index st = 1;
    for (std::size_t k = 0; k < osc.size(); ++k) {
        stride[k] = st;
        st *= static_cast<Eigen::Index>(levels);
    }
    auto occupation = [&](Eigen::Index b, std::size_t k) {
        return static_cast<int>((b / stride[k]) % static_cast<Eigen::Index>(levels));
    };

    // Computational index q: qubit 1 is the high bit (|u> = 0, |d> = 1).
    MatrixXc h = MatrixXc::Zero(dim, dim);
    for (int q = 0; q < 4; ++q) {
        for (Eigen::Index b = 0; b < nb; ++b) {
            const Eigen::Index col = q * nb + b;
            double energy = 0.0;
            for (std::size_t k = 0; k < osc.size(); ++k) {
                const int n = occupation(b, k);
                energy += osc[k].omega * n;
                if (n == 0) {
                    continue;
                }
                const double amp = osc[k].g * std::sqrt(static_cast<double>(n));
                const std::complex<double> e = std::exp(1i * osc[k].phase);
                const Eigen::Index lowered = b - stride[k];
                const Eigen::Index r1 = (q ^ 2) * nb + lowered; // sigma_x^1 a
                const Eigen::Index r2 = (q ^ 1) * nb + lowered; // sigma_x^2 a e^{i phase}
                h(r1, col) += amp;
                h(col, r1) += amp;
                h(r2, col) += amp * e;
                h(col, r2) += amp * std::conj(e);
            }
            h(col, col) += energy;
        }
    }

    Eigen::SelfAdjointEigenSolver<MatrixXc> es(h);
    if (es.info() != Eigen::Success) {
        throw NumericalError("eigensolver failed on the bath Hamiltonian");
    }
    const MatrixXc& v = es.eigenvectors();
    const Eigen::VectorXd& energies = es.eigenvalues();

    // Initial vectors component (x) |b>, expanded in the eigenbasis.
    struct Start {
        double weight;
        VectorXc coeffs;
    };
    std::vector<Start> starts;
    double retained = 0.0;
    const auto components = pure_components(initial);
    for (Eigen::Index b = 0; b < nb; ++b) {
        double pb = 1.0;
        for (std::size_t k = 0; k < osc.size(); ++k) {
            pb *= level_occupation(osc[k].omega, bath.theta, bath.fock_cutoff, occupation(b, k));
        }
        if (pb < opts.weight_cutoff) {
            continue;
        }
        for (const auto& c : components) {
            VectorXc coeffs = VectorXc::Zero(dim);
            for (int q = 0; q < 4; ++q) {
                coeffs += c.vector(q) * v.row(q * nb + b).adjoint();
            }
            starts.push_back({pb * c.weight, std::move(coeffs)});
            retained += pb * c.weight;
        }
    }

    std::vector<DensityMatrix> out(times.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t it = 0; it < times.size(); ++it) {
        const double t = times[it];
        Matrix4c rho = Matrix4c::Zero();
        for (const auto& s : starts) {
            const VectorXc phased = s.coeffs.cwiseProduct((std::complex<double>(0.0, -t) * energies.array()).exp().matrix());
            const VectorXc psi = v * phased;
            const Eigen::Map<const Eigen::Matrix<std::complex<double>, Eigen::Dynamic, 4>> cols(psi.data(), nb, 4);
            rho.noalias() += s.weight * (cols.transpose() * cols.conjugate());
        }
        rho /= retained;
        out[it] = DensityMatrix::unchecked(rho, Basis::Computational);
    }

    for (auto& rho : out) {
        if (const auto why = rho.violation(); !why.empty()) {
            throw NumericalError("brute-force state is not a density matrix: " + why);
        }
        rho = basis_transform(rho, initial.basis());
    }
    return out;
}

DensityMatrix brute_force_evolve(const DensityMatrix& initial, const DiscreteBathSpec& bath, double t,
                                 const BruteForceOptions& opts)
{
    return brute_force_series(initial, bath, {t}, opts).front();
}

DensityMatrix discrete_exact_evolve(const DensityMatrix& initial, const DiscreteBathSpec& bath, double t)
{
    bath.validate();
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw ValidationError("t must be finite and >= 0");
    }
    const Matrix4c rho0 = basis_transform(initial, Basis::Coupling).entries();
    Matrix4c rho = rho0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i == j) {
                continue;
            }
            const LambdaPair l = kCouplingStates[i];
            const LambdaPair lp = kCouplingStates[j];
            const Bracket br = Bracket::of(l, lp);
            const int p = l.product() - lp.product();
            const int odd = l.l1 * lp.l2 - l.l2 * lp.l1;
            double re = 0.0;
            double im = 0.0;
            for (const auto& m : bath.modes) {
                const double w = m.omega;
                const double g2 = m.g * m.g;
                const double s = std::sin(0.5 * w * t);
                const double one_minus_cos = 2.0 * s * s;
                const double coth = bath.theta == 0.0 ? 1.0 : 1.0 / std::tanh(w / (2.0 * bath.theta));
                // G_k = 2 g^2/w^2 sin^2(w t/2) coth, C_k = 2 g^2/w^2 (w t - sin w t)
                re -= g2 / (w * w) * one_minus_cos * coth * (br.a + br.b * std::cos(m.phase));
                im += 2.0 * g2 / (w * w) * (w * t - std::sin(w * t)) * std::cos(m.phase) * p;
                if (!bath.mirrored) {
                    im += 2.0 * g2 / (w * w) * one_minus_cos * std::sin(m.phase) * odd;
                }
            }
            rho(i, j) = rho0(i, j) * std::exp(std::complex<double>(re, im));
        }
    }
    const auto t_mat = coupling_to_computational();
    const Matrix4c out = initial.basis() == Basis::Coupling ? rho : Matrix4c(t_mat * rho * t_mat.adjoint());
    auto result = DensityMatrix::unchecked(out, initial.basis());
    if (const auto why = result.violation(); !why.empty()) {
        throw NumericalError("discrete exact state is not a density matrix: " + why);
    }
    return result;
}

DiscreteBathSpec discretize(const SpectralModel& model, const Geometry& geom, double theta, int mode_count,
                            double omega_max)
{
    geom.validate();
    if (!(model.n >= 1.0) || !(model.alpha >= 0.0)) {
        throw ValidationError("discretize needs n >= 1 and alpha >= 0");
    }
    if (mode_count < 1 || !(omega_max > 0.0)) {
        throw ValidationError("discretize needs mode_count >= 1 and omega_max > 0");
    }
    if (!(theta >= 0.0)) {
        throw ValidationError("theta must be >= 0");
    }
    DiscreteBathSpec bath;
    bath.theta = theta;
    bath.mirrored = true;
    const double d = omega_max / mode_count;
    for (int j = 1; j <= mode_count; ++j) {
        const double w = (j - 0.5) * d;
        const double g2 = model.alpha * std::pow(w, model.n) * std::exp(-w) * d;
        bath.modes.push_back({w, std::sqrt(g2), w * geom.delta});
    }
    bath.fock_cutoff = 2;
    while (bath.top_level_occupation() >= kMaxTopOccupation) {
        ++bath.fock_cutoff;
    }
    return bath;
}

} // namespace commonbath::oracle
