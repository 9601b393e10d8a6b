// spectral.hpp: bath integrals for two gapless qubits in a common 1D bosonic bath
//
// Units: cutoff frequency and sound velocity are 1. Times are tau = w_c t,
// separations delta = w_c |d| / c_s, temperatures theta = k_B T / w_c.
// The bath is sum_k |g_k|^2 f(w_k) -> alpha_n int dw w^n exp(-w/w_c) f(w).

#pragma once

#include <array>
#include <vector>

namespace commonbath {

struct SpectralModel {
    double n{1.0};      // bath exponent, n = 1 is Ohmic
    double alpha{0.05}; // dimensionless coupling alpha_n * w_c^(n-1)

    // Throws ValidationError unless n >= 1 and alpha > 0.
    void validate() const;
    bool has_closed_form() const;
};

struct Geometry {
    double delta{0.0};

    void validate() const;
};

// Eigenvalues (+1 / -1) of sigma_x on each qubit.
struct LambdaPair {
    int l1{1};
    int l2{1};

    void validate() const;
    int product() const { return l1 * l2; }

    friend bool operator==(const LambdaPair&, const LambdaPair&) = default;
};

// Coupling-basis ordering |++>, |+->, |-+>, |-->.
inline constexpr std::array<LambdaPair, 4> kCouplingStates{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

// Exponent L_{lambda lambda'}(tau) multiplying the coupling-basis entry.
struct ExponentValue {
    double re{0.0}; // decoherence, always <= 0
    double im{0.0}; // coherent phase
};

enum class IntegrationMethod {
    Auto,       // closed forms for n in {1,2,3,4}, quadrature otherwise
    ClosedForm, // thermal geometric series with Euler-Maclaurin tail
    Quadrature, // panelled adaptive Gauss-Kronrod over [0, inf)
};

struct IntegrationOptions {
    IntegrationMethod method{IntegrationMethod::Auto};
    double abs_tol{1e-10};
    double rel_tol{1e-8};
    // Number of explicitly summed thermal terms before the Euler-Maclaurin
    // tail; 0 picks a value from theta and the largest frequency.
    int series_terms{0};
};

// Wave shape of the onset Hamiltonian, cos(n atan xi) / (1 + xi^2)^(n/2).
double u_shape(const SpectralModel& model, double xi);

// Coefficient of sigma_x^1 sigma_x^2 in the static induced interaction.
double induced_interaction(const SpectralModel& model, const Geometry& geom);

// Coefficient of sigma_x^1 sigma_x^2 in the onset correction F(tau).
double onset_F(const SpectralModel& model, const Geometry& geom, double tau);

// tau * F(tau), evaluated without the division.
double onset_tau_F(const SpectralModel& model, const Geometry& geom, double tau);

// Coefficient of sigma_x^1 sigma_x^2 in H_F(tau) = d[tau F(tau)]/dtau.
double onset_HF(const SpectralModel& model, const Geometry& geom, double tau);

double re_exponent(const SpectralModel& model, const Geometry& geom, double theta, double tau,
                   LambdaPair from, LambdaPair to, const IntegrationOptions& opts = {});

double im_exponent(const SpectralModel& model, const Geometry& geom, double tau, LambdaPair from,
                   LambdaPair to, const IntegrationOptions& opts = {});

ExponentValue exponent(const SpectralModel& model, const Geometry& geom, double theta, double tau,
                       LambdaPair from, LambdaPair to, const IntegrationOptions& opts = {});

// Re L as tau -> infinity with the oscillating cos(w tau) terms dropped.
// Returns -infinity when the integral diverges (the entry is fully damped).
double re_exponent_limit(const SpectralModel& model, const Geometry& geom, double theta,
                         LambdaPair from, LambdaPair to, const IntegrationOptions& opts = {});

// The exponents only depend on the pair through these combinations.
struct Bracket {
    double a{0.0}; // (d1^2 + d2^2)
    double b{0.0}; // 2 d1 d2, multiplies cos(w delta)

    static Bracket of(LambdaPair from, LambdaPair to);
    bool vanishes() const { return a == 0.0 && b == 0.0; }
};

// Re L for a given bracket; re_exponent() forwards here.
double re_exponent_bracket(const SpectralModel& model, const Geometry& geom, double theta,
                           double tau, Bracket bracket, const IntegrationOptions& opts = {});

// Im L / p where p = l1 l2 - l1' l2'.
double im_exponent_unit(const SpectralModel& model, const Geometry& geom, double tau,
                        const IntegrationOptions& opts = {});

namespace kernel {

// int_0^inf w^(s-1) e^(-beta w) cos(a w) dw for s > 0.
double laplace_kernel(double s, double beta, double a);

// int_0^inf w^(s-1) e^(-beta w) sin(a w) dw for s >= 0.
double laplace_sin(double s, double beta, double a);

// int_0^inf w^(s-1) e^(-beta w) (cos(a w) - 1) dw, convergent for s > -2.
// At s = 0 this is -1/2 ln(1 + a^2/beta^2).
double laplace_cos_minus_one(double s, double beta, double a);

// c0 + sum_i coef_i cos(freq_i w)
struct CosineCombination {
    double constant{0.0};
    struct Term {
        double coef;
        double freq;
    };
    std::vector<Term> terms;

    double total_constant() const;
    double max_freq() const;
};

// int_0^inf w^(s-1) e^(-beta w) P(w) dw for a cosine combination P.
double transform(double s, double beta, const CosineCombination& p);

// int_0^inf w^(s-1) e^(-w) coth(w / 2 theta) P(w) dw through the expansion
// coth = 1 + 2 sum_m exp(-m w / theta). theta = 0 keeps only the m = 0 term.
// Pass series_terms = 0 for the automatic split point.
double thermal_transform(double s, double theta, const CosineCombination& p, int series_terms = 0);

// Plain truncated series, stopping once a term falls below rel_cut relative
// to the running sum. max_terms bounds the work.
double thermal_transform_truncated(double s, double theta, const CosineCombination& p,
                                   double rel_cut, long max_terms);

} // namespace kernel

} // namespace commonbath
