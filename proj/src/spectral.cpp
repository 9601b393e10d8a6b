#include "commonbath/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "commonbath/errors.hpp"
#include "commonbath/quadrature.hpp"

namespace commonbath {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double coth_half(double omega, double theta)
{
    if (theta == 0.0) {
        return 1.0;
    }
    const double x = omega / (2.0 * theta);
    if (x > 25.0) {
        return 1.0 + 2.0 * std::exp(-2.0 * x);
    }
    return 1.0 / std::tanh(x);
}

// x - sin x without cancellation at small x.
double x_minus_sin(double x)
{
    if (std::abs(x) < 0.1) {
        const double x2 = x * x;
        return x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0 * (1.0 - x2 / 110.0))));
    }
    return x - std::sin(x);
}

void check_time(double tau)
{
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw ValidationError("tau must be finite and >= 0, got " + std::to_string(tau));
    }
}

void check_theta(double theta)
{
    if (!(theta >= 0.0) || !std::isfinite(theta)) {
        throw ValidationError("theta must be finite and >= 0, got " + std::to_string(theta));
    }
}

bool use_closed_form(const SpectralModel& model, const IntegrationOptions& opts)
{
    switch (opts.method) {
    case IntegrationMethod::ClosedForm:
        if (!model.has_closed_form()) {
            throw ValidationError("closed-form path supports n in {1,2,3,4} only");
        }
        return true;
    case IntegrationMethod::Quadrature:
        return false;
    case IntegrationMethod::Auto:
        break;
    }
    return model.has_closed_form();
}

double integrate(const std::function<double(double)>& f, const SpectralModel& model, double max_freq,
                 const IntegrationOptions& opts)
{
    quadrature::HalfLineOptions q;
    q.max_freq = max_freq;
    // w^(n-2) with fractional n is not smooth at the origin
    q.graded_origin = model.n != std::floor(model.n);
    q.panel_tol = std::clamp(opts.rel_tol * 1e-2, 1e-12, 1e-10);
    const auto r = quadrature::integrate_half_line(f, q);
    if (!std::isfinite(r.value) || r.error > std::max(opts.abs_tol, opts.rel_tol * std::abs(r.value))) {
        throw NumericalError("quadrature did not converge: value " + std::to_string(r.value) + ", error estimate "
                             + std::to_string(r.error));
    }
    return r.value;
}

// Re(1 + i delta)^(-s) * Gamma(s)
double gamma_cos_moment(double s, double delta)
{
    return kernel::laplace_kernel(s, 1.0, delta);
}

} // namespace

void SpectralModel::validate() const
{
    if (!(n >= 1.0) || !std::isfinite(n)) {
        throw ValidationError("bath exponent n must be >= 1 (sub-Ohmic baths are not supported)");
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ValidationError("coupling alpha must be > 0");
    }
}

bool SpectralModel::has_closed_form() const
{
    return n == 1.0 || n == 2.0 || n == 3.0 || n == 4.0;
}

void Geometry::validate() const
{
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw ValidationError("separation delta must be finite and >= 0");
    }
}

void LambdaPair::validate() const
{
    if ((l1 != 1 && l1 != -1) || (l2 != 1 && l2 != -1)) {
        throw ValidationError("lambda values must be +1 or -1");
    }
}

Bracket Bracket::of(LambdaPair from, LambdaPair to)
{
    from.validate();
    to.validate();
    const double d1 = to.l1 - from.l1;
    const double d2 = to.l2 - from.l2;
    return {d1 * d1 + d2 * d2, 2.0 * d1 * d2};
}

double u_shape(const SpectralModel& model, double xi)
{
    model.validate();
    return std::cos(model.n * std::atan(xi)) / std::pow(1.0 + xi * xi, 0.5 * model.n);
}

double induced_interaction(const SpectralModel& model, const Geometry& geom)
{
    geom.validate();
    return -2.0 * model.alpha * std::tgamma(model.n) * u_shape(model, geom.delta);
}

double onset_tau_F(const SpectralModel& model, const Geometry& geom, double tau)
{
    model.validate();
    geom.validate();
    check_time(tau);
    // 2 alpha int w^(n-2) e^-w sin(w tau) cos(w delta)
    const double s = model.n - 1.0;
    return model.alpha
           * (kernel::laplace_sin(s, 1.0, tau + geom.delta) + kernel::laplace_sin(s, 1.0, tau - geom.delta));
}

double onset_F(const SpectralModel& model, const Geometry& geom, double tau)
{
    model.validate();
    geom.validate();
    check_time(tau);
    if (tau < 1e-4) {
        // sin(x)/x = 1 - x^2/6 + x^4/120
        const double n = model.n;
        const double t2 = tau * tau;
        return 2.0 * model.alpha
               * (gamma_cos_moment(n, geom.delta) - t2 / 6.0 * gamma_cos_moment(n + 2.0, geom.delta)
                  + t2 * t2 / 120.0 * gamma_cos_moment(n + 4.0, geom.delta));
    }
    return onset_tau_F(model, geom, tau) / tau;
}

double onset_HF(const SpectralModel& model, const Geometry& geom, double tau)
{
    geom.validate();
    check_time(tau);
    return model.alpha * std::tgamma(model.n)
           * (u_shape(model, geom.delta - tau) + u_shape(model, geom.delta + tau));
}

double re_exponent_bracket(const SpectralModel& model, const Geometry& geom, double theta, double tau,
                           Bracket br, const IntegrationOptions& opts)
{
    model.validate();
    geom.validate();
    check_theta(theta);
    check_time(tau);

    const double delta = geom.delta;
    // A + B cos(w delta) vanishes identically
    if (br.vanishes() || (br.a + br.b == 0.0 && delta == 0.0) || tau == 0.0) {
        return 0.0;
    }

    double value = 0.0;
    if (use_closed_form(model, opts)) {
        // (1 - cos w tau)(A + B cos w delta), expanded by product-to-sum
        kernel::CosineCombination p;
        p.constant = br.a;
        p.terms = {{-br.a, tau}, {br.b, delta}, {-0.5 * br.b, tau + delta}, {-0.5 * br.b, std::abs(tau - delta)}};
        value = -model.alpha * kernel::thermal_transform(model.n - 1.0, theta, p, opts.series_terms);
    } else {
        const double n = model.n;
        auto f = [&](double w) {
            const double h = std::sin(0.5 * w * tau);
            return std::pow(w, n - 2.0) * std::exp(-w) * 2.0 * h * h * coth_half(w, theta)
                   * (br.a + br.b * std::cos(w * delta));
        };
        value = -model.alpha * integrate(f, model, tau + delta, opts);
    }
    return std::min(value, 0.0);
}

double re_exponent(const SpectralModel& model, const Geometry& geom, double theta, double tau, LambdaPair from,
                   LambdaPair to, const IntegrationOptions& opts)
{
    return re_exponent_bracket(model, geom, theta, tau, Bracket::of(from, to), opts);
}

double im_exponent_unit(const SpectralModel& model, const Geometry& geom, double tau, const IntegrationOptions& opts)
{
    model.validate();
    geom.validate();
    check_time(tau);
    if (tau == 0.0) {
        return 0.0;
    }
    const double n = model.n;
    const double delta = geom.delta;

    if (use_closed_form(model, opts)) {
        if (tau < 0.01) {
            // w tau - sin w tau = sum_j (-1)^(j+1) (w tau)^(2j+1) / (2j+1)!
            double sum = 0.0;
            double pw = tau;
            double fact = 1.0;
            for (int j = 1; j <= 8; ++j) {
                pw *= tau * tau;
                fact *= (2.0 * j) * (2.0 * j + 1.0);
                const double sign = (j % 2 == 1) ? 1.0 : -1.0;
                sum += sign * pw / fact * gamma_cos_moment(n + 2.0 * j, delta);
            }
            return 2.0 * model.alpha * sum;
        }
        return 2.0 * model.alpha * tau * gamma_cos_moment(n, delta) - onset_tau_F(model, geom, tau);
    }

    auto f = [&](double w) { return std::pow(w, n - 2.0) * std::exp(-w) * x_minus_sin(w * tau) * std::cos(w * delta); };
    return 2.0 * model.alpha * integrate(f, model, tau + delta, opts);
}

double im_exponent(const SpectralModel& model, const Geometry& geom, double tau, LambdaPair from, LambdaPair to,
                   const IntegrationOptions& opts)
{
    from.validate();
    to.validate();
    const int p = from.product() - to.product();
    if (p == 0) {
        model.validate();
        geom.validate();
        check_time(tau);
        return 0.0;
    }
    return p * im_exponent_unit(model, geom, tau, opts);
}

ExponentValue exponent(const SpectralModel& model, const Geometry& geom, double theta, double tau, LambdaPair from,
                       LambdaPair to, const IntegrationOptions& opts)
{
    return {re_exponent(model, geom, theta, tau, from, to, opts), im_exponent(model, geom, tau, from, to, opts)};
}

double re_exponent_limit(const SpectralModel& model, const Geometry& geom, double theta, LambdaPair from,
                         LambdaPair to, const IntegrationOptions& opts)
{
    model.validate();
    geom.validate();
    check_theta(theta);
    const Bracket br = Bracket::of(from, to);
    const double delta = geom.delta;
    if (br.vanishes() || (br.a + br.b == 0.0 && delta == 0.0)) {
        return 0.0;
    }

    // Small-w behaviour of w^(n-2) coth(w/2theta) (A + B cos w delta).
    const double at_zero = br.a + br.b;
    if (at_zero != 0.0) {
        const double infrared_power = model.n - 2.0 - (theta > 0.0 ? 1.0 : 0.0);
        if (infrared_power <= -1.0) {
            return -kInf;
        }
    }

    double value = 0.0;
    if (use_closed_form(model, opts)) {
        kernel::CosineCombination p;
        p.constant = br.a;
        p.terms = {{br.b, delta}};
        value = -model.alpha * kernel::thermal_transform(model.n - 1.0, theta, p, opts.series_terms);
    } else {
        const double n = model.n;
        auto f = [&](double w) {
            return std::pow(w, n - 2.0) * std::exp(-w) * coth_half(w, theta) * (br.a + br.b * std::cos(w * delta));
        };
        value = -model.alpha * integrate(f, model, delta, opts);
    }
    return std::min(value, 0.0);
}

namespace kernel {

double laplace_kernel(double s, double beta, double a)
{
    if (!(s > 0.0) || !(beta > 0.0)) {
        throw std::domain_error("laplace_kernel requires s > 0 and beta > 0");
    }
    const double r2 = beta * beta + a * a;
    return std::tgamma(s) * std::pow(r2, -0.5 * s) * std::cos(s * std::atan2(a, beta));
}

double laplace_sin(double s, double beta, double a)
{
    if (!(s >= 0.0) || !(beta > 0.0)) {
        throw std::domain_error("laplace_sin requires s >= 0 and beta > 0");
    }
    if (s == 0.0) {
        return std::atan2(a, beta);
    }
    const double r2 = beta * beta + a * a;
    return std::tgamma(s) * std::pow(r2, -0.5 * s) * std::sin(s * std::atan2(a, beta));
}

double laplace_cos_minus_one(double s, double beta, double a)
{
    if (!(s > -2.0) || !(beta > 0.0)) {
        throw std::domain_error("laplace_cos_minus_one requires s > -2 and beta > 0");
    }
    if (a == 0.0) {
        return 0.0;
    }
    const double x = a / beta;
    const double l = std::log1p(x * x);
    if (s == 0.0) {
        return -0.5 * l;
    }
    if (s == -1.0) {
        return beta * (0.5 * l - x * std::atan(x));
    }
    // Re(1 + i x)^(-s) - 1 written to keep precision when x is small
    const double phi = s * std::atan(x);
    const double h = std::sin(0.5 * phi);
    const double bracket = std::expm1(-0.5 * s * l) * std::cos(phi) - 2.0 * h * h;
    return std::tgamma(s) * std::pow(beta, -s) * bracket;
}

double CosineCombination::total_constant() const
{
    double c = constant;
    for (const auto& t : terms) {
        c += t.coef;
    }
    return c;
}

double CosineCombination::max_freq() const
{
    double m = 0.0;
    for (const auto& t : terms) {
        m = std::max(m, std::abs(t.freq));
    }
    return m;
}

double transform(double s, double beta, const CosineCombination& p)
{
    double value = 0.0;
    const double c = p.total_constant();
    if (c != 0.0) {
        if (!(s > 0.0)) {
            throw std::domain_error("transform diverges: nonzero constant part with s <= 0");
        }
        value += c * std::tgamma(s) * std::pow(beta, -s);
    }
    for (const auto& t : p.terms) {
        if (t.coef != 0.0) {
            value += t.coef * laplace_cos_minus_one(s, beta, t.freq);
        }
    }
    return value;
}

double thermal_transform(double s, double theta, const CosineCombination& p, int series_terms)
{
    double sum = transform(s, 1.0, p);
    if (theta == 0.0) {
        return sum;
    }

    const long split = series_terms > 0
                           ? series_terms
                           : 16 + static_cast<long>(std::ceil(4.0 * theta * (1.0 + p.max_freq())));
    for (long m = 1; m < split; ++m) {
        sum += 2.0 * transform(s, 1.0 + m / theta, p);
    }

    // Euler-Maclaurin tail: sum_{m >= M} 2 V(s, 1 + m/theta)
    const double beta = 1.0 + split / theta;
    const double tail = 2.0 * theta * transform(s - 1.0, beta, p) + transform(s, beta, p)
                        + transform(s + 1.0, beta, p) / (6.0 * theta)
                        - transform(s + 3.0, beta, p) / (360.0 * std::pow(theta, 3))
                        + transform(s + 5.0, beta, p) / (15120.0 * std::pow(theta, 5));
    return sum + tail;
}

double thermal_transform_truncated(double s, double theta, const CosineCombination& p, double rel_cut,
                                   long max_terms)
{
    double sum = transform(s, 1.0, p);
    if (theta == 0.0) {
        return sum;
    }
    for (long m = 1; m < max_terms; ++m) {
        const double term = 2.0 * transform(s, 1.0 + m / theta, p);
        sum += term;
        if (std::abs(term) < rel_cut * std::abs(sum)) {
            break;
        }
    }
    return sum;
}

} // namespace kernel

} // namespace commonbath
