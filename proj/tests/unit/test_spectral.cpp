#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <random>

#include "commonbath/errors.hpp"
#include "commonbath/spectral.hpp"
#include "reference.hpp"

using namespace commonbath;
using doctest::Approx;

namespace {

const SpectralModel kOhmic{1.0, 0.05};
constexpr LambdaPair kPP{1, 1};
constexpr LambdaPair kPM{1, -1};
constexpr LambdaPair kMP{-1, 1};
constexpr LambdaPair kMM{-1, -1};

double rel_err(double x, double y)
{
    return std::abs(x - y) / std::max(std::abs(y), 1e-300);
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= y.size();
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

} // namespace

TEST_CASE("model validation")
{
    CHECK_NOTHROW(kOhmic.validate());
    CHECK_THROWS_AS((SpectralModel{0.5, 0.05}.validate()), ValidationError);
    CHECK_THROWS_AS((SpectralModel{1.0, 0.0}.validate()), ValidationError);
    CHECK_THROWS_AS((SpectralModel{1.0, -1.0}.validate()), ValidationError);
    CHECK_THROWS_AS((SpectralModel{std::nan(""), 0.05}.validate()), ValidationError);
    CHECK_THROWS_AS((Geometry{-1.0}.validate()), ValidationError);
    CHECK_THROWS_AS((Geometry{std::numeric_limits<double>::infinity()}.validate()), ValidationError);
    CHECK_THROWS_AS((LambdaPair{1, 0}.validate()), ValidationError);
    CHECK(SpectralModel{4.0, 0.1}.has_closed_form());
    CHECK_FALSE(SpectralModel{1.5, 0.1}.has_closed_form());
}

TEST_CASE("u_shape values")
{
    CHECK(u_shape(kOhmic, 0.0) == 1.0);
    CHECK(u_shape(kOhmic, 1.0) == Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(u_shape(SpectralModel{2.0, 0.05}, 1.0)) < 1e-15);
}

TEST_CASE("u_shape is even and bounded")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> xi(-50.0, 50.0);
    std::uniform_real_distribution<double> ns(1.0, 6.0);
    for (int k = 0; k < 2000; ++k) {
        const SpectralModel m{ns(rng), 0.1};
        const double x = xi(rng);
        CHECK(u_shape(m, x) == u_shape(m, -x));
        CHECK(std::abs(u_shape(m, x)) <= 1.0);
        CHECK(u_shape(m, 0.0) == 1.0);
    }
}

TEST_CASE("induced interaction values")
{
    CHECK(induced_interaction(kOhmic, Geometry{0.0}) == Approx(-0.1).epsilon(1e-15));
    CHECK(induced_interaction(kOhmic, Geometry{1.0}) == Approx(-0.05).epsilon(1e-14));
    CHECK(std::abs(induced_interaction(SpectralModel{2.0, 0.05}, Geometry{1.0})) < 1e-16);
    CHECK(std::abs(induced_interaction(SpectralModel{2.0, 3.0}, Geometry{1.0})) < 1e-15);
    // -2 alpha Gamma(n) at contact
    CHECK(induced_interaction(SpectralModel{3.0, 0.01}, Geometry{0.0}) == Approx(-0.04).epsilon(1e-14));
}

TEST_CASE("induced interaction falls off as a power of the separation")
{
    // odd n: |d|^-(n+1), even n: |d|^-n
    const std::vector<std::pair<double, double>> expected = {{1, -2}, {2, -2}, {3, -4}, {4, -4}};
    for (auto [n, slope] : expected) {
        std::vector<double> x;
        std::vector<double> y;
        for (int k = 0; k <= 40; ++k) {
            const double d = 20.0 * std::pow(10.0, k / 40.0);
            x.push_back(std::log(d));
            y.push_back(std::log(std::abs(induced_interaction(SpectralModel{n, 0.05}, Geometry{d}))));
        }
        CAPTURE(n);
        CHECK(fitted_slope(x, y) == Approx(slope).epsilon(0.05 / std::abs(slope)));
    }
}

TEST_CASE("onset F values")
{
    const Geometry g0{0.0};
    CHECK(onset_F(kOhmic, g0, 0.0) == Approx(0.1).epsilon(1e-15));
    CHECK(onset_F(kOhmic, g0, 1.0) == Approx(0.1 * std::atan(1.0)).epsilon(1e-13));
    CHECK(onset_tau_F(kOhmic, g0, 1e6) == Approx(0.1 * M_PI / 2).epsilon(1e-6));
    CHECK(onset_F(kOhmic, g0, 1e6) < 1e-6);
    CHECK_THROWS_AS(onset_F(kOhmic, g0, -1.0), ValidationError);
    CHECK_THROWS_AS(onset_HF(kOhmic, g0, -1.0), ValidationError);
    CHECK_THROWS_AS(onset_tau_F(kOhmic, g0, -1.0), ValidationError);
}

TEST_CASE("onset F at zero cancels the induced interaction")
{
    for (double n : {1.0, 2.0, 3.0, 4.0, 1.5}) {
        for (double d : {0.0, 1.0, 5.0}) {
            const SpectralModel m{n, 0.05};
            CAPTURE(n);
            CAPTURE(d);
            CHECK(onset_F(m, Geometry{d}, 0.0) == Approx(-induced_interaction(m, Geometry{d})).epsilon(1e-14));
            CHECK(onset_HF(m, Geometry{d}, 0.0) == Approx(-induced_interaction(m, Geometry{d})).epsilon(1e-14));
        }
    }
}

TEST_CASE("onset F is continuous across the small-tau series")
{
    for (double n : {1.0, 2.0, 3.0}) {
        for (double d : {0.0, 1.0, 5.0}) {
            const SpectralModel m{n, 0.05};
            const double below = onset_F(m, Geometry{d}, 0.99999e-4);
            const double above = onset_F(m, Geometry{d}, 1.00001e-4);
            CHECK(std::abs(below - above) < 1e-11);
        }
    }
}

TEST_CASE("onset F matches direct quadrature of its integral form")
{
    // tau F = 2 alpha int w^(n-2) e^-w sin(w tau) cos(w delta)
    for (double n : {1.0, 2.0, 3.0}) {
        for (double d : {0.0, 2.0}) {
            for (double tau : {0.5, 3.0, 7.0}) {
                const double want = ref::simpson(
                    [&](double w) {
                        if (w == 0.0) {
                            return n == 1.0 ? 2.0 * 0.05 * tau : 0.0;
                        }
                        return 2.0 * 0.05 * std::pow(w, n - 2.0) * std::exp(-w) * std::sin(w * tau) *
                               std::cos(w * d);
                    },
                    0.0, 60.0, 200000);
                CAPTURE(n);
                CAPTURE(d);
                CAPTURE(tau);
                CHECK(rel_err(onset_tau_F(SpectralModel{n, 0.05}, Geometry{d}, tau), want) < 1e-9);
            }
        }
    }
}

TEST_CASE("onset HF values")
{
    CHECK(onset_HF(kOhmic, Geometry{0.0}, 0.0) == Approx(0.1).epsilon(1e-15));
    CHECK(onset_HF(kOhmic, Geometry{0.0}, 1.0) == Approx(0.05).epsilon(1e-14));
    CHECK(onset_HF(kOhmic, Geometry{5.0}, 5.0) == Approx(0.05 * (1.0 + 1.0 / 101.0)).epsilon(1e-14));
}

TEST_CASE("onset HF is the time derivative of tau F")
{
    for (double n : {1.0, 2.0, 3.0}) {
        for (double d : {0.0, 1.0, 5.0}) {
            const SpectralModel m{n, 0.05};
            const Geometry g{d};
            for (int k = 0; k <= 60; ++k) {
                const double tau = 0.01 * std::pow(5000.0, k / 60.0);
                const double h = 1e-5 * std::max(tau, 0.1);
                const double fd = (onset_tau_F(m, g, tau + h) - onset_tau_F(m, g, tau - h)) / (2 * h);
                // scale by the wave amplitude so zero crossings of H_F do not blow up the ratio
                const double scale = m.alpha * std::tgamma(n) *
                                     (std::abs(u_shape(m, d - tau)) + std::abs(u_shape(m, d + tau)));
                CAPTURE(n);
                CAPTURE(d);
                CAPTURE(tau);
                CHECK(std::abs(fd - onset_HF(m, g, tau)) / scale < 1e-6);
            }
        }
    }
}

TEST_CASE("onset H_F peaks when the wave reaches the second qubit")
{
    const Geometry g{5.0};
    double best_tau = 0.0;
    double best = -1.0;
    for (int k = 1; k <= 1000; ++k) {
        const double tau = k * 0.01;
        const double h = onset_HF(kOhmic, g, tau);
        if (h > best) {
            best = h;
            best_tau = tau;
        }
    }
    CHECK(best_tau == Approx(5.0).epsilon(0.01));
}

TEST_CASE("onset F decays as a power law")
{
    for (double n : {1.0, 2.0}) {
        std::vector<double> x;
        std::vector<double> y;
        for (int k = 0; k <= 40; ++k) {
            const double tau = 50.0 * std::pow(10.0, k / 40.0);
            x.push_back(std::log(tau));
            y.push_back(std::log(std::abs(onset_F(SpectralModel{n, 0.05}, Geometry{1.0}, tau))));
        }
        CHECK(fitted_slope(x, y) == Approx(-n).epsilon(0.05 / n));
    }
}

TEST_CASE("re exponent values")
{
    // from (-,-) to (+,+): d1 = d2 = 2
    CHECK(re_exponent(kOhmic, Geometry{0.0}, 0.0, 1.0, kMM, kPP) ==
          Approx(-16.0 * 0.05 * 0.5 * std::log(2.0)).epsilon(1e-12));
    // d1 = 2, d2 = -2 at contact: the bracket (d1 + d2)^2 vanishes
    for (double theta : {0.0, 0.05, 1.0}) {
        for (double tau : {0.5, 5.0, 50.0}) {
            CHECK(std::abs(re_exponent(kOhmic, Geometry{0.0}, theta, tau, kMP, kPM)) < 1e-15);
        }
    }
    for (auto l : kCouplingStates) {
        CHECK(re_exponent(kOhmic, Geometry{2.0}, 0.05, 3.0, l, l) == 0.0);
    }
    CHECK(re_exponent(kOhmic, Geometry{2.0}, 0.05, 0.0, kPP, kMM) == 0.0);
}

TEST_CASE("re exponent input checks")
{
    CHECK_THROWS_AS(re_exponent(kOhmic, Geometry{0.0}, -0.1, 1.0, kMM, kPP), ValidationError);
    CHECK_THROWS_AS(re_exponent(kOhmic, Geometry{0.0}, 0.1, -1.0, kMM, kPP), ValidationError);
    CHECK_THROWS_AS(re_exponent(kOhmic, Geometry{-1.0}, 0.1, 1.0, kMM, kPP), ValidationError);
    CHECK_THROWS_AS(re_exponent(kOhmic, Geometry{0.0}, 0.1, 1.0, LambdaPair{2, 1}, kPP), ValidationError);
    IntegrationOptions forced;
    forced.method = IntegrationMethod::ClosedForm;
    CHECK_THROWS_AS(re_exponent(SpectralModel{1.5, 0.05}, Geometry{0.0}, 0.1, 1.0, kMM, kPP, forced),
                    ValidationError);
}

TEST_CASE("re exponent is never positive")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 400; ++k) {
        const SpectralModel m{1.0 + std::floor(4 * u(rng)), 0.2 * u(rng) + 1e-3};
        const Geometry g{10 * u(rng)};
        const double theta = 0.3 * u(rng);
        const double tau = 80 * u(rng);
        const auto from = kCouplingStates[static_cast<int>(4 * u(rng)) % 4];
        const auto to = kCouplingStates[static_cast<int>(4 * u(rng)) % 4];
        CHECK(re_exponent(m, g, theta, tau, from, to) <= 0.0);
    }
}

TEST_CASE("im exponent values")
{
    // from (+,+) to (+,-): p = 1 - (-1) = 2
    CHECK(im_exponent(kOhmic, Geometry{0.0}, 1.0, kPP, kPM) ==
          Approx(2.0 * 2.0 * 0.05 * (1.0 - M_PI / 4)).epsilon(1e-12));
    // p = 0 pairs
    CHECK(im_exponent(kOhmic, Geometry{1.0}, 4.0, kPP, kMM) == 0.0);
    CHECK(im_exponent(kOhmic, Geometry{1.0}, 4.0, kPM, kMP) == 0.0);
    CHECK(im_exponent(kOhmic, Geometry{1.0}, 0.0, kPP, kPM) == 0.0);
    CHECK_THROWS_AS(im_exponent(kOhmic, Geometry{0.0}, -1.0, kPP, kPM), ValidationError);
}

TEST_CASE("im exponent grows with slope -H_int p")
{
    for (double n : {1.0, 2.0, 3.0}) {
        for (double d : {0.0, 1.0, 3.0}) {
            const SpectralModel m{n, 0.05};
            const Geometry g{d};
            const double t = 4000.0;
            const double slope = (im_exponent(m, g, t + 1, kPP, kPM) - im_exponent(m, g, t - 1, kPP, kPM)) / 2.0;
            CAPTURE(n);
            CAPTURE(d);
            // the onset part still contributes d(tau F)/dtau ~ tau^-n
            CHECK(std::abs(slope + 2.0 * induced_interaction(m, g)) < 1e-6);
        }
    }
}

TEST_CASE("im exponent equals tau times (-H_int - F)")
{
    for (double n : {1.0, 2.0, 3.0, 4.0}) {
        for (double d : {0.0, 1.0, 5.0}) {
            for (double tau : {0.3, 2.0, 9.0}) {
                const SpectralModel m{n, 0.05};
                const Geometry g{d};
                const double want = tau * (-induced_interaction(m, g) - onset_F(m, g, tau));
                CHECK(im_exponent_unit(m, g, tau) == Approx(want).epsilon(1e-9).scale(1e-12));
            }
        }
    }
}

TEST_CASE("exponents agree with an independent Simpson reference")
{
    struct Point {
        double n, delta, theta, tau;
    };
    const std::vector<Point> pts = {
        {1, 1, 0.05, 3}, {1, 0, 0.1, 10}, {2, 5, 0.1, 10}, {3, 1, 0.05, 5}, {4, 2, 0, 6}, {1.5, 2, 0.05, 4},
    };
    for (const auto& p : pts) {
        const SpectralModel m{p.n, 0.05};
        const Geometry g{p.delta};
        // from (-,-) to (+,+): a = 8, b = 8; from (+,-) to (+,+): a = 4, b = 0
        const double want_mm = ref::re_exponent(p.n, 0.05, p.delta, p.theta, p.tau, 8, 8);
        const double want_pm = ref::re_exponent(p.n, 0.05, p.delta, p.theta, p.tau, 4, 0);
        const double want_im = ref::im_exponent_unit(p.n, 0.05, p.delta, p.tau);
        const double tol = p.n == 1.5 ? 1e-6 : 1e-8;
        CAPTURE(p.n);
        CAPTURE(p.delta);
        CAPTURE(p.theta);
        CAPTURE(p.tau);
        CHECK(rel_err(re_exponent(m, g, p.theta, p.tau, kMM, kPP), want_mm) < tol);
        CHECK(rel_err(re_exponent(m, g, p.theta, p.tau, kPM, kPP), want_pm) < tol);
        CHECK(rel_err(im_exponent_unit(m, g, p.tau), want_im) < tol);
    }
}

TEST_CASE("closed form and quadrature agree")
{
    IntegrationOptions cf;
    cf.method = IntegrationMethod::ClosedForm;
    IntegrationOptions quad;
    quad.method = IntegrationMethod::Quadrature;
    for (double n : {1.0, 2.0, 3.0, 4.0}) {
        for (double d : {0.0, 1.0, 5.0}) {
            for (double theta : {0.0, 0.05, 0.1}) {
                for (double tau : {0.1, 1.0, 5.0, 20.0, 50.0}) {
                    const SpectralModel m{n, 0.05};
                    const Geometry g{d};
                    CAPTURE(n);
                    CAPTURE(d);
                    CAPTURE(theta);
                    CAPTURE(tau);
                    for (auto from : kCouplingStates) {
                        const double a = re_exponent(m, g, theta, tau, from, kPP, cf);
                        const double b = re_exponent(m, g, theta, tau, from, kPP, quad);
                        CHECK(std::abs(a - b) <= 1e-8 * std::abs(b) + 1e-14);
                    }
                    const double a = im_exponent_unit(m, g, tau, cf);
                    const double b = im_exponent_unit(m, g, tau, quad);
                    CHECK(std::abs(a - b) <= 1e-8 * std::abs(b) + 1e-14);
                }
            }
        }
    }
}

TEST_CASE("re exponent limit")
{
    // At contact the (+-, -+) bracket vanishes, so the limit is zero.
    CHECK(re_exponent_limit(kOhmic, Geometry{0.0}, 0.05, kPM, kMP) == 0.0);
    // At theta > 0 with n = 1 the (1 - cos) integral diverges logarithmically in tau.
    CHECK(re_exponent_limit(kOhmic, Geometry{0.0}, 0.05, kPP, kMM) == -std::numeric_limits<double>::infinity());
    // Away from contact the (+-, -+) entry decays to a finite value.
    const double lim = re_exponent_limit(kOhmic, Geometry{1.0}, 0.05, kPM, kMP);
    CHECK(std::isfinite(lim));
    CHECK(lim < 0.0);
    CHECK(re_exponent(kOhmic, Geometry{1.0}, 0.05, 3000.0, kPM, kMP) == Approx(lim).epsilon(1e-3));
    // Super-Ohmic at zero temperature keeps a finite limit for every pair.
    const SpectralModel sup{3.0, 0.05};
    const double lim3 = re_exponent_limit(sup, Geometry{0.0}, 0.0, kPP, kMM);
    CHECK(std::isfinite(lim3));
    CHECK(re_exponent(sup, Geometry{0.0}, 0.0, 3000.0, kPP, kMM) == Approx(lim3).epsilon(1e-6));
}

TEST_CASE("laplace kernel values")
{
    using namespace kernel;
    CHECK(laplace_kernel(1, 1, 0) == Approx(1.0).epsilon(1e-15));
    CHECK(laplace_kernel(1, 1, 1) == Approx(0.5).epsilon(1e-15));
    CHECK(laplace_kernel(2, 1, 0) == Approx(1.0).epsilon(1e-15));
    CHECK(laplace_cos_minus_one(0, 2, 3) == Approx(-0.5 * std::log1p(2.25)).epsilon(1e-15));
    CHECK_THROWS_AS(laplace_kernel(0, 1, 1), std::domain_error);
    CHECK_THROWS_AS(laplace_kernel(1, 0, 1), std::domain_error);
    CHECK_THROWS_AS(laplace_sin(-1, 1, 1), std::domain_error);
    CHECK_THROWS_AS(laplace_cos_minus_one(-2, 1, 1), std::domain_error);
}

TEST_CASE("laplace kernels match Simpson quadrature")
{
    using namespace kernel;
    for (double s : {-1.0, -0.5, 0.0, 0.5, 1.0, 2.5}) {
        for (double beta : {1.0, 3.0}) {
            for (double a : {0.3, 4.0}) {
                const double want = ref::simpson_sqrt(
                    [&](double w) {
                        if (w == 0.0) {
                            return s == -1.0 ? -0.5 * a * a : 0.0;
                        }
                        const double c = a * w < 1e-4 ? -0.5 * a * a * w * w : std::cos(a * w) - 1.0;
                        return std::pow(w, s - 1.0) * std::exp(-beta * w) * c;
                    },
                    60.0, 400000);
                CAPTURE(s);
                CAPTURE(beta);
                CAPTURE(a);
                CHECK(rel_err(laplace_cos_minus_one(s, beta, a), want) < 1e-9);
            }
        }
    }
    for (double s : {1.0, 1.5, 3.0}) {
        const double want = ref::simpson_sqrt(
            [&](double w) {
                if (w == 0.0) {
                    return s == 1.0 ? 1.0 : 0.0;
                }
                return std::pow(w, s - 1.0) * std::exp(-2 * w) * std::cos(3 * w);
            },
            60.0, 400000);
        CAPTURE(s);
        CHECK(rel_err(laplace_kernel(s, 2, 3), want) < 1e-9);
    }
}

TEST_CASE("thermal series converges with respect to where the tail starts")
{
    const kernel::CosineCombination p{4.0, {{-4.0, 5.0}, {2.0, 1.0}, {-1.0, 6.0}, {-1.0, 4.0}}};
    for (double s : {0.0, 1.0, 2.0, 3.0}) {
        for (double theta : {0.0125, 0.05, 0.1, 0.5}) {
            const double base = kernel::thermal_transform(s, theta, p);
            for (int terms : {32, 100, 400, 2000}) {
                CAPTURE(s);
                CAPTURE(theta);
                CAPTURE(terms);
                CHECK(rel_err(kernel::thermal_transform(s, theta, p, terms), base) < 1e-10);
            }
        }
    }
}

TEST_CASE("plain truncated thermal series at 1e-12 relative is within 1e-10 when terms fall fast")
{
    // Term m behaves like m^-(s+2); for s = 3 a 1e-12 cut leaves a tail below 1e-10.
    const kernel::CosineCombination p{4.0, {{-4.0, 5.0}, {2.0, 1.0}, {-1.0, 6.0}, {-1.0, 4.0}}};
    for (double theta : {0.0125, 0.05, 0.1}) {
        const double full = kernel::thermal_transform(3.0, theta, p);
        const double cut = kernel::thermal_transform_truncated(3.0, theta, p, 1e-12, 10000000);
        CAPTURE(theta);
        CHECK(rel_err(cut, full) < 1e-10);
    }
}

TEST_CASE("tail-corrected thermal series matches a long plain sum")
{
    const kernel::CosineCombination p{4.0, {{-4.0, 5.0}, {2.0, 1.0}, {-1.0, 6.0}, {-1.0, 4.0}}};
    for (double s : {1.0, 2.0, 3.0}) {
        for (double theta : {0.0125, 0.05, 0.1}) {
            const double full = kernel::thermal_transform(s, theta, p);
            const double cut = kernel::thermal_transform_truncated(s, theta, p, 1e-16, 100000000);
            CAPTURE(s);
            CAPTURE(theta);
            CHECK(rel_err(cut, full) < 1e-10);
        }
    }
}
