#include "commonbath/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace commonbath::quadrature {

Result integrate_half_line(const std::function<double(double)>& f, const HalfLineOptions& opts)
{
    using boost::math::quadrature::gauss_kronrod;

    const double period = 2.0 * std::numbers::pi / std::max(opts.max_freq, 1.0);
    const double width = std::min(1.0, period);

    Result total;
    auto panel = [&](double a, double b) {
        double err = 0.0;
        total.value += gauss_kronrod<double, 31>::integrate(f, a, b, opts.max_depth, opts.panel_tol, &err);
        total.error += err;
    };

    double lo = 0.0;
    if (opts.graded_origin) {
        constexpr int levels = 40;
        const double first = std::min(width, opts.upper);
        double a = 0.0;
        for (int k = levels; k >= 0; --k) {
            const double b = std::ldexp(first, -k);
            panel(a, b);
            a = b;
        }
        lo = first;
    }
    while (lo < opts.upper) {
        // Wider panels past w = 40 where the integrand is exponentially small.
        const double hi = std::min(opts.upper, lo + (lo > 40.0 ? 4.0 * width : width));
        panel(lo, hi);
        lo = hi;
    }
    return total;
}

} // namespace commonbath::quadrature
