#pragma once

#include <functional>

namespace commonbath::quadrature {

struct Result {
    double value{0.0};
    double error{0.0};
};

struct HalfLineOptions {
    double max_freq{0.0};   // largest oscillation frequency in the integrand
    double upper{100.0};    // integrand is negligible beyond this point
    double panel_tol{1e-12};
    unsigned max_depth{8};
    // Split the first panel geometrically towards w = 0; needed when the
    // integrand behaves like a fractional power of w there.
    bool graded_origin{false};
};

// int_0^upper f(w) dw split into panels no wider than one oscillation
// period, each integrated by adaptive 31-point Gauss-Kronrod.
Result integrate_half_line(const std::function<double(double)>& f, const HalfLineOptions& opts);

} // namespace commonbath::quadrature
