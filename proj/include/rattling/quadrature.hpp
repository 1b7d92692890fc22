#ifndef RATTLING_QUADRATURE_HPP
#define RATTLING_QUADRATURE_HPP

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstddef>

#include "rattling/errors.hpp"

namespace rattling::quad {

// Adaptive Gauss-Kronrod 7-15 on a finite interval, with the error
// estimate handed back to the caller.  boost accumulates the per-leaf
// estimates in the leaves' rescaled coordinates (no interval-width
// factor), so after deep refinement the report can overstate the true
// error by orders of magnitude.  Callers that hold an independent
// accuracy check use this form and apply their own acceptance rule.
template <class F>
double adaptive_gk_unchecked(F&& fn, double a, double b, double* err_out,
                             double tol = 1e-12, int max_depth = 30) {
    double err = 0.0;
    double val = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        fn, a, b, max_depth, tol, &err);
    if (err_out)
        *err_out = err;
    return val;
}

// Self-checking form.  The embedded rule's error estimate drives
// recursive bisection inside boost; the requested tolerance is treated
// as relative with an absolute floor, and a reported estimate far above
// it raises accuracy_error.
template <class F>
double adaptive_gk(F&& fn, double a, double b, double tol = 1e-12,
                   int max_depth = 30) {
    double err = 0.0;
    double val = adaptive_gk_unchecked(fn, a, b, &err, tol, max_depth);
    double scale = std::max(std::abs(val), 1.0);
    if (!(err <= 100.0 * tol * scale))
        throw accuracy_error("adaptive_gk: error estimate " + std::to_string(err) +
                             " above tolerance");
    return val;
}

// Trapezoid rule with panel doubling on [a, b].  Each doubling reuses
// previous nodes, so the total cost is ~2x the final panel count.
// Converges spectrally for smooth periodic integrands (the use case:
// theta-integrals of even 2pi-periodic analytic functions over a half
// period).  Convergence test: |T_2n - T_n| <= rel_tol*|T_2n| + abs_floor.
// The absolute floor matters when the oscillatory integrand cancels to
// a value below the roundoff of the accumulated sum; without it the
// relative test can never be met.  Throws accuracy_error if doubling up
// to max_panels does not converge.
template <class F>
double trapezoid_doubling(F&& fn, double a, double b, double rel_tol,
                          double abs_floor, std::size_t init_panels,
                          std::size_t max_panels) {
    std::size_t n = init_panels;
    double hstep = (b - a) / static_cast<double>(n);
    double sum = 0.5 * (fn(a) + fn(b));
    for (std::size_t i = 1; i < n; ++i)
        sum += fn(a + hstep * static_cast<double>(i));
    double prev = sum * hstep;
    while (n < max_panels) {
        // add midpoints of the current panels
        double mid = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            mid += fn(a + hstep * (static_cast<double>(i) + 0.5));
        n *= 2;
        hstep *= 0.5;
        sum += mid;
        double cur = sum * hstep;
        if (std::abs(cur - prev) <= rel_tol * std::abs(cur) + abs_floor)
            return cur;
        prev = cur;
    }
    throw accuracy_error("trapezoid_doubling: no convergence within max panels");
}

} // namespace rattling::quad

#endif
