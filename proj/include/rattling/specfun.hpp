#ifndef RATTLING_SPECFUN_HPP
#define RATTLING_SPECFUN_HPP

#include <stdexcept>

namespace rattling::specfun {

// Configuration for the special-function layer.  quad_rel_tol is the
// relative tolerance used by integral-based cross checks; tail_cutoff
// is the argument beyond which h, f, g are clamped to exactly 0
// (harmless: all three are below 1e-43 at x = 20).
struct SpecFunConfig {
    double quad_rel_tol = 1e-10;
    double tail_cutoff = 40.0;

    void validate() const {
        if (!(quad_rel_tol > 0.0) || quad_rel_tol > 1e-6)
            throw std::domain_error("SpecFunConfig: quad_rel_tol must be in (0, 1e-6]");
        if (!(tail_cutoff >= 20.0))
            throw std::domain_error("SpecFunConfig: tail_cutoff must be >= 20");
    }
};

// h(x) = e^{-x^2/4} / (2 sqrt(pi)), x >= 0.  Strictly positive and
// strictly decreasing.
double h(double x, const SpecFunConfig& cfg = {});

// g(x) = f'(x) = -erfc(x/2)/2, x >= 0.  Increases from g(0) = -1/2
// toward 0.
double g(double x, const SpecFunConfig& cfg = {});

// f(x) = 2x * int_x^inf y^-2 h(y) dy, x >= 0, evaluated through the
// identity f = 2h + x*g.
double f(double x, const SpecFunConfig& cfg = {});

// Scaled profile integrands on x in [-1, 1], all built on the argument
// xi(a, x) = (1/sqrt(a)) * sqrt((1-x)/(1+x)).

// F(a,x) = sqrt(a) sqrt(1-x^2) f(xi).  Continuous on [-1,1] with
// F(a,-1) = F(a,1) = 0.
double F(double a, double x, const SpecFunConfig& cfg = {});

// G(a,x) = g(xi).  Continuous on [-1,1]: G(a,1) = g(0) = -1/2 and
// G(a,-1) = 0 (superexponential decay of g).
double G(double a, double x, const SpecFunConfig& cfg = {});

// H(a,x) = h(xi) / (sqrt(a) sqrt(1-x^2)) on the open interval only:
// the x = +1 endpoint is a non-removable inverse-square-root
// singularity, handled by substitution where this gets integrated.
double H_integrand(double a, double x, const SpecFunConfig& cfg = {});

} // namespace rattling::specfun

#endif
