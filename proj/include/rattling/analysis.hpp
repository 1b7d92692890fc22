#ifndef RATTLING_ANALYSIS_HPP
#define RATTLING_ANALYSIS_HPP

#include "rattling/solver.hpp"

namespace rattling::analysis {

// I_F(a) = int_{-1}^{1} F(a,x) dx, computed both directly and through
// the equivalent semi-infinite form
//   int_0^inf (2a+1)/(1+a y^2) h(y) dy - 1/2;
// the two must agree to 1e-9 (checked on every call) and the direct
// value is returned.  Positive for all a > 0.
double integral_I_F(double a);

// Same scheme for I_G(a) = int_{-1}^{1} G(a,x) dx with the alternative
// form int_0^inf (1-a y^2)/(1+a y^2) h(y) dy - 1/2.  Strictly
// decreasing from 0 (a -> 0) to -1 (a -> inf).
double integral_I_G(double a);

// I_H(a) = int_{-1}^{1} H(a,x) dx.  The x = +1 endpoint carries an
// integrable inverse-square-root singularity; the substitution
// y = (1/sqrt(a)) sqrt((1-x)/(1+x)) removes it exactly, giving
// int_0^inf 2 h(y)/(1+a y^2) dy, which is what gets evaluated.
double integral_I_H(double a);

// Residual of the identity (2a+1) I_G(a) - 2 I_F(a) + 2a = 0.
double identity_main3(double a);

// The propagation constant a*(lambda), lambda = h1/c > 2, under the
// normalization c = 1, h1 = lambda.  Three equivalent scalar equations
// pin the same root:
//   value eq.:     -1 + (lambda-2) a - lambda I_F(a) = 0
//   gradient eq.:  -2 - lambda I_G(a)                = 0
//   rate eq.:      (lambda-2) - lambda I_H(a)        = 0
// a_star is the gradient-equation root (monotone I_G makes its bracket
// rigorous); all three roots and the residuals of each equation at
// a_star are stored.  Roots must agree to 1e-8 relative to max(1, a*).
struct AsymptoticConstants {
    double lambda;
    double a_star;
    double root_value_eq;
    double root_gradient_eq;
    double root_rate_eq;
    double res_value_eq;
    double res_gradient_eq;
    double res_rate_eq;

    double max_disagreement() const;
};

AsymptoticConstants solve_a_star(double lambda);

// Reconciliation of a simulation with the asymptotic theory.
struct RattlingReport {
    double measured_a;        // least-squares slope of t_n against n^2
    double measured_p_star;   // switching density on [1, n_resolved]
    double predicted_a;       // a*(h1/c)
    double predicted_p_star;  // h1/(h1+h2)
    // residual of the value equation at the measured constants:
    // -c + (h1-2c) a - (h1+h2) p* I_F(a)
    double residual_value_balance;
    // residual of the gradient equation: -2c - (h1+h2) p* I_G(a)
    double residual_gradient_balance;
    double omega_over_k_max;  // max_k |t_k - a k^2| / k  (linear remainder)
    double min_gap_ratio;     // min_i (t_{k_i} - t_{k_{i-1}}) / k_i
    long long events_used;    // size of the fit window
    long long n_resolved;     // largest node with certified classification
};

// Fit over the upper half of the events (the transient dominates small
// nodes); requires at least 20 events.
RattlingReport fit_rattling(const solver::EventLog& log,
                            const AsymptoticConstants& consts);

} // namespace rattling::analysis

#endif
