#include "rattling/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "rattling/errors.hpp"
#include "rattling/patterns.hpp"
#include "rattling/quadrature.hpp"
#include "rattling/specfun.hpp"

namespace rattling::analysis {

namespace {

constexpr double kTail = 40.0;       // Gaussian tail cut: h(40) ~ 1e-175
constexpr double kCrossTol = 1e-9;   // dual-form agreement requirement

void require_pos_a(double a, const char* who) {
    if (!(a > 0.0))
        throw std::domain_error(std::string(who) + ": a must be > 0");
}

double check_cross(double direct, double alt, const char* who) {
    if (!(std::abs(direct - alt) <= kCrossTol))
        throw accuracy_error(std::string(who) +
                             ": dual quadrature forms disagree by " +
                             std::to_string(std::abs(direct - alt)));
    return direct;
}

} // namespace

const double kPi = std::acos(-1.0);

namespace {

// The theta-integrands keep all their structure in boundary layers of
// width ~sqrt(a) at 0 and ~1/sqrt(a) at pi (xi = tan(th/2)/sqrt(a)
// sweeps its whole range there), with layer values that can exceed the
// total by orders of magnitude at extreme a.  Refining the layers
// drives boost's summed error report far above the true error (the
// per-leaf estimates are accumulated without their width factor), so
// this route does not gate on that report; the y-form comparison in
// check_cross is the accuracy authority.  The relaxed tolerance keeps
// the forced layer refinement shallow (at 1e-12 a single call can take
// tens of seconds near a ~ 1e-4) while dual-form agreement stays near
// 1e-14 over a in [1e-6, 1e6].
template <class F>
double theta_integral(F&& fn) {
    return quad::adaptive_gk_unchecked(fn, 0.0, kPi, nullptr, 1e-10);
}

} // namespace

double integral_I_F(double a) {
    require_pos_a(a, "integral_I_F");
    // x = cos th turns the endpoint square roots into an analytic
    // integrand (xi becomes tan(th/2)); the integral itself is
    // unchanged, so the dual-form check below stays meaningful.
    double direct = theta_integral(
        [a](double th) { return std::sin(th) * specfun::F(a, std::cos(th)); });
    double alt = quad::adaptive_gk(
                     [a](double y) {
                         return (2.0 * a + 1.0) / (1.0 + a * y * y) *
                                specfun::h(y);
                     },
                     0.0, kTail) -
                 0.5;
    return check_cross(direct, alt, "integral_I_F");
}

double integral_I_G(double a) {
    require_pos_a(a, "integral_I_G");
    double direct = theta_integral(
        [a](double th) { return std::sin(th) * specfun::G(a, std::cos(th)); });
    double alt = quad::adaptive_gk(
                     [a](double y) {
                         double ay2 = a * y * y;
                         return (1.0 - ay2) / (1.0 + ay2) * specfun::h(y);
                     },
                     0.0, kTail) -
                 0.5;
    return check_cross(direct, alt, "integral_I_G");
}

double integral_I_H(double a) {
    require_pos_a(a, "integral_I_H");
    return quad::adaptive_gk(
        [a](double y) { return 2.0 * specfun::h(y) / (1.0 + a * y * y); },
        0.0, kTail);
}

double identity_main3(double a) {
    return (2.0 * a + 1.0) * integral_I_G(a) - 2.0 * integral_I_F(a) + 2.0 * a;
}

namespace {

// Bracketing bisection for fn(a) = 0 on a > 0.  First tries to expand
// around `seed`; falls back to a geometric scan.  fn need not be
// monotone: the scan picks the bracket containing the seed-side root.
template <class Fn>
double bisect_root(Fn&& fn, double lo, double hi) {
    double flo = fn(lo);
    if (flo == 0.0) return lo;
    while (hi - lo > 1e-13 * std::max(1.0, hi)) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double fm = fn(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

template <class Fn>
double find_root(Fn&& fn, double seed) {
    double lo = seed, hi = seed;
    double f0 = fn(seed);
    if (f0 == 0.0) return seed;
    // expand geometrically away from the seed until the sign flips
    for (int it = 0; it < 200; ++it) {
        if (f0 < 0.0) {
            double nhi = hi * 2.0;
            if (fn(nhi) >= 0.0) return bisect_root(fn, hi, nhi);
            hi = nhi;
        } else {
            double nlo = lo * 0.5;
            if (fn(nlo) <= 0.0) return bisect_root(fn, nlo, lo);
            lo = nlo;
        }
        if (hi > 1e15 || lo < 1e-15) break;
    }
    throw accuracy_error("solve_a_star: failed to bracket a root");
}

} // namespace

double AsymptoticConstants::max_disagreement() const {
    double lo = std::min({root_value_eq, root_gradient_eq, root_rate_eq});
    double hi = std::max({root_value_eq, root_gradient_eq, root_rate_eq});
    return hi - lo;
}

AsymptoticConstants solve_a_star(double lambda) {
    if (!(lambda > 2.0))
        throw std::domain_error(
            "solve_a_star: lambda must exceed 2 (a* diverges at 2)");

    // All three equations increase through zero in a, so the common
    // expand-then-bisect driver applies with sign conventions below.
    auto grad_eq = [lambda](double a) {
        return -2.0 - lambda * integral_I_G(a); // increasing in a
    };
    auto value_eq = [lambda](double a) {
        return -1.0 + (lambda - 2.0) * a - lambda * integral_I_F(a);
    };
    auto rate_eq = [lambda](double a) {
        return (lambda - 2.0) - lambda * integral_I_H(a);
    };

    AsymptoticConstants out;
    out.lambda = lambda;
    out.root_gradient_eq = find_root(grad_eq, 0.25);
    out.root_value_eq = find_root(value_eq, out.root_gradient_eq);
    out.root_rate_eq = find_root(rate_eq, out.root_gradient_eq);
    out.a_star = out.root_gradient_eq;

    out.res_gradient_eq = -2.0 - lambda * integral_I_G(out.a_star);
    out.res_value_eq =
        -1.0 + (lambda - 2.0) * out.a_star - lambda * integral_I_F(out.a_star);
    out.res_rate_eq = (lambda - 2.0) - lambda * integral_I_H(out.a_star);

    if (!(out.max_disagreement() <= 1e-8 * std::max(1.0, out.a_star)))
        throw accuracy_error("solve_a_star: equation roots disagree by " +
                             std::to_string(out.max_disagreement()));
    return out;
}

RattlingReport fit_rattling(const solver::EventLog& log,
                            const AsymptoticConstants& consts) {
    if (log.events.size() < 20)
        throw std::domain_error("fit_rattling: need at least 20 events");
    const auto& p = log.params;

    // least-squares slope of t against n^2 over the newest half
    std::size_t lo = log.events.size() / 2;
    double stn = 0.0, sn4 = 0.0;
    for (std::size_t i = lo; i < log.events.size(); ++i) {
        double n2 = static_cast<double>(log.events[i].node) *
                    static_cast<double>(log.events[i].node);
        stn += log.events[i].time * n2;
        sn4 += n2 * n2;
    }

    RattlingReport rep{};
    rep.measured_a = stn / sn4;
    rep.events_used = static_cast<long long>(log.events.size() - lo);

    auto pattern = patterns::PatternSet::from_log(log);
    rep.n_resolved = pattern.limit();
    // density over the closed range [1, n_resolved] (count_p itself
    // counts the half-open [1, n)), so an all-switch run measures 1
    rep.measured_p_star =
        static_cast<double>(pattern.count_p(rep.n_resolved + 1)) /
        static_cast<double>(rep.n_resolved);

    rep.predicted_a = consts.a_star;
    rep.predicted_p_star = p.h1 / (p.h1 + p.h2);

    double hp = (p.h1 + p.h2) * rep.measured_p_star;
    rep.residual_value_balance = -p.c + (p.h1 - 2.0 * p.c) * rep.measured_a -
                                 hp * integral_I_F(rep.measured_a);
    rep.residual_gradient_balance = -2.0 * p.c - hp * integral_I_G(rep.measured_a);

    rep.omega_over_k_max = 0.0;
    rep.min_gap_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < log.events.size(); ++i) {
        double k = static_cast<double>(log.events[i].node);
        double omega = log.events[i].time - rep.measured_a * k * k;
        rep.omega_over_k_max =
            std::max(rep.omega_over_k_max, std::abs(omega) / k);
        rep.min_gap_ratio = std::min(
            rep.min_gap_ratio,
            (log.events[i].time - log.events[i - 1].time) / k);
    }
    return rep;
}

} // namespace rattling::analysis
