#include "rattling/green.hpp"

#include <cmath>

#include "rattling/quadrature.hpp"

namespace rattling::green {

namespace {

const double kPi = 3.14159265358979323846;

void require_time(double t, const char* who) {
    if (!std::isfinite(t))
        throw std::domain_error(std::string(who) + ": time must be finite");
}

} // namespace

GreenEvaluator::GreenEvaluator(GreenConfig cfg) : cfg_(cfg) { cfg_.validate(); }

// Integrand of Gamma over [0, pi] (even in theta, so half range and
// cos(n theta) weight).  1 - cos(theta) is computed as 2 sin^2(theta/2)
// and the outer 1 - e^{-2 t eps} via expm1; both avoid cancellation for
// small theta.  The removable singularity at theta = 0 takes its limit
// value t.
double GreenEvaluator::eval_gamma(long long nabs, double t) const {
    const double n = static_cast<double>(nabs);
    auto integrand = [n, t](double th) {
        double s = std::sin(0.5 * th);
        double eps = 2.0 * s * s;
        if (eps == 0.0) return t;
        return -std::expm1(-2.0 * t * eps) / (2.0 * eps) * std::cos(n * th);
    };
    double abs_floor = 1e-15 * (1.0 + std::sqrt(t));
    double raw = quad::trapezoid_doubling(integrand, 0.0, kPi, cfg_.rel_tol,
                                          abs_floor, cfg_.init_panels,
                                          cfg_.max_panels);
    double val = raw / kPi;
    return val < 0.0 ? 0.0 : val;
}

double GreenEvaluator::eval_gamma_dot(long long nabs, double t) const {
    const double n = static_cast<double>(nabs);
    auto integrand = [n, t](double th) {
        double s = std::sin(0.5 * th);
        double eps = 2.0 * s * s;
        return std::exp(-2.0 * t * eps) * std::cos(n * th);
    };
    double raw = quad::trapezoid_doubling(integrand, 0.0, kPi, cfg_.rel_tol,
                                          1e-16, cfg_.init_panels,
                                          cfg_.max_panels);
    return raw / kPi;
}

double GreenEvaluator::cached(Cache& cache, long long nabs, double t,
                              double (GreenEvaluator::*eval)(long long, double)
                                  const) {
    Key key{nabs, std::llround(t / cfg_.cache_quantum)};
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    double val = (this->*eval)(nabs, t);
    if (cache.size() < cfg_.cache_max_entries) cache.emplace(key, val);
    return val;
}

double GreenEvaluator::gamma(long long n, double t) {
    require_time(t, "gamma");
    if (t <= 0.0) return 0.0;
    long long nabs = n < 0 ? -n : n;
    return cached(cache_gamma_, nabs, t, &GreenEvaluator::eval_gamma);
}

double GreenEvaluator::gamma_dot(long long n, double t) {
    require_time(t, "gamma_dot");
    if (!(t > 0.0)) throw std::domain_error("gamma_dot: t must be > 0");
    long long nabs = n < 0 ? -n : n;
    return cached(cache_dot_, nabs, t, &GreenEvaluator::eval_gamma_dot);
}

double GreenEvaluator::grad_gamma(long long n, double t) {
    return gamma(n + 1, t) - gamma(n, t);
}

double GreenEvaluator::grad_gamma_dot(long long n, double t) {
    return gamma_dot(n + 1, t) - gamma_dot(n, t);
}

} // namespace rattling::green
