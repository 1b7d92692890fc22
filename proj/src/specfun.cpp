#include "rattling/specfun.hpp"

#include <cmath>

namespace rattling::specfun {

namespace {

constexpr double kInvTwoSqrtPi = 0.28209479177387814; // 1/(2 sqrt(pi))

void require_nonneg(double x, const char* name) {
    if (!(x >= 0.0))
        throw std::domain_error(std::string(name) + ": argument must be >= 0");
}

void require_ax(double a, double x, double lo, double hi, const char* name) {
    if (!(a > 0.0))
        throw std::domain_error(std::string(name) + ": a must be > 0");
    if (!(x >= lo && x <= hi))
        throw std::domain_error(std::string(name) + ": x outside domain");
}

// xi(a, x); monotone decreasing in x, +inf at x = -1, 0 at x = +1.
double xi_arg(double a, double x) {
    return std::sqrt((1.0 - x) / (1.0 + x)) / std::sqrt(a);
}

} // namespace

double h(double x, const SpecFunConfig& cfg) {
    require_nonneg(x, "h");
    if (x >= cfg.tail_cutoff) return 0.0;
    return kInvTwoSqrtPi * std::exp(-0.25 * x * x);
}

double g(double x, const SpecFunConfig& cfg) {
    require_nonneg(x, "g");
    if (x >= cfg.tail_cutoff) return 0.0;
    return -0.5 * std::erfc(0.5 * x);
}

double f(double x, const SpecFunConfig& cfg) {
    require_nonneg(x, "f");
    if (x >= cfg.tail_cutoff) return 0.0;
    return 2.0 * h(x, cfg) + x * g(x, cfg);
}

double F(double a, double x, const SpecFunConfig& cfg) {
    require_ax(a, x, -1.0, 1.0, "F");
    if (x == -1.0 || x == 1.0) return 0.0;
    double s = std::sqrt((1.0 - x) * (1.0 + x));
    return std::sqrt(a) * s * f(xi_arg(a, x), cfg);
}

double G(double a, double x, const SpecFunConfig& cfg) {
    require_ax(a, x, -1.0, 1.0, "G");
    if (x == -1.0) return 0.0;
    if (x == 1.0) return -0.5;
    return g(xi_arg(a, x), cfg);
}

double H_integrand(double a, double x, const SpecFunConfig& cfg) {
    if (!(a > 0.0))
        throw std::domain_error("H_integrand: a must be > 0");
    if (!(x > -1.0 && x < 1.0))
        throw std::domain_error("H_integrand: x must be in (-1, 1)");
    double s = std::sqrt((1.0 - x) * (1.0 + x));
    return h(xi_arg(a, x), cfg) / (std::sqrt(a) * s);
}

} // namespace rattling::specfun
