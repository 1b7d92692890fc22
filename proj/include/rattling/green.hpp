#ifndef RATTLING_GREEN_HPP
#define RATTLING_GREEN_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace rattling::green {

struct GreenConfig {
    double rel_tol = 1e-12;          // quadrature relative tolerance
    std::size_t init_panels = 64;    // starting trapezoid panel count
    std::size_t max_panels = 1u << 20;
    double cache_quantum = 1e-12;    // time quantization step for cache keys
    std::size_t cache_max_entries = 4000000; // inserts stop beyond this

    void validate() const {
        if (!(rel_tol > 0.0) || !(cache_quantum > 0.0))
            throw std::domain_error("GreenConfig: tolerances must be > 0");
        if (init_panels < 2 || max_panels < init_panels)
            throw std::domain_error("GreenConfig: invalid panel bounds");
    }
};

// Evaluator for the lattice Green function
//
//   Gamma_n(t) = (1/2pi) int_{-pi}^{pi} [1 - e^{-2t(1-cos th)}] /
//                [2(1-cos th)] e^{i n th} d th,   Gamma_n(t) = 0 for t <= 0,
//
// which solves dGamma_0/dt = Delta Gamma_0 + 1, dGamma_n/dt = Delta Gamma_n
// with zero initial data, together with its time derivative (the discrete
// heat kernel) and first spatial differences.  Symmetry Gamma_n = Gamma_{-n}
// is exact: only |n| is ever evaluated.  Values are memoized keyed on
// (|n|, round(t / cache_quantum)); the keying error is far below the
// quadrature tolerance for every reachable t.
//
// Not safe for concurrent use (the cache is mutated on reads); use one
// evaluator per thread.
class GreenEvaluator {
public:
    explicit GreenEvaluator(GreenConfig cfg = {});

    // Gamma_n(t); exactly 0 for t <= 0. Nonnegative (tiny negative
    // quadrature noise is clamped).
    double gamma(long long n, double t);

    // dGamma_n/dt (t) = (1/2pi) int e^{-2t(1-cos th)} cos(n th) d th
    //                 = e^{-2t} I_n(2t);  requires t > 0.
    double gamma_dot(long long n, double t);

    // grad w_n := w_{n+1} - w_n
    double grad_gamma(long long n, double t);
    double grad_gamma_dot(long long n, double t);

    const GreenConfig& config() const noexcept { return cfg_; }
    std::size_t cache_size() const noexcept {
        return cache_gamma_.size() + cache_dot_.size();
    }

private:
    struct Key {
        long long n;
        long long tq;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            std::uint64_t a = static_cast<std::uint64_t>(k.n) * 0x9e3779b97f4a7c15ull;
            std::uint64_t b = static_cast<std::uint64_t>(k.tq);
            a ^= b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2);
            return static_cast<std::size_t>(a);
        }
    };
    using Cache = std::unordered_map<Key, double, KeyHash>;

    double eval_gamma(long long nabs, double t) const;
    double eval_gamma_dot(long long nabs, double t) const;
    double cached(Cache& cache, long long nabs, double t,
                  double (GreenEvaluator::*eval)(long long, double) const);

    GreenConfig cfg_;
    Cache cache_gamma_;
    Cache cache_dot_;
};

} // namespace rattling::green

#endif
