#include "rattling/patterns.hpp"

#include <algorithm>
#include <cmath>

#include "rattling/errors.hpp"

namespace rattling::patterns {

using BigInt = BigPatternSet::BigInt;
using Rational = BigPatternSet::Rational;

PatternSet::PatternSet(std::vector<long long> positive_members, long long limit)
    : pos_(std::move(positive_members)), limit_(limit) {
    std::sort(pos_.begin(), pos_.end());
    if (!pos_.empty() && pos_.front() < 1)
        throw std::domain_error("PatternSet: members must be positive");
    if (std::adjacent_find(pos_.begin(), pos_.end()) != pos_.end())
        throw std::domain_error("PatternSet: duplicate member");
    if (!pos_.empty() && pos_.back() > limit_)
        throw std::domain_error("PatternSet: member beyond limit");
}

PatternSet PatternSet::from_log(const solver::EventLog& log) {
    std::vector<long long> pos;
    long long limit = 0;
    for (const auto& ev : log.events)
        if (ev.node > 0) {
            pos.push_back(ev.node);
            limit = std::max(limit, ev.node);
        }
    return PatternSet(std::move(pos), limit);
}

bool PatternSet::contains(long long n) const {
    if (n < 0) n = -n;
    if (n == 0) return true;
    if (n > limit_)
        throw std::domain_error("PatternSet: membership unresolved beyond limit");
    return std::binary_search(pos_.begin(), pos_.end(), n);
}

long long PatternSet::count_p(long long n) const {
    if (n < 1 || n > limit_ + 1)
        throw std::domain_error("PatternSet: count_p defined on [1, limit+1]");
    return std::lower_bound(pos_.begin(), pos_.end(), n) - pos_.begin();
}

double PatternSet::quasi_uniformity_metric(long long n) const {
    if (n <= 0 || !contains(n))
        throw std::domain_error("quasi_uniformity_metric: n must be a positive member");
    long long p = count_p(n);
    if (p < 1)
        throw std::domain_error("quasi_uniformity_metric: undefined for p(n) = 0");
    double sup = 0.0;
    double nd = static_cast<double>(n), pd = static_cast<double>(p);
    for (long long i = 1; i <= p; ++i) {
        double ki = static_cast<double>(pos_[i - 1]);
        sup = std::max(sup, std::abs(ki / nd - static_cast<double>(i) / pd));
    }
    return sup;
}

PatternSet gen_quasiperiodic(double alpha, double beta, long long n_max) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::domain_error("gen_quasiperiodic: alpha must be in (0, 1]");
    if (!(beta >= 0.0 && beta < 1.0))
        throw std::domain_error("gen_quasiperiodic: beta must be in [0, 1)");
    if (n_max < 1) throw std::domain_error("gen_quasiperiodic: n_max must be >= 1");
    std::vector<long long> pos;
    double prev = std::floor(beta);
    for (long long n = 1; n <= n_max; ++n) {
        double cur = std::floor(static_cast<double>(n) * alpha + beta);
        if (cur > prev) pos.push_back(n);
        prev = cur;
    }
    return PatternSet(std::move(pos), n_max);
}

bool check_periodic_window(const PatternSet& set, long long p1, long long p2,
                           long long j_min, long long j_max) {
    if (p1 < 1 || p2 < 0)
        throw std::domain_error("check_periodic_window: need p1 >= 1, p2 >= 0");
    if (j_min < 1 || j_max < j_min)
        throw std::domain_error("check_periodic_window: bad window range");
    long long w = p1 + p2;
    for (long long j = j_min; j <= j_max; ++j) {
        long long cnt = 0;
        for (long long v = j; v < j + w; ++v)
            if (set.contains(v)) ++cnt;
        if (cnt != p1) return false;
    }
    return true;
}

namespace {

// floor(r * q) for r >= 0, q > 0, both exact
BigInt floor_mul(const BigInt& r, const Rational& q) {
    return (r * numerator(q)) / denominator(q);
}

BigInt ceil_div(const BigInt& a, const BigInt& b) { return (a + b - 1) / b; }

// segment index j with M[j-1] < n <= M[j]
int segment_of(const std::vector<BigInt>& M, const BigInt& n) {
    auto it = std::lower_bound(M.begin() + 1, M.end(), n);
    if (it == M.end()) throw std::domain_error("BigPatternSet: n beyond construction");
    return static_cast<int>(it - M.begin());
}

} // namespace

bool BigPatternSet::contains(const BigInt& n_in) const {
    BigInt n = n_in < 0 ? BigInt(-n_in) : n_in;
    if (n == 0) return true;
    int j = segment_of(M, n);
    BigInt r = n - M[j - 1];
    return floor_mul(r, p[j]) > floor_mul(r - 1, p[j]);
}

BigInt BigPatternSet::node_by_rank(const BigInt& i) const {
    if (i < 1 || i > m[levels])
        throw std::domain_error("node_by_rank: rank out of range");
    auto it = std::lower_bound(m.begin() + 1, m.end(), i);
    int s1 = static_cast<int>(it - m.begin()); // segment s+1 holding rank i
    BigInt rho = i - m[s1 - 1];
    return M[s1 - 1] + ceil_div(rho * denominator(p[s1]), numerator(p[s1]));
}

BigInt BigPatternSet::count_prefix(const BigInt& n) const {
    if (n < 0) throw std::domain_error("count_prefix: n must be >= 0");
    if (n == 0) return 0;
    int j = segment_of(M, n);
    BigInt r = n - M[j - 1];
    return m[j - 1] + floor_mul(r, p[j]);
}

double BigPatternSet::metric_sampled(int j, int grid) const {
    if (j < 1 || j > levels)
        throw std::domain_error("metric_sampled: level out of range");
    const BigInt n = M[j];
    const BigInt pn = m[j] - 1; // open count #(K cap [1, n-1])
    if (pn < 1) throw std::domain_error("metric_sampled: p(n) = 0");

    std::vector<BigInt> ranks;
    auto push = [&](BigInt i) {
        if (i >= 1 && i <= pn) ranks.push_back(std::move(i));
    };
    for (int s = 1; s <= j; ++s)
        for (int d = -2; d <= 2; ++d) push(m[s] + d);
    for (int q = 1; q <= grid; ++q) push((pn * q) / grid);

    double sup = 0.0;
    for (const auto& i : ranks) {
        BigInt ki = node_by_rank(i);
        // |k_i/n - i/pn| = |k_i*pn - i*n| / (n*pn), kept exact until the cast
        Rational diff(abs(ki * pn - i * n), n * pn);
        sup = std::max(sup, diff.convert_to<double>());
    }
    return sup;
}

BigPatternSet build_counterexample(int levels) {
    if (levels < 2)
        throw std::domain_error("build_counterexample: levels must be >= 2");
    BigPatternSet set;
    set.levels = levels;
    set.p.resize(levels + 1);
    set.L.resize(levels + 1);
    set.l.resize(levels + 1);
    set.M.resize(levels + 1);
    set.m.resize(levels + 1);
    set.M[0] = 0;
    set.m[0] = 0;

    const Rational lo(1, 3), hi(2, 3);
    Rational cur = lo;
    int dir = +1;
    set.p[1] = cur;
    for (int j = 1; j < levels; ++j) {
        Rational step(1, j + 3);
        Rational nxt = cur + dir * step;
        if (nxt > hi || nxt < lo) {
            dir = -dir;
            nxt = cur + dir * step;
        }
        cur = nxt;
        set.p[j + 1] = cur;
    }

    for (int j = 1; j <= levels; ++j) {
        BigInt den = denominator(set.p[j]);
        BigInt num = numerator(set.p[j]);
        BigInt k = 1;
        if (j > 1) {
            BigInt need = set.M[j - 1] * j; // growth: p_j L_j >= M_{j-1} * j
            k = ceil_div(need, num);
            if (k < 1) k = 1;
        }
        set.L[j] = k * den;
        set.l[j] = k * num; // = L_j p_j, integral by construction
        set.M[j] = set.M[j - 1] + set.L[j];
        set.m[j] = set.m[j - 1] + set.l[j];
    }

    for (int j = 1; j < levels; ++j)
        if (set.p[j + 1] * Rational(set.L[j + 1]) < Rational(set.M[j] * (j + 1)))
            throw invariant_error("build_counterexample: growth inequality failed");
    return set;
}

} // namespace rattling::patterns
