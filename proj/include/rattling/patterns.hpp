#ifndef RATTLING_PATTERNS_HPP
#define RATTLING_PATTERNS_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

#include "rattling/solver.hpp"

namespace rattling::patterns {

// Symmetric set of switching nodes {0, +-k_1, +-k_2, ...} with
// membership resolved only up to a stated limit; queries beyond it
// throw instead of silently misclassifying nodes whose fate the
// source (e.g. a finite simulation) cannot certify.
class PatternSet {
public:
    PatternSet(std::vector<long long> positive_members, long long limit);

    // Nodes of a finite run: every logged node is a member, and a node
    // is certified non-switching only below the largest switched node,
    // so the limit is max_node().
    static PatternSet from_log(const solver::EventLog& log);

    bool contains(long long n) const;           // sign-blind; |n| <= limit
    const std::vector<long long>& positives() const noexcept { return pos_; }
    long long limit() const noexcept { return limit_; }

    // p(n) = #(members of [1, n-1]); q(n) = n - p(n).  Requires
    // 1 <= n <= limit+1.
    long long count_p(long long n) const;
    long long count_q(long long n) const { return n - count_p(n); }

    // sup_{i=-p(n)..p(n)} |k_i/n - i/p(n)| with k_{-i} = -k_i, k_0 = 0;
    // the positive half carries the sup.  Requires n to be a positive
    // member with p(n) >= 1.
    double quasi_uniformity_metric(long long n) const;

private:
    std::vector<long long> pos_; // strictly increasing, all >= 1
    long long limit_;
};

// Membership of n != 0 iff floor(|n| alpha + beta) > floor((|n|-1) alpha + beta);
// 0 always a member.  alpha in (0, 1], beta in [0, 1).
PatternSet gen_quasiperiodic(double alpha, double beta, long long n_max);

// True iff every window [j, j + p1 + p2 - 1], j in [j_min, j_max],
// contains exactly p1 members.
bool check_periodic_window(const PatternSet& set, long long p1, long long p2,
                           long long j_min, long long j_max);

// Level-structured pattern with exact arithmetic: segment j of length
// L_j carries the rational frequency p_j; L_j p_j is an integer and
// the lengths grow fast enough (p_{j+1} L_{j+1} >= (L_1+...+L_j)(j+1))
// that the density sup_j p_j and inf_j p_j both survive to the limit,
// while the quasi-uniformity metric still decays.  M_j, m_j are the
// prefix sums of lengths and of member counts.
struct BigPatternSet {
    using BigInt = boost::multiprecision::cpp_int;
    using Rational = boost::multiprecision::cpp_rational;

    int levels = 0;
    std::vector<Rational> p; // 1-based; p[0] unused
    std::vector<BigInt> L;   // segment lengths, 1-based
    std::vector<BigInt> l;   // members per segment, l_j = L_j p_j
    std::vector<BigInt> M;   // M[j] = L_1 + ... + L_j, M[0] = 0
    std::vector<BigInt> m;   // m[j] = l_1 + ... + l_j, m[0] = 0

    bool contains(const BigInt& n) const;          // |n| <= M[levels]
    BigInt node_by_rank(const BigInt& i) const;    // i-th positive member
    BigInt count_prefix(const BigInt& n) const;    // #(K cap (0, n]), closed
    // quasi-uniformity metric at n = M_j, sampled at segment boundaries
    // plus a uniform rank grid (extremes sit near segment boundaries)
    double metric_sampled(int j, int grid = 400) const;
};

// The slowly-oscillating-frequency construction: p_1 = 1/3 and
// p_{j+1} = p_j +- 1/(j+3), the sign flipping whenever a step would
// leave [1/3, 2/3]; L_1 = den(p_1) and each later L_{j+1} is the
// smallest multiple of den(p_{j+1}) satisfying the growth inequality.
// Frequencies oscillate ever more slowly (p_j/p_{j+1} -> 1) yet visit
// both halves of the band forever.
BigPatternSet build_counterexample(int levels);

} // namespace rattling::patterns

#endif
