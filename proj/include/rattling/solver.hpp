#ifndef RATTLING_SOLVER_HPP
#define RATTLING_SOLVER_HPP

#include <limits>
#include <string>
#include <vector>

#include "rattling/green.hpp"
#include "rattling/relay.hpp"

namespace rattling::solver {

using relay::ModelParams;

// One switching event.  node >= 0 stands for the symmetric pair
// {node, -node} (both switch at the same moment); node 0 is its own
// pair and carries time 0.
struct SwitchEvent {
    long long node;
    double time;
};

struct SolverConfig {
    double time_tol = 1e-9;       // absolute tolerance on switching times
    double value_tol = 1e-7;      // |u| tolerance at accepted crossings
    double horizon = std::numeric_limits<double>::infinity(); // end time
    long long target_events = 0;  // stop after this many events (0 = by horizon)
    long long max_candidates = 200000; // safety bound on candidate nodes
    double simultaneity_window = 1e-8; // roots this close to the minimum batch together

    void validate() const;
};

// Ordered switching record of one run plus everything needed to
// reproduce it.  Invariants (checked by validate): events sorted by
// time, nodes distinct, node 0 present at time 0, and every event
// respects the a-priori bound time >= c*node^2/(h1-2c).
struct EventLog {
    ModelParams params;
    double horizon = 0.0;          // final simulated time
    std::vector<SwitchEvent> events;
    std::string method;            // "event_driven" or "time_stepper"
    SolverConfig config;           // tolerances the run used
    double epsilon = 1.0;          // 1 in normalized units; see rescale_events

    explicit EventLog(ModelParams p) : params(p) {}

    void validate() const;        // throws invariant_error
    long long max_node() const;
    // events with time <= t; finite by construction
    long long count_switched(double t) const;
};

// Solution value by the superposition formula
//   u_n(t) = -c n^2 + (h1-2c) t
//            - (h1+h2) * sum_{k switched, t_k < t} Gamma_{n-k}(t - t_k),
// where the sum runs over both signs of every logged node.  Terms with
// |n -+ k| far outside the diffusion range of t - t_k are skipped; the
// neglected mass is below 1e-12 (superexponential profile decay).
// Events with t_k >= t contribute nothing (Gamma vanishes at
// nonpositive arguments), so a full log evaluates history correctly.
double u_value(long long n, double t, const EventLog& log,
               green::GreenEvaluator& g);

// Time derivative by the differentiated formula:
//   du_n/dt = (h1-2c) - (h1+h2) * sum Gamma'_{n-k}(t - t_k).
// t must not coincide with an event time (the derivative jumps there);
// terms with t_k >= t are treated as 0 (left limit).
double u_dot_value(long long n, double t, const EventLog& log,
                   green::GreenEvaluator& g);

// Event-driven simulation: repeatedly locate the earliest zero of
// u_value over all unswitched candidate nodes and append it (together
// with any candidate whose root falls within simultaneity_window) to
// the log.  Candidate n is not examined before the a-priori bound
// c n^2/(h1-2c); the forward march never steps past
// t + (-u(t))/(h1+h2), so the first crossing cannot be skipped.
EventLog run_event_driven(const ModelParams& params, const SolverConfig& cfg,
                          green::GreenEvaluator& g);

// Truncated-lattice cross-validation oracle: integrates the 2N+1
// coupled ODEs du_n/dt = Delta u_n + relay output with an embedded
// adaptive Runge-Kutta pair, exploiting u_n = u_{-n} (only n in [0, N]
// is integrated, with the reflected stencil Delta u_0 = 2(u_1 - u_0)).
// Boundary closure: the virtual node N+1 follows the switching-free
// far field -c (N+1)^2 + (h1-2c) t.  Preconditions: N large enough
// that c N^2/(h1-2c) exceeds the horizon (boundary provably never
// switches) and comfortably outside the diffusion range of the
// switched region (closure error negligible); suggest_halfwidth picks
// such an N.  Crossings are located by bisecting on re-integration
// from the last accepted step.
EventLog run_time_stepper(const ModelParams& params, const SolverConfig& cfg,
                          long long lattice_halfwidth);

long long suggest_halfwidth(const ModelParams& params, double horizon);

// Worst violations of the model's a-priori bounds over a run:
//   u_n(t) <= 0
//   du_n/dt in [-(h1+h2), h1-2c]
//   Delta u_n in [-(2h1+h2), h1+h2-2c]
//   grad u_n(t_n) in [-(2h1+h2), 0] and grad u_{n-1}(t_n) in [0, 2h1+h2]
// evaluated on a grid of event times, midpoints, and a node range
// covering the switched region.  All violations should be <= value_tol.
struct BoundsReport {
    double u_sign = 0.0;        // max positive excursion of u
    double u_dot = 0.0;         // max distance outside the derivative band
    double delta_u = 0.0;       // same for the second difference
    double grad_at_switch = 0.0;     // grad u_n(t_n) outside [-(2h1+h2), 0]
    double grad_prev_at_switch = 0.0; // grad u_{n-1}(t_n) outside [0, 2h1+h2]
    double u_at_events = 0.0;   // max |u| at the switching node and moment

    double worst() const;
    bool ok(double tol) const { return worst() <= tol; }
};

BoundsReport check_runtime_bounds(const EventLog& log, green::GreenEvaluator& g);

// Undo the parabolic-scaling normalization: physical time tau = eps^2 t
// (values scale as v = eps^2 u).  The node set is untouched, which is
// the point: the switching pattern does not depend on eps.
EventLog rescale_events(const EventLog& log, double epsilon);

} // namespace rattling::solver

#endif
