#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rattling/errors.hpp"
#include "rattling/solver.hpp"

namespace rattling::solver {

namespace {

namespace ode = boost::numeric::odeint;
using State = std::vector<double>;

// Right-hand side of the truncated half-lattice: indices 0..N with the
// reflected stencil at 0 and the switching-free far field as virtual
// node N+1.  `out` is the vector of frozen relay outputs; the RHS is
// smooth between events.
struct LatticeRhs {
    const ModelParams* p;
    long long N;
    const std::vector<double>* out;

    void operator()(const State& u, State& du, double t) const {
        const auto& o = *out;
        du[0] = 2.0 * (u[1] - u[0]) + o[0];
        for (long long n = 1; n < N; ++n)
            du[n] = u[n - 1] - 2.0 * u[n] + u[n + 1] + o[n];
        double nv = static_cast<double>(N + 1);
        double virt = -p->c * nv * nv + (p->h1 - 2.0 * p->c) * t;
        du[N] = u[N - 1] - 2.0 * u[N] + virt + o[N];
    }
};

} // namespace

long long suggest_halfwidth(const ModelParams& params, double horizon) {
    double frontier =
        std::sqrt(horizon * (params.h1 - 2.0 * params.c) / params.c);
    // 12 diffusion lengths past the largest switchable node keeps the
    // closure error below ~1e-15 of the solution scale
    return static_cast<long long>(
               std::ceil(frontier + 12.0 * std::sqrt(horizon))) +
           8;
}

EventLog run_time_stepper(const ModelParams& params, const SolverConfig& cfg,
                          long long lattice_halfwidth) {
    cfg.validate();
    const long long N = lattice_halfwidth;
    if (N < 2) throw std::domain_error("run_time_stepper: halfwidth too small");

    const double bound_N =
        params.c * static_cast<double>(N) * static_cast<double>(N) /
        (params.h1 - 2.0 * params.c);
    if (std::isfinite(cfg.horizon) && !(bound_N > cfg.horizon))
        throw std::domain_error(
            "run_time_stepper: halfwidth too small for horizon (boundary "
            "nodes could switch)");

    EventLog log(params);
    log.config = cfg;
    log.method = "time_stepper";
    log.events.push_back({0, 0.0});

    State u(N + 1);
    for (long long n = 0; n <= N; ++n)
        u[n] = -params.c * static_cast<double>(n) * static_cast<double>(n);

    std::vector<double> out(N + 1, params.h1);
    std::vector<relay::RelayState> relays(N + 1);
    for (long long n = 0; n <= N; ++n) relays[n] = relay::init_relay(n, params);
    out[0] = -params.h2;

    LatticeRhs rhs{&params, N, &out};
    const double tol = std::min(cfg.value_tol / 10.0, 1e-12);
    auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<State>>(tol, tol);

    double t = 0.0;
    double dt_next = 1e-4;

    auto reached_target = [&]() {
        return cfg.target_events > 0 &&
               static_cast<long long>(log.events.size()) >= cfg.target_events;
    };
    auto any_crossed = [&](const State& s) {
        for (long long n = 1; n <= N; ++n)
            if (!relays[n].switched && s[n] >= 0.0) return true;
        return false;
    };
    // state at t0 + (te - t0), re-integrated from a saved snapshot with
    // the frozen relay outputs; used both as the bisection predicate
    // and to produce the post-event state
    auto integrate_to = [&](const State& u0, double t0, double te) {
        State s = u0;
        if (te > t0)
            ode::integrate_adaptive(stepper, rhs, s, t0, te,
                                    std::min(1e-6, te - t0));
        return s;
    };

    while (!reached_target()) {
        if (std::isfinite(cfg.horizon) && t >= cfg.horizon) break;

        // never step past the soonest admissible crossing: u moves no
        // faster than h1+h2, so this cap makes endpoint sign checks
        // exhaustive
        double umax = -std::numeric_limits<double>::infinity();
        for (long long n = 1; n <= N; ++n)
            if (!relays[n].switched) umax = std::max(umax, u[n]);
        double cap = std::max(cfg.time_tol, -umax / (params.h1 + params.h2));
        if (std::isfinite(cfg.horizon)) cap = std::min(cap, cfg.horizon - t);

        State u_saved = u;
        double t_saved = t;
        double dt = std::min(dt_next, cap);
        int tries = 0;
        while (stepper.try_step(rhs, u, t, dt) == ode::fail) {
            if (++tries > 80 || !(dt > 1e-15 * std::max(1.0, t)))
                throw accuracy_error("run_time_stepper: step-size underflow");
        }
        dt_next = dt;

        if (!any_crossed(u)) continue;

        // earliest moment any unswitched node reaches the threshold,
        // bisected on re-integration from the saved snapshot
        double lo = t_saved, hi = t;
        while (hi - lo > cfg.time_tol) {
            double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            (any_crossed(integrate_to(u_saved, t_saved, mid)) ? hi : lo) = mid;
        }
        double te = hi;
        State ue = integrate_to(u_saved, t_saved, te);

        std::vector<long long> batch;
        for (long long n = 1; n <= N; ++n)
            if (!relays[n].switched && ue[n] >= 0.0) batch.push_back(n);
        if (batch.empty()) {
            // crossing lies within time_tol past te; accept the step
            // endpoint as the event time
            te = t;
            ue = u;
            for (long long n = 1; n <= N; ++n)
                if (!relays[n].switched && ue[n] >= 0.0) batch.push_back(n);
        }
        for (long long n : batch) {
            if (n >= N - 1)
                throw invariant_error(
                    "run_time_stepper: boundary node switched; enlarge the "
                    "lattice halfwidth");
            if (reached_target()) break;
            relays[n] = relay::relay_update(relays[n], ue[n], te);
            out[n] = -params.h2;
            log.events.push_back({n, te});
        }
        u = ue;
        t = te;
        dt_next = 1e-4;
    }

    if (!(bound_N > t))
        throw invariant_error(
            "run_time_stepper: halfwidth precondition violated at final time");
    log.horizon = std::isfinite(cfg.horizon) ? cfg.horizon : t;
    log.validate();
    return log;
}

} // namespace rattling::solver
