#include "rattling/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "rattling/errors.hpp"

namespace rattling::solver {

namespace {

// a-priori lower bound on the switching time of node n
double switch_time_bound(const ModelParams& p, long long n) {
    double nd = static_cast<double>(n);
    return p.c * nd * nd / (p.h1 - 2.0 * p.c);
}

// Profile terms decay superexponentially in |m|/sqrt(tau); beyond this
// offset a term is below ~1e-16*sqrt(tau) and is dropped.
bool term_negligible(long long m, double tau) {
    double md = std::abs(static_cast<double>(m));
    return md > 12.0 * std::sqrt(tau) + 16.0;
}

} // namespace

void SolverConfig::validate() const {
    if (!(time_tol > 0.0) || !(value_tol > 0.0))
        throw std::domain_error("SolverConfig: tolerances must be > 0");
    if (!(simultaneity_window >= time_tol))
        throw std::domain_error(
            "SolverConfig: simultaneity_window must be >= time_tol");
    if (!(horizon > 0.0))
        throw std::domain_error("SolverConfig: horizon must be > 0");
    if (!std::isfinite(horizon) && target_events <= 0)
        throw std::domain_error(
            "SolverConfig: need a finite horizon or a target event count");
    if (max_candidates < 1)
        throw std::domain_error("SolverConfig: max_candidates must be >= 1");
}

void EventLog::validate() const {
    if (events.empty() || events.front().node != 0 ||
        events.front().time != 0.0)
        throw invariant_error("EventLog: must start with node 0 at time 0");
    double scale = epsilon * epsilon;
    std::vector<long long> seen;
    double prev = 0.0;
    for (const auto& ev : events) {
        if (ev.node < 0) throw invariant_error("EventLog: negative node");
        if (ev.time < prev - 1e-300)
            throw invariant_error("EventLog: events out of order");
        double bound = scale * switch_time_bound(params, ev.node);
        if (ev.time < bound - scale * config.time_tol)
            throw invariant_error("EventLog: switching time below a-priori bound");
        seen.push_back(ev.node);
        prev = ev.time;
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw invariant_error("EventLog: duplicate node");
    if (horizon < prev)
        throw invariant_error("EventLog: horizon before last event");
}

long long EventLog::max_node() const {
    long long m = 0;
    for (const auto& ev : events) m = std::max(m, ev.node);
    return m;
}

long long EventLog::count_switched(double t) const {
    long long k = 0;
    for (const auto& ev : events)
        if (ev.time <= t) ++k;
    return k;
}

double u_value(long long n, double t, const EventLog& log,
               green::GreenEvaluator& g) {
    const auto& p = log.params;
    double sum = 0.0;
    for (const auto& ev : log.events) {
        double tau = t - ev.time;
        if (tau <= 0.0) continue;
        if (!term_negligible(n - ev.node, tau))
            sum += g.gamma(n - ev.node, tau);
        if (ev.node != 0 && !term_negligible(n + ev.node, tau))
            sum += g.gamma(n + ev.node, tau);
    }
    double nd = static_cast<double>(n);
    return -p.c * nd * nd + (p.h1 - 2.0 * p.c) * t - (p.h1 + p.h2) * sum;
}

double u_dot_value(long long n, double t, const EventLog& log,
                   green::GreenEvaluator& g) {
    const auto& p = log.params;
    double sum = 0.0;
    for (const auto& ev : log.events) {
        double tau = t - ev.time;
        if (tau <= 0.0) continue;
        if (!term_negligible(n - ev.node, tau))
            sum += g.gamma_dot(n - ev.node, tau);
        if (ev.node != 0 && !term_negligible(n + ev.node, tau))
            sum += g.gamma_dot(n + ev.node, tau);
    }
    return (p.h1 - 2.0 * p.c) - (p.h1 + p.h2) * sum;
}

namespace {

struct Candidate {
    long long node;
    double next_time;   // no root can occur before this (sound lower bound)
    double last_neg;    // latest probe where u was seen < 0
    bool probed = false;
};

class EventDriven {
public:
    EventDriven(const ModelParams& params, const SolverConfig& cfg,
                green::GreenEvaluator& g)
        : p_(params), cfg_(cfg), g_(g), log_(params) {
        log_.config = cfg;
        log_.method = "event_driven";
        log_.events.push_back({0, 0.0});
        relay_.emplace(0, relay::init_relay(0, p_));
        next_node_ = 1;
    }

    EventLog run() {
        while (!done()) {
            if (!advance())
                break; // no switching before the horizon
        }
        log_.horizon = std::isfinite(cfg_.horizon)
                           ? cfg_.horizon
                           : log_.events.back().time;
        log_.validate();
        return log_;
    }

private:
    bool done() const {
        if (cfg_.target_events > 0 &&
            static_cast<long long>(log_.events.size()) >= cfg_.target_events)
            return true;
        return false;
    }

    // Bring all nodes whose a-priori bound is below `t` into the queue.
    void enumerate_up_to(double t) {
        while (switch_time_bound(p_, next_node_) <= t) {
            if (next_node_ > cfg_.max_candidates)
                throw accuracy_error("run_event_driven: max_candidates exceeded");
            add_candidate(next_node_);
            ++next_node_;
        }
    }

    void add_candidate(long long n) {
        Candidate c;
        c.node = n;
        c.next_time = std::max(switch_time_bound(p_, n), cfg_.time_tol);
        c.last_neg = c.next_time;
        cands_.push_back(c);
        queue_.push({c.next_time, cands_.size() - 1});
        relay_.emplace(n, relay::init_relay(n, p_));
    }

    // March step from time t where u(t) = u < 0.  Never exceeds the
    // sound bound (-u)/(h1+h2) (|du/dt| <= h1+h2), so the first
    // crossing can never be stepped over; also capped at 5% of t so
    // the profile is sampled on its own scale.
    double march_step(double t, double u) const {
        double safe = -u / (p_.h1 + p_.h2);
        double cap = 0.05 * std::max(t, 1e-3);
        return std::max(cfg_.time_tol, std::min(cap, safe));
    }

    // Bisect for the first time u >= 0 in [lo, hi]; u(lo) < 0, u(hi) >= 0.
    double refine_root(long long n, double lo, double hi) {
        while (hi - lo > cfg_.time_tol) {
            double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            (u_value(n, mid, log_, g_) >= 0.0 ? hi : lo) = mid;
        }
        return hi;
    }

    // One batch of simultaneous switchings.  Returns false when
    // nothing switches before the horizon.
    bool advance() {
        double best = std::numeric_limits<double>::infinity();
        std::vector<std::tuple<long long, double, double>> roots; // node, root, last_neg

        auto threshold = [&]() {
            return std::min(cfg_.horizon, best + cfg_.simultaneity_window);
        };

        while (true) {
            if (queue_.empty()) {
                // the earliest conceivable root among un-admitted nodes
                // is the next node's a-priori bound (bounds grow with
                // n); admit that node if it can still beat the batch
                if (switch_time_bound(p_, next_node_) >= threshold()) break;
                if (next_node_ > cfg_.max_candidates)
                    throw accuracy_error(
                        "run_event_driven: max_candidates exceeded");
                add_candidate(next_node_);
                ++next_node_;
                continue;
            }
            enumerate_up_to(std::min(threshold(), queue_.top().first));
            auto [tc, idx] = queue_.top();
            if (tc >= threshold()) break;
            queue_.pop();
            Candidate& c = cands_[idx];
            double u = u_value(c.node, tc, log_, g_);
            if (u >= 0.0) {
                double r = c.probed ? refine_root(c.node, c.last_neg, tc) : tc;
                roots.emplace_back(c.node, r, c.last_neg);
                idle_.push_back(idx);
                best = std::min(best, r);
            } else {
                c.probed = true;
                c.last_neg = tc;
                c.next_time = tc + march_step(tc, u);
                queue_.push({c.next_time, idx});
            }
        }

        if (roots.empty()) return false;

        std::sort(roots.begin(), roots.end(),
                  [](const auto& a, const auto& b) {
                      return std::get<1>(a) < std::get<1>(b);
                  });
        double cut = std::get<1>(roots.front()) + cfg_.simultaneity_window;
        for (const auto& [node, r, last_neg] : roots) {
            if (r <= cut && !done()) {
                log_.events.push_back({node, r});
                accept(node, r);
            } else {
                // root was computed without the newly appended events;
                // it is only a lower bound now, so re-march from the
                // last certainly-negative probe
                for (std::size_t idx : idle_)
                    if (cands_[idx].node == node) {
                        cands_[idx].next_time = last_neg;
                        cands_[idx].last_neg = last_neg;
                        queue_.push({last_neg, idx});
                    }
            }
        }
        idle_.clear();
        return true;
    }

    void accept(long long node, double r) {
        double u = u_value(node, r, log_, g_);
        if (std::abs(u) > cfg_.value_tol)
            throw accuracy_error(
                "run_event_driven: |u| = " + std::to_string(std::abs(u)) +
                " at accepted event exceeds value_tol");
        auto& state = relay_.at(node);
        state = relay::relay_update(state, std::max(u, 0.0), r);
        if (!state.switched)
            throw invariant_error("run_event_driven: relay did not switch");
    }

    ModelParams p_;
    SolverConfig cfg_;
    green::GreenEvaluator& g_;
    EventLog log_;
    std::vector<Candidate> cands_;
    std::vector<std::size_t> idle_; // candidates popped with a root this batch
    std::priority_queue<std::pair<double, std::size_t>,
                        std::vector<std::pair<double, std::size_t>>,
                        std::greater<>>
        queue_;
    std::map<long long, relay::RelayState> relay_;
    long long next_node_ = 1;
};

} // namespace

EventLog run_event_driven(const ModelParams& params, const SolverConfig& cfg,
                          green::GreenEvaluator& g) {
    cfg.validate();
    EventDriven driver(params, cfg, g);
    return driver.run();
}

double BoundsReport::worst() const {
    return std::max({u_sign, u_dot, delta_u, grad_at_switch,
                     grad_prev_at_switch, u_at_events});
}

BoundsReport check_runtime_bounds(const EventLog& log,
                                  green::GreenEvaluator& g) {
    const auto& p = log.params;
    BoundsReport rep;
    long long nmax = log.max_node() + 2;

    auto over = [](double x, double lo, double hi) {
        return std::max({lo - x, x - hi, 0.0});
    };

    // sample times: event moments for the state bounds, midpoints for
    // the derivative bounds (u_dot jumps exactly at events)
    std::vector<double> state_times, smooth_times;
    for (std::size_t i = 0; i < log.events.size(); ++i) {
        double t = log.events[i].time;
        if (t > 0.0) state_times.push_back(t);
        double next = i + 1 < log.events.size() ? log.events[i + 1].time
                                                : log.horizon;
        if (next > t) smooth_times.push_back(0.5 * (t + next));
    }
    // cap the grid so the check stays a few seconds on long runs
    auto thin = [](std::vector<double>& v, std::size_t cap) {
        if (v.size() <= cap) return;
        std::vector<double> out;
        double stride = static_cast<double>(v.size()) / static_cast<double>(cap);
        for (std::size_t i = 0; i < cap; ++i)
            out.push_back(v[static_cast<std::size_t>(i * stride)]);
        v = std::move(out);
    };
    thin(state_times, 48);
    thin(smooth_times, 48);

    auto scan_state = [&](double t) {
        for (long long n = 0; n <= nmax; ++n) {
            double u = u_value(n, t, log, g);
            rep.u_sign = std::max(rep.u_sign, u);
            double um = u_value(n - 1, t, log, g);
            double up = u_value(n + 1, t, log, g);
            rep.delta_u = std::max(
                rep.delta_u, over(um - 2.0 * u + up, -(2.0 * p.h1 + p.h2),
                                  p.h1 + p.h2 - 2.0 * p.c));
        }
    };
    auto scan_smooth = [&](double t) {
        for (long long n = 0; n <= nmax; ++n) {
            double du = u_dot_value(n, t, log, g);
            rep.u_dot = std::max(
                rep.u_dot, over(du, -(p.h1 + p.h2), p.h1 - 2.0 * p.c));
        }
    };
    for (double t : state_times) scan_state(t);
    for (double t : smooth_times) scan_smooth(t);

    for (const auto& ev : log.events) {
        double u = u_value(ev.node, ev.time, log, g);
        rep.u_at_events = std::max(rep.u_at_events, std::abs(u));
        rep.u_sign = std::max(rep.u_sign, u);
        double up = u_value(ev.node + 1, ev.time, log, g);
        rep.grad_at_switch = std::max(
            rep.grad_at_switch, over(up - u, -(2.0 * p.h1 + p.h2), 0.0));
        if (ev.node >= 1) {
            double um = u_value(ev.node - 1, ev.time, log, g);
            rep.grad_prev_at_switch = std::max(
                rep.grad_prev_at_switch, over(u - um, 0.0, 2.0 * p.h1 + p.h2));
        }
    }
    return rep;
}

EventLog rescale_events(const EventLog& log, double epsilon) {
    if (!(epsilon > 0.0))
        throw std::domain_error("rescale_events: epsilon must be > 0");
    EventLog out = log;
    double s = epsilon * epsilon;
    for (auto& ev : out.events) ev.time *= s;
    out.horizon *= s;
    out.epsilon = log.epsilon * epsilon;
    return out;
}

} // namespace rattling::solver
