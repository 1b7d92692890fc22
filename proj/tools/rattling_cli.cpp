// Command-line front end: simulate | astar | pattern | selftest.
// Exit codes: 0 success, 2 bad configuration or input, 3 numerical
// failure, 4 internal invariant violation.

#include <cmath>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rattling/analysis.hpp"
#include "rattling/errors.hpp"
#include "rattling/green.hpp"
#include "rattling/io.hpp"
#include "rattling/patterns.hpp"
#include "rattling/solver.hpp"
#include "rattling/specfun.hpp"

namespace {

using rattling::io::format_double;

std::string default_meta_path(const std::string& out) {
    std::string base = out;
    if (base.size() > 4 && base.substr(base.size() - 4) == ".csv")
        base.resize(base.size() - 4);
    return base + ".meta.json";
}

struct SimArgs {
    double h1 = 1.0, h2 = 0.0, c = 0.1;
    long long events = 0;
    double horizon = 0.0; // 0 = unset
    double time_tol = 1e-9, value_tol = 1e-7;
    std::string method = "event";
    std::string out = "events.csv";
    std::string meta, report, omega, profile;
    double epsilon = 0.0; // 0 = no tau column
    std::vector<double> profile_times;
    long long profile_nmax = -1;
    bool check_bounds = false;
    bool stamp = false;
};

int run_simulate(const SimArgs& a) {
    rattling::relay::ModelParams params(a.h1, a.h2, a.c);
    rattling::solver::SolverConfig cfg;
    cfg.time_tol = a.time_tol;
    cfg.value_tol = a.value_tol;
    if (a.horizon > 0.0) cfg.horizon = a.horizon;
    cfg.target_events = a.events;
    cfg.validate();
    if (a.epsilon < 0.0)
        throw std::domain_error("--epsilon must be positive");

    rattling::green::GreenEvaluator g;
    rattling::solver::EventLog log(params);
    if (a.method == "event") {
        log = rattling::solver::run_event_driven(params, cfg, g);
    } else if (a.method == "stepper") {
        if (!(a.horizon > 0.0))
            throw std::domain_error(
                "--method stepper needs --horizon (sizes the lattice)");
        long long n =
            rattling::solver::suggest_halfwidth(params, cfg.horizon);
        log = rattling::solver::run_time_stepper(params, cfg, n);
    } else {
        throw std::domain_error("--method must be 'event' or 'stepper'");
    }

    rattling::io::write_event_csv(
        log, a.out,
        a.epsilon > 0.0 ? std::optional<double>(a.epsilon) : std::nullopt);
    std::string meta_path = a.meta.empty() ? default_meta_path(a.out) : a.meta;
    nlohmann::json meta = rattling::io::event_log_meta(log);
    if (a.stamp) {
        std::time_t now = std::time(nullptr);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ",
                      std::gmtime(&now));
        meta["written_at"] = buf;
    }
    rattling::io::write_json(meta, meta_path);

    std::cout << "events=" << log.events.size()
              << " max_node=" << log.max_node()
              << " t_last=" << format_double(log.events.back().time)
              << " wrote " << a.out << " + " << meta_path << "\n";

    if (!a.report.empty() || !a.omega.empty()) {
        auto consts = rattling::analysis::solve_a_star(params.lambda());
        auto rep = rattling::analysis::fit_rattling(log, consts);
        if (!a.report.empty()) {
            nlohmann::json j = rattling::io::report_json(rep);
            j["lambda"] = params.lambda();
            rattling::io::write_json(j, a.report);
            std::cout << "fit: measured_a=" << format_double(rep.measured_a)
                      << " predicted_a=" << format_double(rep.predicted_a)
                      << " measured_p_star="
                      << format_double(rep.measured_p_star)
                      << " predicted_p_star="
                      << format_double(rep.predicted_p_star) << " wrote "
                      << a.report << "\n";
        }
        if (!a.omega.empty()) {
            rattling::io::write_omega_csv(log, rep.measured_a, a.omega);
            std::cout << "wrote " << a.omega << "\n";
        }
    }

    if (!a.profile.empty()) {
        double t_end = log.horizon;
        std::vector<double> times = a.profile_times;
        if (times.empty())
            times = {0.25 * t_end, 0.5 * t_end, 0.75 * t_end, t_end};
        long long nmax =
            a.profile_nmax >= 0 ? a.profile_nmax : log.max_node() + 5;
        rattling::io::write_profile_csv(log, times, nmax, a.profile, g);
        std::cout << "wrote " << a.profile << "\n";
    }

    if (a.check_bounds) {
        auto b = rattling::solver::check_runtime_bounds(log, g);
        std::cout << "bounds: u_sign=" << format_double(b.u_sign)
                  << " u_dot=" << format_double(b.u_dot)
                  << " delta_u=" << format_double(b.delta_u)
                  << " grad_at_switch=" << format_double(b.grad_at_switch)
                  << " grad_prev_at_switch="
                  << format_double(b.grad_prev_at_switch)
                  << " u_at_events=" << format_double(b.u_at_events) << "\n";
        std::cout << (b.ok(cfg.value_tol) ? "bounds ok within value_tol"
                                          : "bounds exceeded value_tol")
                  << " (worst=" << format_double(b.worst()) << ")\n";
    }
    return 0;
}

struct AstarArgs {
    std::vector<double> grid{3.0, 5.0, 10.0, 50.0};
    std::string out = "astar.csv";
    std::string fgh_out;
    int fgh_samples = 200;
};

int run_astar(const AstarArgs& a) {
    std::vector<rattling::analysis::AsymptoticConstants> rows;
    rows.reserve(a.grid.size());
    for (double lambda : a.grid) {
        rows.push_back(rattling::analysis::solve_a_star(lambda));
        const auto& r = rows.back();
        std::cout << "lambda=" << format_double(r.lambda)
                  << " a_star=" << format_double(r.a_star)
                  << " max_disagreement=" << format_double(r.max_disagreement())
                  << "\n";
    }
    if (!a.out.empty()) {
        rattling::io::write_astar_csv(rows, a.out);
        std::cout << "wrote " << a.out << "\n";
    }
    if (!a.fgh_out.empty()) {
        rattling::io::write_fgh_profile_csv({0.2, 1.0, 5.0}, a.fgh_samples,
                                            a.fgh_out);
        std::cout << "wrote " << a.fgh_out << "\n";
    }
    return 0;
}

struct PatternArgs {
    double alpha = -1.0; // unset
    double beta = 0.0;
    long long nmax = 1000;
    bool counterexample = false;
    int levels = 12;
    std::string out;
    std::string metric_out;
    std::string json_out;
    std::vector<long long> window; // p1,p2
    long long jmin = 1, jmax = -1;
};

int run_pattern(const PatternArgs& a) {
    if (a.counterexample) {
        auto set = rattling::patterns::build_counterexample(a.levels);
        for (int j = 1; j <= set.levels; ++j) {
            rattling::patterns::BigPatternSet::Rational ratio(set.m[j],
                                                              set.M[j]);
            std::cout << "level " << j << ": p=" << set.p[j]
                      << " M=" << set.M[j]
                      << " m/M=" << format_double(ratio.convert_to<double>());
            if (set.m[j] - 1 >= 1)
                std::cout << " metric="
                          << format_double(set.metric_sampled(j));
            std::cout << "\n";
        }
        std::string out = a.out.empty() ? "counterexample.csv" : a.out;
        rattling::io::write_counterexample_csv(set, out);
        std::cout << "wrote " << out << "\n";
        if (!a.json_out.empty())
            rattling::io::write_json({{"counterexample_levels", a.levels}},
                                     a.json_out);
        return 0;
    }

    if (a.alpha < 0.0)
        throw std::domain_error("need --alpha (or --counterexample)");
    auto set = rattling::patterns::gen_quasiperiodic(a.alpha, a.beta, a.nmax);
    long long members = set.count_p(set.limit() + 1);
    std::cout << "members(1.." << set.limit() << ")=" << members
              << " density=" << format_double(static_cast<double>(members) /
                                              static_cast<double>(set.limit()))
              << "\n";
    if (!set.positives().empty()) {
        long long top = set.positives().back();
        if (set.count_p(top) >= 1)
            std::cout << "metric(n=" << top << ")="
                      << format_double(set.quasi_uniformity_metric(top))
                      << "\n";
    }

    std::string out = a.out.empty() ? "pattern.csv" : a.out;
    rattling::io::write_pattern_csv(set, out);
    std::cout << "wrote " << out << "\n";
    if (!a.metric_out.empty()) {
        std::vector<long long> nodes;
        for (long long k : set.positives())
            if (set.count_p(k) >= 1) nodes.push_back(k);
        rattling::io::write_metric_csv(set, nodes, a.metric_out);
        std::cout << "wrote " << a.metric_out << "\n";
    }
    if (!a.json_out.empty())
        rattling::io::write_json({{"alpha", a.alpha},
                                  {"beta", a.beta},
                                  {"n_max", a.nmax}},
                                 a.json_out);
    if (!a.window.empty()) {
        if (a.window.size() != 2)
            throw std::domain_error("--window takes p1,p2");
        long long p1 = a.window[0], p2 = a.window[1];
        long long jmax = a.jmax >= 0 ? a.jmax : set.limit() - (p1 + p2) + 1;
        bool ok = rattling::patterns::check_periodic_window(set, p1, p2,
                                                            a.jmin, jmax);
        std::cout << "window(" << p1 << "," << p2 << ") over [" << a.jmin
                  << "," << jmax << "]: " << (ok ? "true" : "false") << "\n";
    }
    return 0;
}

struct SelftestArgs {
    std::vector<std::string> groups;
    double strict = 0.0; // 0 = per-check defaults
};

struct CheckRow {
    std::string group, name;
    double worst, tol;
};

int run_selftest(const SelftestArgs& a) {
    namespace sf = rattling::specfun;
    std::vector<CheckRow> rows;
    auto wants = [&](const std::string& gr) {
        if (a.groups.empty()) return true;
        for (const auto& g : a.groups)
            if (g == gr) return true;
        return false;
    };
    auto tol = [&](double dflt) { return a.strict > 0.0 ? a.strict : dflt; };

    if (wants("specfun")) {
        double worst = 0.0;
        for (int i = 0; i <= 16; ++i) {
            double x = 0.25 * i;
            worst = std::max(worst, std::abs(2.0 * sf::h(x) + x * sf::g(x) -
                                             sf::f(x)));
        }
        rows.push_back({"specfun", "f = 2h + x g", worst, tol(1e-12)});
        rows.push_back(
            {"specfun", "g(0) = -1/2", std::abs(sf::g(0.0) + 0.5), tol(1e-15)});
        double d = 1e-4, fd = 0.0;
        for (int i = 1; i <= 16; ++i) {
            double x = 0.25 * i;
            fd = std::max(fd, std::abs((sf::f(x + d) - sf::f(x - d)) /
                                           (2.0 * d) -
                                       sf::g(x)));
            fd = std::max(fd, std::abs((sf::g(x + d) - sf::g(x - d)) /
                                           (2.0 * d) -
                                       sf::h(x)));
        }
        rows.push_back({"specfun", "derivative chain f' = g, g' = h", fd,
                        tol(1e-6)});
    }

    if (wants("green")) {
        rattling::green::GreenEvaluator g;
        double worst = 0.0;
        for (long long n = 0; n <= 8; ++n)
            for (double t : {0.25, 1.0, 4.0, 16.0}) {
                double lap = g.gamma(n + 1, t) + g.gamma(n - 1, t) -
                             2.0 * g.gamma(n, t);
                double res = g.gamma_dot(n, t) - lap - (n == 0 ? 1.0 : 0.0);
                worst = std::max(worst, std::abs(res));
            }
        rows.push_back({"green", "defining ODE residual", worst, tol(1e-9)});
        double sym = 0.0;
        for (long long n = 1; n <= 6; ++n)
            for (double t : {0.5, 3.0}) {
                sym = std::max(sym, std::abs(g.gamma(n, t) - g.gamma(-n, t)));
                sym = std::max(sym, std::abs(g.grad_gamma(-(n + 1), t) +
                                             g.grad_gamma(n, t)));
            }
        rows.push_back({"green", "symmetry and difference antisymmetry", sym,
                        tol(0.0)});
    }

    if (wants("integrals")) {
        double worst = 0.0;
        for (double av : {0.2, 1.0, 5.0})
            worst = std::max(worst,
                             std::abs(rattling::analysis::identity_main3(av)));
        rows.push_back(
            {"integrals", "(2a+1) I_G - 2 I_F + 2a = 0", worst, tol(1e-9)});
        double dis = 0.0, prev = std::numeric_limits<double>::infinity();
        bool monotone = true;
        for (double lambda : {3.0, 5.0, 10.0, 50.0}) {
            auto cst = rattling::analysis::solve_a_star(lambda);
            dis = std::max(dis, cst.max_disagreement());
            monotone = monotone && cst.a_star < prev;
            prev = cst.a_star;
        }
        rows.push_back({"integrals", "a* three-equation agreement", dis,
                        tol(1e-8)});
        rows.push_back({"integrals", "a* decreasing in lambda",
                        monotone ? 0.0 : 1.0, 0.5});
    }

    if (rows.empty())
        throw std::domain_error(
            "no such selftest group (have: specfun, green, integrals)");

    bool all = true;
    for (const auto& r : rows) {
        bool pass = r.worst <= r.tol;
        all = all && pass;
        std::cout << "[" << r.group << "] " << r.name << ": "
                  << (pass ? "pass" : "FAIL")
                  << " worst=" << format_double(r.worst)
                  << " tol=" << format_double(r.tol) << "\n";
    }
    std::cout << (all ? "selftest passed" : "selftest FAILED") << "\n";
    return all ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hysteresis lattice rattling toolkit: event simulation, "
                 "asymptotic constants, switching-pattern analysis"};
    app.require_subcommand(1);

    SimArgs sim;
    auto* s = app.add_subcommand(
        "simulate", "run the lattice model and record switching events");
    s->add_option("--h1", sim.h1, "relay output before switching");
    s->add_option("--h2", sim.h2, "negated relay output after switching");
    s->add_option("--c", sim.c, "initial-profile curvature, u_n(0) = -c n^2");
    s->add_option("--events", sim.events, "stop after this many events");
    s->add_option("--horizon", sim.horizon, "stop at this time");
    s->add_option("--time-tol", sim.time_tol, "switching-time tolerance");
    s->add_option("--value-tol", sim.value_tol, "|u| tolerance at crossings");
    s->add_option("--method", sim.method, "'event' (exact formula) or "
                                          "'stepper' (truncated-lattice ODE)");
    s->add_option("--out", sim.out, "events CSV path");
    s->add_option("--meta", sim.meta, "sidecar JSON path");
    s->add_option("--report", sim.report, "fit report JSON path");
    s->add_option("--omega", sim.omega,
                  "quadratic-remainder CSV path (needs enough events to fit)");
    s->add_option("--epsilon", sim.epsilon,
                  "emit a tau = epsilon^2 t column with physical times");
    s->add_option("--profile", sim.profile, "solution snapshot CSV path");
    s->add_option("--profile-times", sim.profile_times,
                  "snapshot times (default: quarters of the horizon)")
        ->delimiter(',');
    s->add_option("--profile-nmax", sim.profile_nmax,
                  "largest node in snapshots (default: max node + 5)");
    s->add_flag("--check-bounds", sim.check_bounds,
                "report worst violations of the a-priori bounds");
    s->add_flag("--stamp", sim.stamp,
                "add a wall-clock timestamp to the sidecar (off: "
                "byte-reproducible outputs)");

    AstarArgs ast;
    auto* t = app.add_subcommand(
        "astar", "propagation constant a*(lambda) from its three equations");
    t->add_option("--grid", ast.grid, "lambda values (default 3,5,10,50)")
        ->delimiter(',');
    t->add_option("--out", ast.out, "table CSV path ('' to skip)");
    t->add_option("--fgh-out", ast.fgh_out,
                  "also sample the F/G/H kernel profiles to this CSV");
    t->add_option("--fgh-samples", ast.fgh_samples,
                  "x samples per kernel profile");

    PatternArgs pat;
    auto* p = app.add_subcommand(
        "pattern", "generate and check switching-node patterns");
    p->add_option("--alpha", pat.alpha, "frequency of the floor pattern");
    p->add_option("--beta", pat.beta, "phase of the floor pattern");
    p->add_option("--nmax", pat.nmax, "membership resolved for n up to this");
    p->add_flag("--counterexample", pat.counterexample,
                "build the oscillating-density level construction instead");
    p->add_option("--levels", pat.levels, "counterexample levels");
    p->add_option("--out", pat.out, "membership (or per-level) CSV path");
    p->add_option("--metric-out", pat.metric_out,
                  "quasi-uniformity metric CSV path");
    p->add_option("--json", pat.json_out, "pattern descriptor JSON path");
    p->add_option("--window", pat.window,
                  "check that every window of length p1+p2 holds exactly p1 "
                  "members; pass p1,p2")
        ->delimiter(',');
    p->add_option("--jmin", pat.jmin, "first window start");
    p->add_option("--jmax", pat.jmax, "last window start");

    SelftestArgs st;
    auto* q = app.add_subcommand("selftest",
                                 "internal consistency checks with residuals");
    q->add_option("--group", st.groups,
                  "restrict to a group: specfun, green, integrals");
    q->add_option("--strict", st.strict,
                  "override every tolerance with this value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (s->parsed()) return run_simulate(sim);
        if (t->parsed()) return run_astar(ast);
        if (p->parsed()) return run_pattern(pat);
        if (q->parsed()) return run_selftest(st);
    } catch (const rattling::invariant_error& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 4;
    } catch (const rattling::accuracy_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "bad input file: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
