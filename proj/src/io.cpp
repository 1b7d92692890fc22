#include "rattling/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rattling/errors.hpp"
#include "rattling/specfun.hpp"

namespace rattling::io {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary); // binary: '\n' stays '\n'
    if (!os)
        throw std::domain_error("cannot open for writing: " + path);
    return os;
}

void finish(std::ofstream& os, const std::string& path) {
    os.flush();
    if (!os) throw std::domain_error("write failed: " + path);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw std::domain_error("bad numeric field: '" + s + "'");
    return v;
}

long long parse_ll(const std::string& s) {
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw std::domain_error("bad integer field: '" + s + "'");
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, ',')) out.push_back(cur);
    return out;
}

} // namespace

std::string format_double(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{})
        throw std::domain_error("format_double failed");
    return std::string(buf, p);
}

void write_event_csv(const solver::EventLog& log, const std::string& path,
                     std::optional<double> tau_epsilon) {
    auto os = open_out(path);
    os << (tau_epsilon ? "node,time,tau\n" : "node,time\n");
    for (const auto& ev : log.events) {
        os << ev.node << ',' << format_double(ev.time);
        if (tau_epsilon)
            os << ','
               << format_double(*tau_epsilon * *tau_epsilon * ev.time);
        os << '\n';
    }
    finish(os, path);
}

nlohmann::json event_log_meta(const solver::EventLog& log) {
    nlohmann::json j;
    j["format"] = "rattling-event-log";
    j["version"] = 1;
    j["method"] = log.method;
    j["params"] = {{"h1", log.params.h1},
                   {"h2", log.params.h2},
                   {"c", log.params.c}};
    j["horizon"] = log.horizon;
    j["epsilon"] = log.epsilon;
    nlohmann::json cfg;
    cfg["time_tol"] = log.config.time_tol;
    cfg["value_tol"] = log.config.value_tol;
    cfg["target_events"] = log.config.target_events;
    cfg["max_candidates"] = log.config.max_candidates;
    cfg["simultaneity_window"] = log.config.simultaneity_window;
    if (std::isfinite(log.config.horizon)) // JSON has no infinity
        cfg["horizon"] = log.config.horizon;
    j["config"] = cfg;
    return j;
}

void write_event_meta(const solver::EventLog& log, const std::string& path) {
    write_json(event_log_meta(log), path);
}

solver::EventLog read_event_log(const std::string& csv_path,
                                const std::string& meta_path) {
    std::ifstream ms(meta_path, std::ios::binary);
    if (!ms)
        throw std::domain_error("cannot open for reading: " + meta_path);
    nlohmann::json j = nlohmann::json::parse(ms, nullptr, true);
    if (j.value("format", "") != "rattling-event-log")
        throw std::domain_error(meta_path + ": not an event-log sidecar");

    const auto& jp = j.at("params");
    relay::ModelParams params(jp.at("h1").get<double>(),
                              jp.at("h2").get<double>(),
                              jp.at("c").get<double>());
    solver::EventLog log(params);
    log.method = j.value("method", "");
    log.horizon = j.at("horizon").get<double>();
    log.epsilon = j.value("epsilon", 1.0);
    const auto& jc = j.at("config");
    log.config.time_tol = jc.at("time_tol").get<double>();
    log.config.value_tol = jc.at("value_tol").get<double>();
    log.config.target_events = jc.at("target_events").get<long long>();
    log.config.max_candidates = jc.at("max_candidates").get<long long>();
    log.config.simultaneity_window =
        jc.at("simultaneity_window").get<double>();
    log.config.horizon = jc.value("horizon",
                                  std::numeric_limits<double>::infinity());

    std::ifstream cs(csv_path, std::ios::binary);
    if (!cs)
        throw std::domain_error("cannot open for reading: " + csv_path);
    std::string line;
    if (!std::getline(cs, line) || split_csv_line(line).empty() ||
        split_csv_line(line)[0] != "node")
        throw std::domain_error(csv_path + ": missing node,time header");
    while (std::getline(cs, line)) {
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() < 2)
            throw std::domain_error(csv_path + ": short row '" + line + "'");
        log.events.push_back(
            {parse_ll(fields[0]), parse_double(fields[1])});
    }
    log.validate();
    return log;
}

nlohmann::json report_json(const analysis::RattlingReport& rep) {
    nlohmann::json j;
    j["measured_a"] = rep.measured_a;
    j["measured_p_star"] = rep.measured_p_star;
    j["predicted_a"] = rep.predicted_a;
    j["predicted_p_star"] = rep.predicted_p_star;
    j["residual_value_balance"] = rep.residual_value_balance;
    j["residual_gradient_balance"] = rep.residual_gradient_balance;
    j["omega_over_k_max"] = rep.omega_over_k_max;
    j["min_gap_ratio"] = rep.min_gap_ratio;
    j["events_used"] = rep.events_used;
    j["n_resolved"] = rep.n_resolved;
    return j;
}

void write_omega_csv(const solver::EventLog& log, double a,
                     const std::string& path) {
    auto os = open_out(path);
    os << "node,time,omega\n";
    for (const auto& ev : log.events) {
        if (ev.node == 0) continue;
        double k = static_cast<double>(ev.node);
        os << ev.node << ',' << format_double(ev.time) << ','
           << format_double(ev.time - a * k * k) << '\n';
    }
    finish(os, path);
}

void write_astar_csv(const std::vector<analysis::AsymptoticConstants>& rows,
                     const std::string& path) {
    auto os = open_out(path);
    os << "lambda,a_value_eq,a_gradient_eq,a_rate_eq,max_disagreement\n";
    for (const auto& r : rows)
        os << format_double(r.lambda) << ',' << format_double(r.root_value_eq)
           << ',' << format_double(r.root_gradient_eq) << ','
           << format_double(r.root_rate_eq) << ','
           << format_double(r.max_disagreement()) << '\n';
    finish(os, path);
}

void write_fgh_profile_csv(const std::vector<double>& a_values, int samples,
                           const std::string& path) {
    if (samples < 1)
        throw std::domain_error("write_fgh_profile_csv: samples must be >= 1");
    auto os = open_out(path);
    os << "a,x,F,G,H\n";
    for (double a : a_values)
        for (int i = 0; i < samples; ++i) {
            double x = -1.0 + (2.0 * i + 1.0) / samples;
            os << format_double(a) << ',' << format_double(x) << ','
               << format_double(specfun::F(a, x)) << ','
               << format_double(specfun::G(a, x)) << ','
               << format_double(specfun::H_integrand(a, x)) << '\n';
        }
    finish(os, path);
}

void write_pattern_csv(const patterns::PatternSet& set,
                       const std::string& path) {
    auto os = open_out(path);
    os << "n,member\n";
    for (long long n = 0; n <= set.limit(); ++n)
        os << n << ',' << (set.contains(n) ? 1 : 0) << '\n';
    finish(os, path);
}

void write_metric_csv(const patterns::PatternSet& set,
                      const std::vector<long long>& nodes,
                      const std::string& path) {
    auto os = open_out(path);
    os << "n,metric\n";
    for (long long n : nodes)
        os << n << ',' << format_double(set.quasi_uniformity_metric(n))
           << '\n';
    finish(os, path);
}

void write_counterexample_csv(const patterns::BigPatternSet& set,
                              const std::string& path) {
    auto os = open_out(path);
    os << "level,M,ratio,metric\n";
    for (int j = 1; j <= set.levels; ++j) {
        patterns::BigPatternSet::Rational ratio(set.m[j], set.M[j]);
        double metric = set.m[j] - 1 >= 1
                            ? set.metric_sampled(j)
                            : std::numeric_limits<double>::quiet_NaN();
        os << j << ',' << set.M[j].str() << ','
           << format_double(ratio.convert_to<double>()) << ','
           << format_double(metric) << '\n';
    }
    finish(os, path);
}

void write_profile_csv(const solver::EventLog& log,
                       const std::vector<double>& times, long long n_max,
                       const std::string& path, green::GreenEvaluator& g) {
    if (n_max < 0)
        throw std::domain_error("write_profile_csv: n_max must be >= 0");
    auto os = open_out(path);
    os << "time,node,u\n";
    for (double t : times)
        for (long long n = 0; n <= n_max; ++n)
            os << format_double(t) << ',' << n << ','
               << format_double(solver::u_value(n, t, log, g)) << '\n';
    finish(os, path);
}

void write_json(const nlohmann::json& j, const std::string& path) {
    auto os = open_out(path);
    os << j.dump(2) << '\n';
    finish(os, path);
}

} // namespace rattling::io
