#ifndef RATTLING_IO_HPP
#define RATTLING_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rattling/analysis.hpp"
#include "rattling/patterns.hpp"
#include "rattling/solver.hpp"

// Serialization of run artifacts.  All writers are deterministic:
// identical inputs produce byte-identical files (shortest round-trip
// decimal for doubles, no timestamps, '\n' line ends).
namespace rattling::io {

// Shortest decimal string that parses back to exactly x.
std::string format_double(double x);

// Events CSV, header "node,time", one row per symmetric pair in log
// order.  tau_epsilon, if given, appends a "tau" column with the
// physical times eps^2 * t.
void write_event_csv(const solver::EventLog& log, const std::string& path,
                     std::optional<double> tau_epsilon = std::nullopt);

// Sidecar carrying everything the CSV does not: params, horizon,
// method, epsilon, and the tolerances of the run.
nlohmann::json event_log_meta(const solver::EventLog& log);
void write_event_meta(const solver::EventLog& log, const std::string& path);

// Inverse of the writer pair; validates the reassembled log.
solver::EventLog read_event_log(const std::string& csv_path,
                                const std::string& meta_path);

nlohmann::json report_json(const analysis::RattlingReport& rep);

// Quadratic-remainder table: "node,time,omega" with
// omega = t_k - a k^2 for every event past node 0.
void write_omega_csv(const solver::EventLog& log, double a,
                     const std::string& path);

// "lambda,a_value_eq,a_gradient_eq,a_rate_eq,max_disagreement"
void write_astar_csv(const std::vector<analysis::AsymptoticConstants>& rows,
                     const std::string& path);

// Long-format profile samples of the three scaled kernels:
// "a,x,F,G,H", interior x grid (midpoints, endpoints excluded since H
// diverges at x = 1).
void write_fgh_profile_csv(const std::vector<double>& a_values, int samples,
                           const std::string& path);

// Membership table "n,member" for n = 0..limit.
void write_pattern_csv(const patterns::PatternSet& set,
                       const std::string& path);

// "n,metric" at the requested member nodes.
void write_metric_csv(const patterns::PatternSet& set,
                      const std::vector<long long>& nodes,
                      const std::string& path);

// Per-level summary "level,M,ratio,metric" (M exact, ratio = m_j/M_j;
// metric is nan at levels with no countable members).
void write_counterexample_csv(const patterns::BigPatternSet& set,
                              const std::string& path);

// Solution snapshots "time,node,u" on n = 0..n_max at the given times.
void write_profile_csv(const solver::EventLog& log,
                       const std::vector<double>& times, long long n_max,
                       const std::string& path, green::GreenEvaluator& g);

void write_json(const nlohmann::json& j, const std::string& path);

} // namespace rattling::io

#endif
