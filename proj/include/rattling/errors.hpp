#ifndef RATTLING_ERRORS_HPP
#define RATTLING_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rattling {

// Thrown when an iterative numerical procedure fails to reach its
// requested tolerance (quadrature non-convergence, root bracketing
// failure, stalled event search).
class accuracy_error : public std::runtime_error {
public:
    explicit accuracy_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a computed result violates a structural invariant that
// the model guarantees (unsorted events, sign violations, boundary
// switching on a truncated lattice).
class invariant_error : public std::runtime_error {
public:
    explicit invariant_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace rattling

#endif
