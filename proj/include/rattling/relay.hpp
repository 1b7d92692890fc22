#ifndef RATTLING_RELAY_HPP
#define RATTLING_RELAY_HPP

#include <optional>
#include <stdexcept>

namespace rattling::relay {

// Model parameters (h1, h2, c).  The constructor enforces
// -h2 <= 0 < 2c < h1, the standing assumption of the model.
struct ModelParams {
    double h1;
    double h2;
    double c;

    ModelParams(double h1_, double h2_, double c_) : h1(h1_), h2(h2_), c(c_) {
        if (!(h2 >= 0.0) || !(c > 0.0) || !(2.0 * c < h1))
            throw std::domain_error(
                "ModelParams: need h2 >= 0 and 0 < 2c < h1");
    }

    double lambda() const noexcept { return h1 / c; } // the only ratio a* sees
};

// Per-node memory of the non-ideal relay with threshold 0: output h1
// until the input first reaches 0, output -h2 ever after.  Monotone:
// once switched, never reverts.
struct RelayState {
    bool switched = false;
    std::optional<double> switch_time; // present iff switched
    double last_update_time = 0.0;     // guards monotone update order
};

// Current output of the relay branch.
inline double relay_output(const RelayState& state, const ModelParams& params) {
    return state.switched ? -params.h2 : params.h1;
}

// Feed one sample (value at `time`) to the relay.  Times must be
// nondecreasing per node.  Switches exactly when value >= 0 and not
// yet switched; resolving the crossing time to tolerance is the
// caller's job, the threshold test itself is exact.
inline RelayState relay_update(const RelayState& state, double value,
                               double time) {
    if (time < state.last_update_time)
        throw std::domain_error("relay_update: time must be nondecreasing");
    RelayState next = state;
    next.last_update_time = time;
    if (!next.switched && value >= 0.0) {
        next.switched = true;
        next.switch_time = time;
    }
    return next;
}

// Initial relay state for node n under initial data u_n(0) = -c n^2:
// node 0 starts on the threshold and is switched at time 0, every
// other node starts strictly below.
inline RelayState init_relay(long long n, const ModelParams&) {
    RelayState s;
    if (n == 0) {
        s.switched = true;
        s.switch_time = 0.0;
    }
    return s;
}

} // namespace rattling::relay

#endif
