#pragma once

#include "quanv/network.hpp"

namespace gradcheck {

struct Result {
    double max_rel_err = 0.0;
    std::size_t checked = 0;     // parameters with |g| above the floor
    std::size_t skipped = 0;     // parameters below it
};

/// Central finite differences on every trainable parameter against
/// backward()'s analytic gradient, with BCE against `target` as the
/// scalar loss. The network is evaluated in eval mode (dropout
/// identity) so the differentiated function is deterministic.
/// Parameters with |g| <= grad_floor are skipped, matching the check's
/// relative-error contract.
Result check_parameters(quanv::Network& net, const quanv::DArray& input,
                        const quanv::DArray& target, double h, double grad_floor = 1e-6);

} // namespace gradcheck
