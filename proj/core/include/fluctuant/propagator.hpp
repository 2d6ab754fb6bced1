#pragma once

#include <Eigen/Dense>

#include "fluctuant/protocol.hpp"
#include "fluctuant/quantum_model.hpp"

namespace fluctuant {

// Time-ordered evolution over [0, t_end] as a product of piecewise-constant
// slices, each with the drive frozen at its midpoint time:
//   U = exp(-i H(L_(N-1/2)) dt / hbar) ... exp(-i H(L_(1/2)) dt / hbar),
// latest factor leftmost, dt = t_end / slices. Exact for constant protocols at
// any slice count; otherwise second-order accurate in dt.
Eigen::MatrixXcd propagator_over(const QuantumModel& m, const ForceProtocol& p, double t_end,
                                 std::size_t slices);

// Full-duration propagator U_(tau,0).
Eigen::MatrixXcd propagator(const QuantumModel& m, const ForceProtocol& p, std::size_t slices);

}  // namespace fluctuant
