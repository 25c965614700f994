#pragma once

#include "secular/core.hpp"

// Shared default parameter set for tests: equal masses (1,1,1), L1 = 1,
// L2 = 2, delta = 0.5 (so e2 = sqrt(3)/2, a1 = 2, a2 = 3, K = 128 sqrt(3)/81).
inline secular::SecularParams test_params(double L1 = 1.0, double Gamma = 0.3) {
    const secular::SystemParams sys = secular::derive_system(1.0, 1.0, 1.0);
    return secular::make_secular(sys, L1, 2.0, 0.5, Gamma);
}
