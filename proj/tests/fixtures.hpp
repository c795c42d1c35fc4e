#pragma once

#include "conic/terminal_law.hpp"

namespace fixtures {

// Reference point used throughout the suites: s0=100, r=5%, sigma=0.2,
// epsilon=0.1, H=0.8, T=1, one jump a year with log-size N(-0.05, 0.02).
inline conic::ModelParams pstar_model() { return {100.0, 0.05, 0.2, 0.1, 0.8, 1.0}; }
inline conic::JumpParams pstar_jumps() { return {1.0, -0.05, 0.02}; }

inline conic::TerminalLaw pstar_law(
    conic::DriftConvention conv = conic::DriftConvention::Compensated, double tail_tol = 1e-12) {
    return conic::TerminalLaw::build(pstar_model(), pstar_jumps(), conv, tail_tol);
}

inline conic::TerminalLaw no_jump_law(double hurst = 0.8) {
    conic::ModelParams m = pstar_model();
    m.hurst = hurst;
    return conic::TerminalLaw::build(m, {}, conic::DriftConvention::Compensated, 1e-12);
}

}  // namespace fixtures
