#pragma once

#include "robsvm/qp.hpp"

namespace robsvm::detail {

// Interior-point core; assumes the problem is feasible (phase one, when
// requested, runs in solve() before this).
QPSolution ipm_solve(const QuadraticProgram& qp, const SolveOptions& opts);

}  // namespace robsvm::detail
