#pragma once

#include <cstddef>
#include <vector>

#include "welfair/dataset.hpp"
#include "welfair/model.hpp"
#include "welfair/solver.hpp"

// Pieces shared between the regression and classification solve paths.

namespace welfair::detail {

// Per-instance affine benefit in the raw score t = theta . x_i:
// b_i = a[i] * t_i + o[i]. Continuous benefits give slope 1; binary-domain
// benefits fold the score divisor into the slope.
void benefit_coeffs(const Dataset& d, const ConstraintSpec& spec,
                    std::vector<double>* a, std::vector<double>* o);

// Mean welfare minus tau at the model; -inf when any benefit is <= 0.
double welfare_gap(const Dataset& d, const ConstraintSpec& spec,
                   const LinearModel& m);

// Checks alpha/tau/scale ranges and the benefit-domain pairing for the task.
void validate_spec(const ConstraintSpec& spec, Task task);

// Rejects non-positive tolerances and budgets.
void validate_config(const SolverConfig& config);

struct FitDiag {
  std::size_t iters = 0;
  double grad_norm = 0.0;
  bool converged = false;
};

// Least-squares fit by descent (the closed form stays in the tests).
LinearModel ls_fit(const Dataset& d, const SolverConfig& config,
                   FitDiag* diag = nullptr);

// Best-of-restarts logistic fit on the unit sphere.
LinearModel sphere_logistic_fit(const Dataset& d, const SolverConfig& config,
                                FitDiag* diag = nullptr);

}  // namespace welfair::detail
