#pragma once

#include <cstddef>
#include <vector>

#include "welfair/dataset.hpp"
#include "welfair/fairmetrics.hpp"
#include "welfair/model.hpp"
#include "welfair/solver.hpp"

// Heuristic repair mechanisms for regression models: capping pairwise
// prediction gaps (optionally through a compressed point set), and pinning
// the benefit distribution's mean while bounding its squared spread.

namespace welfair {

struct PairConstraint {
  std::size_t i = 0;   // i < j
  std::size_t j = 0;
  double bound = 0.0;  // >= 0, allowed gap |t_i - t_j|
};

struct MechanismConfig {
  double tol_c = 1e-6;   // constraint satisfaction target
  double tol_g = 1e-8;   // inner stationarity tolerance
  std::size_t max_inner = 20000;
  std::size_t penalty_rounds = 10;  // pairwise-penalty escalation budget
  double penalty_growth = 10.0;
  std::size_t al_rounds = 30;  // multiplier updates for the mean equality
  double al_tol = 1e-8;        // |mean benefit - mu| target
  double lambda_max = 1e12;
  std::size_t max_outer = 200;
  std::size_t distance_cap = 10000;  // dense pairwise-distance threshold
  // Take the spread constraint as printed in its source, a lower bound on
  // the squared spread. That direction rewards inequality and is kept only
  // for reproduction; the default bounds the spread from above.
  bool literal_lower_bound = false;
};

struct MechanismResult {
  LinearModel model;
  std::size_t added_constraints = 0;  // pairwise caps enforced
  // Violations are measured against the full pairwise set, not just the
  // enforced subset. Zero for the mean/spread mechanism.
  double max_violation = 0.0;
  double avg_violation = 0.0;
  SolveStatus status = SolveStatus::optimal;
  double mu = 0.0;                // winning mean benefit (mean/spread only)
  std::size_t skipped_grid = 0;   // infeasible mean levels skipped
};

// Fits the plain least-squares model, finds the pairs whose prediction gap
// exceeds its distance bound by at least delta, and refits with those pairs
// capped (squared-hinge penalty, weight escalated until every enforced pair
// is within tol_c). delta at or above the worst initial violation returns
// the plain fit unchanged. Throws NonConvergence when escalation runs out.
MechanismResult dwork_delta_mechanism(const Dataset& d, double delta,
                                      const DistanceMatrix& distances,
                                      const MechanismConfig& config = {});

// Greedy farthest-point cover of the feature rows under the normalized
// Euclidean distance, started from row 0: every row ends up within eps of a
// representative and representatives sit pairwise farther than eps apart.
// Returned indices are sorted.
std::vector<std::size_t> epsilon_net(const Dataset& d, double eps,
                                     std::size_t distance_cap = 10000);

// Least squares with the gap caps enforced on every representative pair of
// the eps-net (same penalty scheme as dwork_delta_mechanism).
MechanismResult epsilon_net_mechanism(const Dataset& d, double eps,
                                      const MechanismConfig& config = {});

// 21 mean-benefit levels spanning 0.5x to 1.5x the plain fit's mean benefit.
std::vector<double> default_mu_grid(const Dataset& d);

// For each mean level mu: least squares subject to mean benefit = mu (kept
// by an augmented Lagrangian) and mean squared benefit <= mu^2 (1 + 2 tau)
// (multiplier bisection), which caps the generalized-entropy spread at tau.
// tau = 0 demands a constant benefit profile and is solved by interpolation.
// Infeasible levels are skipped and counted; the feasible level with the
// smallest loss wins. Throws AllInfeasible when the whole grid is skipped.
MechanismResult speicher_mechanism(const Dataset& d, double tau,
                                   const std::vector<double>& mu_grid,
                                   const MechanismConfig& config = {});

}  // namespace welfair
