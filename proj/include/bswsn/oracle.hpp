#pragma once

#include <functional>
#include <span>
#include <vector>

#include "bswsn/states.hpp"
#include "bswsn/wsn.hpp"

// Brute-force and finite-difference verifiers. These call only the utility
// and Lagrangian evaluators, never the closed-form solvers, so they certify
// the solvers from an independent route.
namespace bswsn {

struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  int resolution = 10000;    // points per axis
  int refinement_passes = 2;
  double zoom = 10.0;

  void validate() const;
};

struct GridMax1D {
  double arg = 0.0;
  double value = 0.0;
};

// Exhaustive maximization of L_I over P_I in [grid.lo, grid.hi] with
// refinement passes around the incumbent; ties break to the lower grid index.
GridMax1D grid_max_follower(const LeaderState& leader, int attacked_channel, const Scenario& s,
                            const std::vector<double>& zeta, GridSpec grid);

struct GridMaxLeader {
  std::vector<double> p_t;
  double rho = 0.0;
  double value = 0.0;
};

// Exhaustive maximization of L_B over [p_grid] per tag x [rho_grid]. L_B is
// separable across tags at fixed rho, so each rho point costs N 1-D scans.
GridMaxLeader grid_max_leader(const InterferenceProfile& observed, const Scenario& s,
                              const LeaderState& multipliers, const std::vector<double>& zeta,
                              LeaderMode mode, GridSpec p_grid, GridSpec rho_grid);

struct HessianVerdict {
  double m[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  int dim = 1;
  bool negative_definite = false;
};

// Central-difference Hessian at an interior point; throws ModelError when the
// stencil would leave [lo, hi].
HessianVerdict finite_diff_hessian(const std::function<double(std::span<const double>)>& f,
                                   std::span<const double> point, std::span<const double> steps,
                                   std::span<const double> lo, std::span<const double> hi);

// Central-difference gradient, used to validate the analytic residuals.
std::vector<double> finite_diff_gradient(const std::function<double(std::span<const double>)>& f,
                                         std::span<const double> point,
                                         std::span<const double> steps);

}  // namespace bswsn
