#include "bswsn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bswsn/kernels.hpp"

namespace bswsn {

namespace {

void linspace(double lo, double hi, int n, std::vector<double>& out) {
  out.resize(static_cast<size_t>(n));
  const double h = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = (i == n - 1) ? hi : lo + i * h;
}

struct Window {
  double lo, hi;
  void shrink_around(double center, double zoom, double outer_lo, double outer_hi) {
    const double half = (hi - lo) / (2.0 * zoom);
    lo = std::max(outer_lo, center - half);
    hi = std::min(outer_hi, center + half);
    if (!(hi > lo)) {  // degenerate window at an outer corner
      lo = std::max(outer_lo, center - 1e-15 * (1.0 + std::abs(center)));
      hi = std::min(outer_hi, center + 1e-15 * (1.0 + std::abs(center)));
      if (!(hi > lo)) {
        lo = outer_lo;
        hi = outer_hi;
      }
    }
  }
};

}  // namespace

void GridSpec::validate() const {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi))
    throw ModelError("GridSpec: bounds must be finite with lo < hi");
  if (resolution < 16) throw ModelError("GridSpec: resolution must be >= 16");
  if (refinement_passes < 0) throw ModelError("GridSpec: refinement_passes must be >= 0");
  if (!(zoom > 1.0)) throw ModelError("GridSpec: zoom must be > 1");
}

GridMax1D grid_max_follower(const LeaderState& leader, int attacked_channel, const Scenario& s,
                            const std::vector<double>& zeta, GridSpec grid) {
  grid.validate();
  const auto x_all = duty_signal(leader, s);
  std::vector<double> x, l;
  for (size_t n = 0; n < x_all.size(); ++n) {
    if (leader.channel[n] != attacked_channel) continue;
    x.push_back(x_all[n]);
    l.push_back(s.gains[n].l);
  }
  double zeta_sum = 0.0;
  for (double z : zeta) zeta_sum += z;
  const kernels::FollowerBatchArgs args{x, l, s.params.noise_power, s.params.cost_interferer,
                                        zeta_sum, s.params.p_i_max};

  Window w{grid.lo, grid.hi};
  std::vector<double> points, values;
  GridMax1D best{grid.lo, -std::numeric_limits<double>::infinity()};
  for (int pass = 0; pass <= grid.refinement_passes; ++pass) {
    linspace(w.lo, w.hi, grid.resolution, points);
    values.resize(points.size());
    kernels::follower_lagrangian_batch(points, values, args);
    const size_t idx = kernels::argmax_lowest_index(values);
    if (values[idx] > best.value) best = {points[idx], values[idx]};
    w.shrink_around(points[idx], grid.zoom, grid.lo, grid.hi);
  }
  return best;
}

GridMaxLeader grid_max_leader(const InterferenceProfile& observed, const Scenario& s,
                              const LeaderState& multipliers, const std::vector<double>& zeta,
                              LeaderMode mode, GridSpec p_grid, GridSpec rho_grid) {
  p_grid.validate();
  rho_grid.validate();
  const auto n_tags = multipliers.p_t.size();

  std::vector<Window> pw(n_tags, Window{p_grid.lo, p_grid.hi});
  Window rw{rho_grid.lo, rho_grid.hi};

  GridMaxLeader best;
  best.p_t.assign(n_tags, p_grid.lo);
  best.rho = rho_grid.lo;
  best.value = -std::numeric_limits<double>::infinity();

  std::vector<double> rho_points, p_points, values;
  std::vector<std::vector<double>> p_points_per_tag(n_tags);

  for (int pass = 0; pass <= rho_grid.refinement_passes; ++pass) {
    linspace(rw.lo, rw.hi, rho_grid.resolution, rho_points);
    for (size_t n = 0; n < n_tags; ++n)
      linspace(pw[n].lo, pw[n].hi, p_grid.resolution, p_points_per_tag[n]);

    GridMaxLeader pass_best = best;
    bool pass_found = false;
    std::vector<double> arg_p(n_tags);
    for (double rho : rho_points) {
      double total = multipliers.nu * (1.0 - rho) + multipliers.tau * rho;
      for (size_t n = 0; n < n_tags; ++n) {
        const auto args = leader_tag_batch_args(static_cast<int>(n), rho, multipliers, observed,
                                                s, zeta, mode);
        values.resize(p_points_per_tag[n].size());
        kernels::leader_tag_objective_batch(p_points_per_tag[n], values, args);
        const size_t idx = kernels::argmax_lowest_index(values);
        arg_p[n] = p_points_per_tag[n][idx];
        total += values[idx];
      }
      if (total > pass_best.value) {
        pass_best.value = total;
        pass_best.rho = rho;
        pass_best.p_t = arg_p;
        pass_found = true;
      }
    }
    if (pass_found) best = pass_best;
    rw.shrink_around(best.rho, rho_grid.zoom, rho_grid.lo, rho_grid.hi);
    for (size_t n = 0; n < n_tags; ++n)
      pw[n].shrink_around(best.p_t[n], p_grid.zoom, p_grid.lo, p_grid.hi);
  }
  return best;
}

HessianVerdict finite_diff_hessian(const std::function<double(std::span<const double>)>& f,
                                   std::span<const double> point, std::span<const double> steps,
                                   std::span<const double> lo, std::span<const double> hi) {
  const int dim = static_cast<int>(point.size());
  if (dim < 1 || dim > 2) throw ModelError("finite_diff_hessian: dimension must be 1 or 2");
  for (int i = 0; i < dim; ++i) {
    if (point[i] - steps[i] < lo[i] || point[i] + steps[i] > hi[i])
      throw ModelError("finite_diff_hessian: point too near the boundary for the step");
  }

  std::vector<double> p(point.begin(), point.end());
  auto eval = [&](double d0, double d1) {
    std::vector<double> q = p;
    q[0] += d0;
    if (dim > 1) q[1] += d1;
    return f(q);
  };

  HessianVerdict v;
  v.dim = dim;
  const double f0 = f(p);
  v.m[0][0] = (eval(steps[0], 0.0) - 2.0 * f0 + eval(-steps[0], 0.0)) / (steps[0] * steps[0]);
  if (dim == 2) {
    v.m[1][1] = (eval(0.0, steps[1]) - 2.0 * f0 + eval(0.0, -steps[1])) / (steps[1] * steps[1]);
    v.m[0][1] = v.m[1][0] =
        (eval(steps[0], steps[1]) - eval(steps[0], -steps[1]) - eval(-steps[0], steps[1]) +
         eval(-steps[0], -steps[1])) /
        (4.0 * steps[0] * steps[1]);
    const double det = v.m[0][0] * v.m[1][1] - v.m[0][1] * v.m[1][0];
    v.negative_definite = v.m[0][0] < 0.0 && det > 0.0;
  } else {
    v.negative_definite = v.m[0][0] < 0.0;
  }
  return v;
}

std::vector<double> finite_diff_gradient(const std::function<double(std::span<const double>)>& f,
                                         std::span<const double> point,
                                         std::span<const double> steps) {
  std::vector<double> g(point.size());
  std::vector<double> p(point.begin(), point.end());
  for (size_t i = 0; i < p.size(); ++i) {
    const double saved = p[i];
    p[i] = saved + steps[i];
    const double fp = f(p);
    p[i] = saved - steps[i];
    const double fm = f(p);
    p[i] = saved;
    g[i] = (fp - fm) / (2.0 * steps[i]);
  }
  return g;
}

}  // namespace bswsn
