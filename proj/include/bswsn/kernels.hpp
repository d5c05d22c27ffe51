#pragma once

#include <cstddef>
#include <span>

// Batched objective evaluation used by the grid oracles. Scalar reference
// kernels plus AVX2 variants selected at runtime; both lanes use only IEEE
// mul/add/div/sqrt in the same per-point order, so results are bit-identical.
namespace bswsn::kernels {

// L_I over a batch of interference powers:
//   out[i] = -sum_n x[n] / (p[i]*l[n] + nb) - c_i*p[i] + zeta_sum*(p_i_max - p[i])
struct FollowerBatchArgs {
  std::span<const double> x;  // per-tag duty-weighted signal rho*(1-rho)*P_t*A
  std::span<const double> l;  // per-tag interference gains
  double nb;                  // noise power
  double c_i;                 // interference power price
  double zeta_sum;            // sum of multipliers
  double p_i_max;
};
void follower_lagrangian_batch(std::span<const double> p_i, std::span<double> out,
                               const FollowerBatchArgs& args);

// One tag's contribution to L_B over a batch of transmit powers at fixed rho:
//   s(P) = sa * P
//   anticipated: q = sqrt(s*lc); D = clamp(q, nb, qcap); signal = s/D
//   myopic:      signal = s/d_obs
//   out[i] = signal + lin*p[i] + cst
struct LeaderTagBatchArgs {
  bool anticipated;
  double sa;     // rho*(1-rho)*A_n
  double lc;     // l_n / C_n           (anticipated path)
  double qcap;   // p_i_max*l_n + nb    (anticipated path)
  double d_obs;  // observed denominator (myopic path)
  double nb;     // noise power
  double lin;    // coefficient of P: costs, multipliers, alpha-SINR term
  double cst;    // P-independent terms carried for value-exact comparisons
};
void leader_tag_objective_batch(std::span<const double> p_t, std::span<double> out,
                                const LeaderTagBatchArgs& args);

// Index of the maximum, lowest index on ties. Deterministic regardless of
// how the values were produced.
std::size_t argmax_lowest_index(std::span<const double> values);

bool avx2_available();
void set_force_scalar(bool force);  // also honors BSWSN_FORCE_SCALAR=1 env
bool using_avx2();

// Scalar reference entry points, exposed for equivalence tests.
namespace scalar {
void follower_lagrangian_batch(std::span<const double> p_i, std::span<double> out,
                               const FollowerBatchArgs& args);
void leader_tag_objective_batch(std::span<const double> p_t, std::span<double> out,
                                const LeaderTagBatchArgs& args);
}  // namespace scalar

}  // namespace bswsn::kernels
