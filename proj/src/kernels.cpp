#include "bswsn/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>

#if defined(__GNUC__) || defined(__clang__)
#include <immintrin.h>
#define BSWSN_X86_TARGETS 1
#endif

namespace bswsn::kernels {

namespace {
std::atomic<bool> g_force_scalar{false};

bool env_force_scalar() {
  static const bool v = [] {
    const char* e = std::getenv("BSWSN_FORCE_SCALAR");
    return e != nullptr && e[0] == '1';
  }();
  return v;
}
}  // namespace

void set_force_scalar(bool force) { g_force_scalar.store(force, std::memory_order_relaxed); }

bool avx2_available() {
#ifdef BSWSN_X86_TARGETS
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

bool using_avx2() {
  return avx2_available() && !g_force_scalar.load(std::memory_order_relaxed) &&
         !env_force_scalar();
}

namespace scalar {

void follower_lagrangian_batch(std::span<const double> p_i, std::span<double> out,
                               const FollowerBatchArgs& a) {
  const std::size_t n_tags = a.x.size();
  for (std::size_t i = 0; i < p_i.size(); ++i) {
    const double p = p_i[i];
    double acc = 0.0;
    for (std::size_t n = 0; n < n_tags; ++n) {
      const double den = p * a.l[n] + a.nb;
      acc = acc + a.x[n] / den;
    }
    const double cost = a.c_i * p;
    const double zterm = a.zeta_sum * (a.p_i_max - p);
    out[i] = zterm - (acc + cost);
  }
}

void leader_tag_objective_batch(std::span<const double> p_t, std::span<double> out,
                                const LeaderTagBatchArgs& a) {
  if (a.anticipated) {
    for (std::size_t i = 0; i < p_t.size(); ++i) {
      const double p = p_t[i];
      const double s = a.sa * p;
      double d = std::sqrt(s * a.lc);
      if (d <= a.nb) d = a.nb;
      if (d >= a.qcap) d = a.qcap;
      const double sig = s / d;
      out[i] = sig + a.lin * p + a.cst;
    }
  } else {
    for (std::size_t i = 0; i < p_t.size(); ++i) {
      const double p = p_t[i];
      const double s = a.sa * p;
      const double sig = s / a.d_obs;
      out[i] = sig + a.lin * p + a.cst;
    }
  }
}

}  // namespace scalar

#ifdef BSWSN_X86_TARGETS
namespace avx2 {

__attribute__((target("avx2"))) static void follower_lagrangian_batch(
    std::span<const double> p_i, std::span<double> out, const FollowerBatchArgs& a) {
  const std::size_t n_tags = a.x.size();
  const __m256d nb = _mm256_set1_pd(a.nb);
  const __m256d ci = _mm256_set1_pd(a.c_i);
  const __m256d zs = _mm256_set1_pd(a.zeta_sum);
  const __m256d pmax = _mm256_set1_pd(a.p_i_max);
  std::size_t i = 0;
  for (; i + 4 <= p_i.size(); i += 4) {
    const __m256d p = _mm256_loadu_pd(p_i.data() + i);
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t n = 0; n < n_tags; ++n) {
      const __m256d ln = _mm256_set1_pd(a.l[n]);
      const __m256d xn = _mm256_set1_pd(a.x[n]);
      const __m256d den = _mm256_add_pd(_mm256_mul_pd(p, ln), nb);
      acc = _mm256_add_pd(acc, _mm256_div_pd(xn, den));
    }
    const __m256d cost = _mm256_mul_pd(ci, p);
    const __m256d zterm = _mm256_mul_pd(zs, _mm256_sub_pd(pmax, p));
    _mm256_storeu_pd(out.data() + i, _mm256_sub_pd(zterm, _mm256_add_pd(acc, cost)));
  }
  if (i < p_i.size())
    scalar::follower_lagrangian_batch(p_i.subspan(i), out.subspan(i), a);
}

__attribute__((target("avx2"))) static void leader_tag_objective_batch(
    std::span<const double> p_t, std::span<double> out, const LeaderTagBatchArgs& a) {
  const __m256d sa = _mm256_set1_pd(a.sa);
  const __m256d lin = _mm256_set1_pd(a.lin);
  const __m256d cst = _mm256_set1_pd(a.cst);
  std::size_t i = 0;
  if (a.anticipated) {
    const __m256d lc = _mm256_set1_pd(a.lc);
    const __m256d nb = _mm256_set1_pd(a.nb);
    const __m256d qcap = _mm256_set1_pd(a.qcap);
    for (; i + 4 <= p_t.size(); i += 4) {
      const __m256d p = _mm256_loadu_pd(p_t.data() + i);
      const __m256d s = _mm256_mul_pd(sa, p);
      __m256d d = _mm256_sqrt_pd(_mm256_mul_pd(s, lc));
      d = _mm256_blendv_pd(d, nb, _mm256_cmp_pd(d, nb, _CMP_LE_OQ));
      d = _mm256_blendv_pd(d, qcap, _mm256_cmp_pd(d, qcap, _CMP_GE_OQ));
      const __m256d sig = _mm256_div_pd(s, d);
      const __m256d r = _mm256_add_pd(_mm256_add_pd(sig, _mm256_mul_pd(lin, p)), cst);
      _mm256_storeu_pd(out.data() + i, r);
    }
  } else {
    const __m256d dob = _mm256_set1_pd(a.d_obs);
    for (; i + 4 <= p_t.size(); i += 4) {
      const __m256d p = _mm256_loadu_pd(p_t.data() + i);
      const __m256d s = _mm256_mul_pd(sa, p);
      const __m256d sig = _mm256_div_pd(s, dob);
      const __m256d r = _mm256_add_pd(_mm256_add_pd(sig, _mm256_mul_pd(lin, p)), cst);
      _mm256_storeu_pd(out.data() + i, r);
    }
  }
  if (i < p_t.size())
    scalar::leader_tag_objective_batch(p_t.subspan(i), out.subspan(i), a);
}

}  // namespace avx2
#endif  // BSWSN_X86_TARGETS

void follower_lagrangian_batch(std::span<const double> p_i, std::span<double> out,
                               const FollowerBatchArgs& args) {
#ifdef BSWSN_X86_TARGETS
  if (using_avx2()) {
    avx2::follower_lagrangian_batch(p_i, out, args);
    return;
  }
#endif
  scalar::follower_lagrangian_batch(p_i, out, args);
}

void leader_tag_objective_batch(std::span<const double> p_t, std::span<double> out,
                                const LeaderTagBatchArgs& args) {
#ifdef BSWSN_X86_TARGETS
  if (using_avx2()) {
    avx2::leader_tag_objective_batch(p_t, out, args);
    return;
  }
#endif
  scalar::leader_tag_objective_batch(p_t, out, args);
}

std::size_t argmax_lowest_index(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

}  // namespace bswsn::kernels
