#include "bswsn/states.hpp"

namespace bswsn {

LeaderState LeaderState::initial(const Scenario& s) {
  const auto n = static_cast<size_t>(s.n_tags());
  LeaderState st;
  st.p_t.assign(n, 0.5 * s.params.p_t_max);
  st.rho = 0.5;
  st.channel.assign(n, 0);
  st.alpha.assign(n, 0.0);
  st.beta.assign(n, 0.0);
  st.mu.assign(n, 0.0);
  st.gamma.assign(n, 0.0);
  return st;
}

FollowerState FollowerState::initial(const Scenario& s) {
  FollowerState st;
  st.zeta.assign(static_cast<size_t>(s.n_tags()), 0.0);
  return st;
}

double coefficient_a_tag(const Scenario& s, int n) {
  const auto i = static_cast<size_t>(n);
  return coefficient_a(1, s.params, s.gains[i].h, s.tags[i].time_slot);
}

std::vector<double> duty_signal(const LeaderState& leader, const Scenario& s) {
  const double rr = leader.rho * (1.0 - leader.rho);
  std::vector<double> x(leader.p_t.size());
  for (size_t n = 0; n < x.size(); ++n)
    x[n] = rr * leader.p_t[n] * coefficient_a_tag(s, static_cast<int>(n));
  return x;
}

std::vector<double> observed_interference(const LeaderState& leader,
                                          const InterferenceProfile& profile,
                                          const Scenario& s) {
  std::vector<double> p(leader.channel.size());
  for (size_t n = 0; n < p.size(); ++n)
    p[n] = profile.on_channel(leader.channel[n], s.params);
  return p;
}

}  // namespace bswsn
