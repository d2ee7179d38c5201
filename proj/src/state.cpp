#include "cnet/state.hpp"

namespace cnet {

Loan make_loan(double principal, double rate) {
  return Loan{principal, rate, (1.0 + rate) * principal};
}

DownstreamFirm new_downstream_firm(std::size_t id, const Parameters& p) {
  DownstreamFirm f;
  f.id = id;
  f.net_worth = p.a0;
  return f;
}

UpstreamFirm new_upstream_firm(std::size_t id, const Parameters& p) {
  UpstreamFirm f;
  f.id = id;
  f.net_worth = p.a0;
  return f;
}

Bank new_bank(std::size_t id, const Parameters& p) {
  Bank b;
  b.id = id;
  b.equity = p.e0;
  return b;
}

EconomyState init_economy(const Parameters& p) {
  validate_params(p);
  const auto n = static_cast<std::size_t>(p.n_agents);
  EconomyState s;
  s.t = 1;
  s.topology = build_topology(n);
  s.downstream.reserve(n);
  s.upstream.reserve(n);
  s.banks.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.downstream.push_back(new_downstream_firm(i, p));
    s.upstream.push_back(new_upstream_firm(i, p));
    s.banks.push_back(new_bank(i, p));
  }
  s.median_d = p.a0;
  s.median_u = p.a0;
  return s;
}

}  // namespace cnet
