#include "cnet/topology.hpp"

#include <stdexcept>
#include <string>

namespace cnet {

Topology build_topology(std::size_t n) {
  if (n < 3) {
    throw std::invalid_argument("ring size must be at least 3, got " + std::to_string(n));
  }
  Topology t;
  t.n_ = n;
  t.suppliers_.resize(n);
  t.customers_.resize(n);
  t.neighbors_.resize(n);
  t.bank_of_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t next = (i + 1) % n;
    const std::size_t prev = (i + n - 1) % n;
    t.suppliers_[i] = {i, next};
    t.customers_[i] = {prev, i};
    t.neighbors_[i] = {prev, next};
    t.bank_of_[i] = i;
  }
  return t;
}

}  // namespace cnet
