#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace cnet {

using Pair = std::array<std::size_t, 2>;

/// Ring-of-rings wiring. All indices are 0-based.
///
/// Downstream i buys from upstream {i, i+1}; upstream j sells to downstream
/// {j-1, j}; firm i of either sector banks with bank i; bank z trades with
/// banks {z-1, z+1}. Every map wraps modulo n.
class Topology {
 public:
  Topology() = default;

  std::size_t size() const noexcept { return n_; }

  const Pair& suppliers(std::size_t downstream) const { return suppliers_.at(downstream); }
  const Pair& customers(std::size_t upstream) const { return customers_.at(upstream); }
  const Pair& neighbors(std::size_t bank) const { return neighbors_.at(bank); }
  std::size_t bank_of(std::size_t firm) const { return bank_of_.at(firm); }

 private:
  friend Topology build_topology(std::size_t n);

  std::size_t n_ = 0;
  std::vector<Pair> suppliers_;
  std::vector<Pair> customers_;
  std::vector<Pair> neighbors_;
  std::vector<std::size_t> bank_of_;
};

/// Throws std::invalid_argument for n < 3.
Topology build_topology(std::size_t n);

}  // namespace cnet
