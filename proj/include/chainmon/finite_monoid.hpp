#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "chainmon/rational.hpp"

namespace chainmon {

/// A finite monoid as a multiplication table. The composition convention
/// is "apply the left factor first" throughout: mul(a, b) acts as a-then-b,
/// so right translation x -> x*s post-composes s.
class FiniteMonoid {
 public:
  FiniteMonoid(std::size_t size, std::size_t identity, std::vector<std::uint16_t> table,
               std::vector<std::string> labels = {});

  std::size_t size() const { return size_; }
  std::size_t identity() const { return identity_; }
  std::size_t mul(std::size_t a, std::size_t b) const { return table_[a * size_ + b]; }
  const std::vector<std::string>& labels() const { return labels_; }

  nlohmann::json to_json() const;
  static FiniteMonoid from_json(const nlohmann::json& j);

 private:
  std::size_t size_, identity_;
  std::vector<std::uint16_t> table_;
  std::vector<std::string> labels_;

  void validate() const;  // associativity and identity laws, every entry in range
};

/// End(n): all order-preserving self-maps of {1,...,n}, enumerated as
/// nondecreasing value lists in lexicographic order.
struct EndMonoid {
  std::size_t n = 0;
  FiniteMonoid monoid;
  std::vector<std::vector<std::uint8_t>> maps;

  std::size_t identity() const { return monoid.identity(); }
  std::size_t index_of(const std::vector<std::uint8_t>& values) const;
  std::size_t constant(std::size_t k) const;  // c_k, the map with value k everywhere
  std::size_t apply(std::size_t map_index, std::size_t x) const {  // 1-based point
    return maps[map_index][x - 1];
  }
};

/// Throws BudgetError when n exceeds max_n (|End(n)| grows as
/// binomial(2n-1, n-1); the default keeps tables around a few MB).
EndMonoid end_monoid(std::size_t n, std::size_t max_n = 7);

}  // namespace chainmon
