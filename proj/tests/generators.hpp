#pragma once

#include <random>

#include "chainmon/chain.hpp"

namespace chainmon::testgen {

// seeded random term generator; Real appears with low weight so most terms
// stay countable
inline ChainPtr random_expr(std::mt19937_64& rng, int depth = 0) {
  std::uniform_int_distribution<int> d(0, depth >= 4 ? 7 : 11);
  switch (d(rng)) {
    case 0:
      return ChainExpr::finite(std::uniform_int_distribution<int>(0, 4)(rng));
    case 1:
      return ChainExpr::nat();
    case 2:
      return ChainExpr::nat_star();
    case 3:
      return ChainExpr::integers();
    case 4:
      return ChainExpr::rationals();
    case 5:
      return ChainExpr::finite(std::uniform_int_distribution<int>(1, 3)(rng));
    case 6:
      return ChainExpr::nat();
    case 7:
      return std::uniform_int_distribution<int>(0, 9)(rng) == 0 ? ChainExpr::reals()
                                                                : ChainExpr::rationals();
    case 8:
    case 9:
      return ChainExpr::sum(random_expr(rng, depth + 1), random_expr(rng, depth + 1));
    case 10:
      return ChainExpr::lex(random_expr(rng, depth + 1), random_expr(rng, depth + 1));
    default:
      return ChainExpr::rev(random_expr(rng, depth + 1));
  }
}

inline ChainPtr random_countable_expr(std::mt19937_64& rng) {
  for (int tries = 0; tries < 200; ++tries) {
    ChainPtr e = random_expr(rng);
    if (!contains_real(e)) return e;
  }
  return ChainExpr::nat();
}

}  // namespace chainmon::testgen
