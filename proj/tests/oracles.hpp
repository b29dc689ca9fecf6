#pragma once

// Test-side reference implementations, kept independent of the library's
// code paths on purpose: plain adjacency lists rebuilt per query, queue
// BFS, direct formula checks.

#include <cstdint>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "chainmon/congruence.hpp"

namespace chainmon::oracle {

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline std::vector<std::vector<std::size_t>> derivation_adjacency(
    const FiniteMonoid& s, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
    CongSide side) {
  const std::size_t m = s.size();
  std::vector<std::set<std::size_t>> adj(m);
  for (const auto& [u, v] : pairs) {
    for (std::size_t t = 0; t < m; ++t) {
      std::size_t a = side == CongSide::Right ? s.mul(u, t) : s.mul(t, u);
      std::size_t b = side == CongSide::Right ? s.mul(v, t) : s.mul(t, v);
      adj[a].insert(b);
      adj[b].insert(a);
    }
  }
  std::vector<std::vector<std::size_t>> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i].assign(adj[i].begin(), adj[i].end());
  return out;
}

inline std::optional<unsigned> bfs_distance(const std::vector<std::vector<std::size_t>>& adj,
                                            std::size_t a, std::size_t b) {
  if (a == b) return 0u;
  std::vector<int> dist(adj.size(), -1);
  std::queue<std::size_t> q;
  dist[a] = 0;
  q.push(a);
  while (!q.empty()) {
    std::size_t x = q.front();
    q.pop();
    for (std::size_t y : adj[x]) {
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        q.push(y);
      }
    }
  }
  if (dist[b] < 0) return std::nullopt;
  return static_cast<unsigned>(dist[b]);
}

inline std::optional<unsigned> bfs_diameter(const FiniteMonoid& s,
                                            const std::vector<std::size_t>& gens, CongSide side) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a : gens)
    for (std::size_t b : gens) pairs.push_back({a, b});
  auto adj = derivation_adjacency(s, pairs, side);
  unsigned best = 0;
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = 0; b < s.size(); ++b) {
      auto d = bfs_distance(adj, a, b);
      if (!d) return std::nullopt;
      best = std::max(best, *d);
    }
  return best;
}

// exhaustive search for an element making alpha regular
inline bool regular_by_search(const EndMonoid& em, std::size_t alpha) {
  const FiniteMonoid& s = em.monoid;
  for (std::size_t beta = 0; beta < s.size(); ++beta)
    if (s.mul(s.mul(alpha, beta), alpha) == alpha) return true;
  return false;
}

}  // namespace chainmon::oracle
