#include "chainmon/congruence.hpp"

#include <algorithm>
#include <deque>

namespace chainmon {

std::vector<std::pair<std::size_t, std::size_t>> PairSet::materialize(std::size_t m) const {
  if (!full_) return pairs_;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) out.push_back({a, b});
  return out;
}

bool PairSet::contains(std::size_t a, std::size_t b) const {
  if (full_) return true;
  return std::find(pairs_.begin(), pairs_.end(), std::make_pair(a, b)) != pairs_.end();
}

std::vector<std::vector<std::size_t>> Partition::blocks() const {
  std::vector<std::vector<std::size_t>> out(block_count);
  for (std::size_t i = 0; i < block.size(); ++i) out[block[i]].push_back(i);
  return out;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

std::size_t translate(const FiniteMonoid& S, CongSide side, std::size_t x, std::size_t s) {
  return side == CongSide::Right ? S.mul(x, s) : S.mul(s, x);
}

void check_index(const FiniteMonoid& S, std::size_t i) {
  if (i >= S.size()) throw std::out_of_range("monoid element index out of range");
}

}  // namespace

Partition congruence_closure(const FiniteMonoid& S, const PairSet& U, CongSide side) {
  const std::size_t m = S.size();
  UnionFind uf(m);
  std::deque<std::pair<std::size_t, std::size_t>> work;
  for (const auto& [u, v] : U.materialize(m)) {
    check_index(S, u);
    check_index(S, v);
    if (uf.unite(u, v)) work.push_back({u, v});
  }
  // a merged pair forces its translates to merge; a worklist of realized
  // merges reaches the fixpoint because translation is a function
  while (!work.empty()) {
    auto [a, b] = work.front();
    work.pop_front();
    for (std::size_t s = 0; s < m; ++s) {
      std::size_t as = translate(S, side, a, s), bs = translate(S, side, b, s);
      if (uf.unite(as, bs)) work.push_back({as, bs});
    }
  }

  Partition p;
  p.block.assign(m, SIZE_MAX);
  std::vector<std::size_t> root_to_block(m, SIZE_MAX);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t r = uf.find(i);
    if (root_to_block[r] == SIZE_MAX) root_to_block[r] = p.block_count++;
    p.block[i] = root_to_block[r];
  }
  return p;
}

namespace {

// adjacency as a bit matrix; all derivation graphs here are undirected
struct BitGraph {
  std::size_t n, words;
  std::vector<std::uint64_t> bits;
  explicit BitGraph(std::size_t n_) : n(n_), words((n_ + 63) / 64), bits(n_ * words, 0) {}
  void add_edge(std::size_t a, std::size_t b) {
    bits[a * words + b / 64] |= std::uint64_t{1} << (b % 64);
    bits[b * words + a / 64] |= std::uint64_t{1} << (a % 64);
  }
  template <typename F>
  void neighbors(std::size_t a, F&& f) const {
    const std::uint64_t* row = bits.data() + a * words;
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t x = row[w];
      while (x) {
        unsigned bit = static_cast<unsigned>(__builtin_ctzll(x));
        f(w * 64 + bit);
        x &= x - 1;
      }
    }
  }
};

BitGraph derivation_graph(const FiniteMonoid& S, const PairSet& U, CongSide side,
                          std::size_t max_size) {
  const std::size_t m = S.size();
  if (m > max_size) throw BudgetError("derivation graph budget exceeded");
  BitGraph g(m);
  if (U.is_full()) {
    for (std::size_t u = 0; u < m; ++u)
      for (std::size_t v = 0; v < m; ++v)
        for (std::size_t s = 0; s < m; ++s)
          g.add_edge(translate(S, side, u, s), translate(S, side, v, s));
  } else {
    for (const auto& [u, v] : U.pairs()) {
      check_index(S, u);
      check_index(S, v);
      for (std::size_t s = 0; s < m; ++s)
        g.add_edge(translate(S, side, u, s), translate(S, side, v, s));
    }
  }
  return g;
}

std::vector<unsigned> bfs_from(const BitGraph& g, std::size_t src) {
  std::vector<unsigned> dist(g.n, UINT_MAX);
  std::deque<std::size_t> q{src};
  dist[src] = 0;
  while (!q.empty()) {
    std::size_t x = q.front();
    q.pop_front();
    g.neighbors(x, [&](std::size_t y) {
      if (dist[y] == UINT_MAX) {
        dist[y] = dist[x] + 1;
        q.push_back(y);
      }
    });
  }
  return dist;
}

}  // namespace

std::optional<unsigned> distance(const FiniteMonoid& S, const PairSet& U, CongSide side,
                                 std::size_t a, std::size_t b, std::size_t max_size) {
  check_index(S, a);
  check_index(S, b);
  if (a == b) return 0u;
  BitGraph g = derivation_graph(S, U, side, max_size);
  auto dist = bfs_from(g, a);
  if (dist[b] == UINT_MAX) return std::nullopt;
  return dist[b];
}

std::optional<unsigned> diameter(const FiniteMonoid& S, const PairSet& U, CongSide side,
                                 std::size_t max_size) {
  BitGraph g = derivation_graph(S, U, side, max_size);
  unsigned best = 0;
  for (std::size_t a = 0; a < S.size(); ++a) {
    auto dist = bfs_from(g, a);
    for (unsigned d : dist) {
      if (d == UINT_MAX) return std::nullopt;
      best = std::max(best, d);
    }
  }
  return best;
}

bool diagonal_act_generated(const FiniteMonoid& S, const PairSet& U) {
  const std::size_t m = S.size();
  std::vector<bool> hit(m * m, false);
  std::size_t count = 0;
  auto mark = [&](std::size_t a, std::size_t b) {
    std::size_t i = a * m + b;
    if (!hit[i]) {
      hit[i] = true;
      ++count;
    }
  };
  for (const auto& [u, v] : U.materialize(m)) {
    check_index(S, u);
    check_index(S, v);
    for (std::size_t s = 0; s < m; ++s) mark(S.mul(u, s), S.mul(v, s));
  }
  return count == m * m;
}

bool validate_usequence(const FiniteMonoid& S, const PairSet& U, CongSide side, std::size_t a,
                        std::size_t b, const std::vector<USeqTriple>& seq) {
  check_index(S, a);
  check_index(S, b);
  if (seq.empty()) return a == b;
  auto term = [&](std::size_t u, std::size_t s) { return translate(S, side, u, s); };
  for (const auto& t : seq) {
    check_index(S, t.u);
    check_index(S, t.v);
    check_index(S, t.s);
    if (!U.contains(t.u, t.v) && !U.contains(t.v, t.u)) return false;
  }
  if (term(seq.front().u, seq.front().s) != a) return false;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    if (term(seq[i].v, seq[i].s) != term(seq[i + 1].u, seq[i + 1].s)) return false;
  }
  return term(seq.back().v, seq.back().s) == b;
}

std::optional<unsigned> min_diameter_over_subsets(const FiniteMonoid& S, CongSide side) {
  const std::size_t m = S.size();
  if (m > 10) throw BudgetError("exhaustive generating-set search limited to |S| <= 10");
  std::optional<unsigned> best;
  for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (std::size_t{1} << i)) v.push_back(i);
    PairSet u = PairSet::from_subset(v);
    if (!congruence_closure(S, u, side).universal()) continue;
    auto d = diameter(S, u, side);
    if (d && (!best || *d < *best)) best = d;
  }
  return best;
}

}  // namespace chainmon
