#include "chainmon/finite_monoid.hpp"

#include <algorithm>

namespace chainmon {

FiniteMonoid::FiniteMonoid(std::size_t size, std::size_t identity,
                           std::vector<std::uint16_t> table, std::vector<std::string> labels)
    : size_(size), identity_(identity), table_(std::move(table)), labels_(std::move(labels)) {
  if (size_ == 0) throw std::invalid_argument("monoid must be nonempty");
  if (size_ > 0xFFFF) throw std::invalid_argument("monoid too large for table encoding");
  if (table_.size() != size_ * size_) throw std::invalid_argument("table size mismatch");
  if (identity_ >= size_) throw std::invalid_argument("identity index out of range");
  if (!labels_.empty() && labels_.size() != size_)
    throw std::invalid_argument("label count mismatch");
  validate();
}

void FiniteMonoid::validate() const {
  const std::size_t m = size_;
  for (std::uint16_t v : table_)
    if (v >= m) throw std::invalid_argument("table entry out of range");
  for (std::size_t a = 0; a < m; ++a) {
    if (mul(identity_, a) != a || mul(a, identity_) != a)
      throw std::invalid_argument("identity laws fail");
  }
  const std::uint16_t* t = table_.data();
  for (std::size_t a = 0; a < m; ++a) {
    const std::uint16_t* row_a = t + a * m;
    for (std::size_t b = 0; b < m; ++b) {
      const std::uint16_t* row_ab = t + std::size_t(row_a[b]) * m;
      const std::uint16_t* row_b = t + b * m;
      for (std::size_t c = 0; c < m; ++c) {
        if (row_ab[c] != row_a[row_b[c]])
          throw std::invalid_argument("multiplication table is not associative");
      }
    }
  }
}

nlohmann::json FiniteMonoid::to_json() const {
  nlohmann::json j;
  j["size"] = size_;
  j["identity"] = identity_;
  j["table"] = table_;
  if (!labels_.empty()) j["labels"] = labels_;
  return j;
}

FiniteMonoid FiniteMonoid::from_json(const nlohmann::json& j) {
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  return FiniteMonoid(j.at("size").get<std::size_t>(), j.at("identity").get<std::size_t>(),
                      j.at("table").get<std::vector<std::uint16_t>>(), std::move(labels));
}

std::size_t EndMonoid::index_of(const std::vector<std::uint8_t>& values) const {
  auto it = std::lower_bound(maps.begin(), maps.end(), values);
  if (it == maps.end() || *it != values)
    throw std::invalid_argument("value list is not an order-preserving self-map");
  return static_cast<std::size_t>(it - maps.begin());
}

std::size_t EndMonoid::constant(std::size_t k) const {
  if (k < 1 || k > n) throw std::invalid_argument("constant map point out of range");
  return index_of(std::vector<std::uint8_t>(n, static_cast<std::uint8_t>(k)));
}

EndMonoid end_monoid(std::size_t n, std::size_t max_n) {
  if (n < 1) throw std::invalid_argument("end_monoid needs n >= 1");
  if (n > max_n) throw BudgetError("end_monoid budget exceeded (raise max_n explicitly)");

  // all nondecreasing value lists over {1..n}, in lexicographic order
  std::vector<std::vector<std::uint8_t>> maps;
  std::vector<std::uint8_t> cur(n, 1);
  while (true) {
    maps.push_back(cur);
    std::size_t i = n;
    while (i > 0 && cur[i - 1] == n) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < n; ++j) cur[j] = cur[i - 1];
  }

  const std::size_t m = maps.size();
  std::vector<std::uint16_t> table(m * m);
  std::vector<std::uint8_t> composed(n);
  auto index_of = [&](const std::vector<std::uint8_t>& v) {
    return static_cast<std::uint16_t>(
        std::lower_bound(maps.begin(), maps.end(), v) - maps.begin());
  };
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      for (std::size_t x = 0; x < n; ++x) composed[x] = maps[b][maps[a][x] - 1];  // a then b
      table[a * m + b] = index_of(composed);
    }
  }

  std::vector<std::uint8_t> id_map(n);
  for (std::size_t x = 0; x < n; ++x) id_map[x] = static_cast<std::uint8_t>(x + 1);
  std::size_t identity = index_of(id_map);

  std::vector<std::string> labels(m);
  for (std::size_t a = 0; a < m; ++a) {
    std::string& s = labels[a];
    for (std::size_t x = 0; x < n; ++x) {
      if (x) s += ',';
      s += std::to_string(maps[a][x]);
    }
  }

  EndMonoid out{n, FiniteMonoid(m, identity, std::move(table), std::move(labels)),
                std::move(maps)};
  return out;
}

}  // namespace chainmon
