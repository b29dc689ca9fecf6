#include "chainmon/element.hpp"

#include <cctype>

namespace chainmon {

namespace {

[[noreturn]] void shape_fail(const char* what) { throw ShapeError(std::string("element shape mismatch: ") + what); }

long long need_num(const ChainElement& x) {
  if (!x.is_num()) shape_fail("expected an integer carrier");
  return x.as_num();
}

}  // namespace

void validate_element(const ChainPtr& e, const ChainElement& x) {
  switch (e->kind) {
    case ChainKind::Finite: {
      long long n = need_num(x);
      if (n < 1 || static_cast<std::uint64_t>(n) > e->count)
        shape_fail("finite carrier out of range");
      return;
    }
    case ChainKind::Nat:
    case ChainKind::NatStar:
      if (need_num(x) < 1) shape_fail("carrier must be positive");
      return;
    case ChainKind::Int:
      need_num(x);
      return;
    case ChainKind::Rat:
      if (!x.is_rat()) shape_fail("expected a rational");
      return;
    case ChainKind::Real:
      shape_fail("chains containing R have no representable elements");
    case ChainKind::Sum: {
      if (!x.is_sum()) shape_fail("expected a side-tagged element");
      const auto& s = x.as_sum();
      validate_element(s.side == Side::L ? e->left : e->right, *s.sub);
      return;
    }
    case ChainKind::LexProd: {
      if (!x.is_pair()) shape_fail("expected a pair");
      const auto& p = x.as_pair();
      validate_element(e->left, *p.first);
      validate_element(e->right, *p.second);
      return;
    }
    case ChainKind::Rev:
      shape_fail("elements live on normalized terms only");
  }
}

Ordering compare(const ChainPtr& e, const ChainElement& x, const ChainElement& y) {
  auto of_int = [](long long a, long long b) {
    return a < b ? Ordering::LT : a == b ? Ordering::EQ : Ordering::GT;
  };
  switch (e->kind) {
    case ChainKind::Finite:
    case ChainKind::Nat:
    case ChainKind::Int:
      return of_int(need_num(x), need_num(y));
    case ChainKind::NatStar:
      return of_int(need_num(y), need_num(x));  // larger carrier is smaller
    case ChainKind::Rat: {
      if (!x.is_rat() || !y.is_rat()) shape_fail("expected rationals");
      const auto& a = x.as_rat();
      const auto& b = y.as_rat();
      return a < b ? Ordering::LT : a == b ? Ordering::EQ : Ordering::GT;
    }
    case ChainKind::Sum: {
      if (!x.is_sum() || !y.is_sum()) shape_fail("expected side-tagged elements");
      const auto& a = x.as_sum();
      const auto& b = y.as_sum();
      if (a.side != b.side) return a.side == Side::L ? Ordering::LT : Ordering::GT;
      return compare(a.side == Side::L ? e->left : e->right, *a.sub, *b.sub);
    }
    case ChainKind::LexProd: {
      if (!x.is_pair() || !y.is_pair()) shape_fail("expected pairs");
      const auto& a = x.as_pair();
      const auto& b = y.as_pair();
      Ordering first = compare(e->left, *a.first, *b.first);
      if (first != Ordering::EQ) return first;
      return compare(e->right, *a.second, *b.second);
    }
    default:
      shape_fail("comparison requires a normalized, R-free term");
  }
}

namespace {

ChainElement enumerate_impl(const ChainPtr& e, std::uint64_t i) {
  switch (e->kind) {
    case ChainKind::Finite:
      if (i >= e->count) throw std::out_of_range("enumeration index past finite chain");
      return ChainElement::num(static_cast<long long>(i + 1));
    case ChainKind::Nat:
    case ChainKind::NatStar:
      return ChainElement::num(static_cast<long long>(i + 1));
    case ChainKind::Int:
      if (i == 0) return ChainElement::num(0);
      if (i % 2 == 1) return ChainElement::num(static_cast<long long>((i + 1) / 2));
      return ChainElement::num(-static_cast<long long>(i / 2));
    case ChainKind::Rat:
      if (i == 0) return ChainElement::rat(Rational(0));
      if (i % 2 == 1) return ChainElement::rat(calkin_wilf((i - 1) / 2));
      return ChainElement::rat(-calkin_wilf((i - 2) / 2));
    case ChainKind::Sum: {
      auto a = finite_size(e->left), b = finite_size(e->right);
      if (a && *a == 0) return ChainElement::in_side(Side::R, enumerate_impl(e->right, i));
      if (b && *b == 0) return ChainElement::in_side(Side::L, enumerate_impl(e->left, i));
      if (!a && !b) {
        Side s = (i % 2 == 0) ? Side::L : Side::R;
        return ChainElement::in_side(s, enumerate_impl(s == Side::L ? e->left : e->right, i / 2));
      }
      std::uint64_t m = a && b ? std::min(*a, *b) : (a ? *a : *b);
      if (i < 2 * m) {
        Side s = (i % 2 == 0) ? Side::L : Side::R;
        return ChainElement::in_side(s, enumerate_impl(s == Side::L ? e->left : e->right, i / 2));
      }
      // one side exhausted after m interleaved steps each
      if (a && (!b || *a <= *b))
        return ChainElement::in_side(Side::R, enumerate_impl(e->right, i - *a));
      return ChainElement::in_side(Side::L, enumerate_impl(e->left, i - *b));
    }
    case ChainKind::LexProd: {
      auto a = finite_size(e->left), b = finite_size(e->right);
      if ((a && *a == 0) || (b && *b == 0)) throw std::domain_error("enumerating an empty chain");
      if (a && b && i >= *a * *b) throw std::out_of_range("enumeration index past finite chain");
      std::uint64_t d = 0, idx = i;
      while (true) {
        std::uint64_t lo = (b && d >= *b) ? d - (*b - 1) : 0;
        std::uint64_t hi = a ? std::min(d, *a - 1) : d;
        std::uint64_t cnt = hi >= lo ? hi - lo + 1 : 0;
        if (idx < cnt) {
          std::uint64_t fi = lo + idx;
          return ChainElement::pair(enumerate_impl(e->left, fi), enumerate_impl(e->right, d - fi));
        }
        idx -= cnt;
        ++d;
      }
    }
    default:
      throw std::domain_error("enumeration requires a countable, R-free term");
  }
}

}  // namespace

ChainElement enumerate(const ChainPtr& e, std::uint64_t index) {
  if (contains_real(e)) throw std::domain_error("enumerating an uncountable chain");
  auto sz = finite_size(e);
  if (sz && *sz == 0) throw std::domain_error("enumerating an empty chain");
  return enumerate_impl(e, index);
}

namespace {

std::optional<ChainElement> endpoint(const ChainPtr& e, bool want_min) {
  switch (e->kind) {
    case ChainKind::Finite:
      if (e->count == 0) return std::nullopt;
      return ChainElement::num(want_min ? 1 : static_cast<long long>(e->count));
    case ChainKind::Nat:
      return want_min ? std::optional<ChainElement>(ChainElement::num(1)) : std::nullopt;
    case ChainKind::NatStar:
      return want_min ? std::nullopt : std::optional<ChainElement>(ChainElement::num(1));
    case ChainKind::Int:
    case ChainKind::Rat:
      return std::nullopt;
    case ChainKind::Sum: {
      const ChainPtr& first = want_min ? e->left : e->right;
      const ChainPtr& second = want_min ? e->right : e->left;
      auto fs = finite_size(first);
      if (fs && *fs == 0) {
        auto sub = endpoint(second, want_min);
        if (!sub) return std::nullopt;
        return ChainElement::in_side(want_min ? Side::R : Side::L, std::move(*sub));
      }
      auto sub = endpoint(first, want_min);
      if (!sub) return std::nullopt;
      return ChainElement::in_side(want_min ? Side::L : Side::R, std::move(*sub));
    }
    case ChainKind::LexProd: {
      auto l = endpoint(e->left, want_min);
      auto r = endpoint(e->right, want_min);
      if (!l || !r) return std::nullopt;
      return ChainElement::pair(std::move(*l), std::move(*r));
    }
    default:
      throw std::domain_error("endpoint of an unnormalized or R-containing term");
  }
}

}  // namespace

std::optional<ChainElement> min_element(const ChainPtr& e) {
  if (contains_real(e)) throw std::domain_error("elements of chains containing R are not representable");
  return endpoint(e, true);
}

std::optional<ChainElement> max_element(const ChainPtr& e) {
  if (contains_real(e)) throw std::domain_error("elements of chains containing R are not representable");
  return endpoint(e, false);
}

std::string element_text(const ChainElement& x) {
  if (x.is_num()) return std::to_string(x.as_num());
  if (x.is_rat()) return rational_text(x.as_rat());
  if (x.is_sum()) {
    const auto& s = x.as_sum();
    return (s.side == Side::L ? "L:" : "R:") + element_text(*s.sub);
  }
  const auto& p = x.as_pair();
  return "(" + element_text(*p.first) + "," + element_text(*p.second) + ")";
}

namespace {

struct ElemParser {
  const std::string& s;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument("element parse error: " + msg + " at " + std::to_string(pos));
  }

  void expect(char c) {
    if (pos >= s.size() || s[pos] != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }

  std::string take_number() {
    std::size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail("expected a number");
    return s.substr(start, pos - start);
  }

  ChainElement parse(const ChainPtr& e) {
    switch (e->kind) {
      case ChainKind::Finite:
      case ChainKind::Nat:
      case ChainKind::NatStar:
      case ChainKind::Int:
        return ChainElement::num(std::stoll(take_number()));
      case ChainKind::Rat: {
        std::string num = take_number();
        if (pos < s.size() && s[pos] == '/') {
          ++pos;
          std::string den = take_number();
          return ChainElement::rat(make_rational(Integer(num), Integer(den)));
        }
        return ChainElement::rat(Rational(Integer(num)));
      }
      case ChainKind::Sum: {
        if (pos >= s.size()) fail("expected 'L:' or 'R:'");
        char c = s[pos];
        if (c != 'L' && c != 'R') fail("expected 'L:' or 'R:'");
        ++pos;
        expect(':');
        Side side = c == 'L' ? Side::L : Side::R;
        return ChainElement::in_side(side, parse(side == Side::L ? e->left : e->right));
      }
      case ChainKind::LexProd: {
        expect('(');
        ChainElement a = parse(e->left);
        expect(',');
        ChainElement b = parse(e->right);
        expect(')');
        return ChainElement::pair(std::move(a), std::move(b));
      }
      default:
        fail("unsupported chain shape");
    }
  }
};

}  // namespace

ChainElement parse_element(const ChainPtr& e, const std::string& text) {
  ElemParser p{text};
  ChainElement x = p.parse(e);
  if (p.pos != text.size()) p.fail("trailing input");
  validate_element(e, x);
  return x;
}

ChainElement reverse_element(const ChainPtr& e, const ChainElement& x) {
  switch (e->kind) {
    case ChainKind::Finite:
      return ChainElement::num(static_cast<long long>(e->count) + 1 - need_num(x));
    case ChainKind::Nat:
    case ChainKind::NatStar:
      return ChainElement::num(need_num(x));
    case ChainKind::Int:
      return ChainElement::num(-need_num(x));
    case ChainKind::Rat:
      return ChainElement::rat(-x.as_rat());
    case ChainKind::Sum: {
      // the reversed chain re-associates to the right, so work on the spine:
      // leaf j of n maps to leaf n-1-j
      std::vector<ChainPtr> spine = sum_spine(e);
      const std::size_t n = spine.size();
      std::size_t j = 0;
      const ChainElement* cur = &x;
      while (j + 1 < n) {
        const auto& s = cur->as_sum();
        if (s.side == Side::L) break;
        cur = s.sub.get();
        ++j;
      }
      if (j + 1 < n) cur = cur->as_sum().sub.get();
      ChainElement flipped = reverse_element(spine[j], *cur);
      std::size_t jf = n - 1 - j;
      ChainElement out = jf + 1 < n ? ChainElement::in_side(Side::L, std::move(flipped))
                                    : std::move(flipped);
      for (std::size_t step = 0; step < jf; ++step)
        out = ChainElement::in_side(Side::R, std::move(out));
      return out;
    }
    case ChainKind::LexProd: {
      const auto& p = x.as_pair();
      return ChainElement::pair(reverse_element(e->left, *p.first),
                                reverse_element(e->right, *p.second));
    }
    default:
      shape_fail("reversal requires a normalized, R-free term");
  }
}

}  // namespace chainmon
