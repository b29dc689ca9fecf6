#include "chainmon/chain.hpp"

#include <cctype>

namespace chainmon {

namespace { ChainPtr make_node(ChainExpr&& e) { return std::make_shared<const ChainExpr>(std::move(e)); } }

ChainPtr ChainExpr::finite(std::uint64_t k) {
  ChainExpr e(ChainKind::Finite);
  e.count = k;
  return make_node(std::move(e));
}

namespace {
ChainPtr make_leaf(ChainKind k) { return make_node(ChainExpr(k)); }
}  // namespace

// ChainExpr's constructor is private; expose leaves through statics.
ChainPtr ChainExpr::nat() {
  static ChainPtr n = make_leaf(ChainKind::Nat);
  return n;
}
ChainPtr ChainExpr::nat_star() {
  static ChainPtr n = make_leaf(ChainKind::NatStar);
  return n;
}
ChainPtr ChainExpr::integers() {
  static ChainPtr n = make_leaf(ChainKind::Int);
  return n;
}
ChainPtr ChainExpr::rationals() {
  static ChainPtr n = make_leaf(ChainKind::Rat);
  return n;
}
ChainPtr ChainExpr::reals() {
  static ChainPtr n = make_leaf(ChainKind::Real);
  return n;
}
ChainPtr ChainExpr::sum(ChainPtr a, ChainPtr b) {
  ChainExpr e(ChainKind::Sum);
  e.left = std::move(a);
  e.right = std::move(b);
  return make_node(std::move(e));
}
ChainPtr ChainExpr::lex(ChainPtr a, ChainPtr b) {
  ChainExpr e(ChainKind::LexProd);
  e.left = std::move(a);
  e.right = std::move(b);
  return make_node(std::move(e));
}
ChainPtr ChainExpr::rev(ChainPtr a) {
  ChainExpr e(ChainKind::Rev);
  e.inner = std::move(a);
  return make_node(std::move(e));
}

bool equal(const ChainPtr& a, const ChainPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ChainKind::Finite:
      return a->count == b->count;
    case ChainKind::Sum:
    case ChainKind::LexProd:
      return equal(a->left, b->left) && equal(a->right, b->right);
    case ChainKind::Rev:
      return equal(a->inner, b->inner);
    default:
      return true;
  }
}

bool contains_real(const ChainPtr& e) {
  switch (e->kind) {
    case ChainKind::Real:
      return true;
    case ChainKind::Sum:
    case ChainKind::LexProd:
      return contains_real(e->left) || contains_real(e->right);
    case ChainKind::Rev:
      return contains_real(e->inner);
    default:
      return false;
  }
}

namespace {

// rev distributes anti-homomorphically over sums, homomorphically over
// lexicographic products, swaps N and N*, and fixes the other primitives.
ChainPtr push_rev(const ChainPtr& e) {
  switch (e->kind) {
    case ChainKind::Nat:
      return ChainExpr::nat_star();
    case ChainKind::NatStar:
      return ChainExpr::nat();
    case ChainKind::Sum:
      return ChainExpr::sum(push_rev(e->right), push_rev(e->left));
    case ChainKind::LexProd:
      return ChainExpr::lex(push_rev(e->left), push_rev(e->right));
    case ChainKind::Rev:
      return e->inner;
    default:
      return e;
  }
}

ChainPtr normalize_impl(const ChainPtr& e) {
  switch (e->kind) {
    case ChainKind::Rev:
      return normalize_impl(push_rev(e->inner));
    case ChainKind::LexProd: {
      ChainPtr l = normalize_impl(e->left);
      ChainPtr r = normalize_impl(e->right);
      if ((l->kind == ChainKind::Finite && l->count == 0) ||
          (r->kind == ChainKind::Finite && r->count == 0))
        return ChainExpr::finite(0);
      return ChainExpr::lex(l, r);
    }
    case ChainKind::Sum: {
      // normalize children, then flatten; normalized children may be sums
      std::vector<ChainPtr> flat;
      struct Flattener {
        std::vector<ChainPtr>& out;
        void walk(const ChainPtr& n) {
          if (n->kind == ChainKind::Sum) {
            walk(n->left);
            walk(n->right);
          } else {
            out.push_back(n);
          }
        }
      } flattener{flat};
      flattener.walk(normalize_impl(e->left));
      flattener.walk(normalize_impl(e->right));

      std::vector<ChainPtr> merged;
      for (const auto& l : flat) {
        if (l->kind == ChainKind::Finite && l->count == 0) continue;
        if (!merged.empty() && merged.back()->kind == ChainKind::Finite &&
            l->kind == ChainKind::Finite) {
          merged.back() = ChainExpr::finite(merged.back()->count + l->count);
        } else {
          merged.push_back(l);
        }
      }
      if (merged.empty()) return ChainExpr::finite(0);
      return sum_of(merged);
    }
    default:
      return e;
  }
}

}  // namespace

ChainPtr normalize(const ChainPtr& e) { return normalize_impl(e); }

std::vector<ChainPtr> sum_spine(const ChainPtr& e) {
  std::vector<ChainPtr> out;
  ChainPtr cur = e;
  while (cur->kind == ChainKind::Sum) {
    out.push_back(cur->left);
    cur = cur->right;
  }
  out.push_back(cur);
  return out;
}

ChainPtr sum_of(const std::vector<ChainPtr>& leaves) {
  if (leaves.empty()) return ChainExpr::finite(0);
  ChainPtr acc = leaves.back();
  for (std::size_t i = leaves.size() - 1; i-- > 0;) acc = ChainExpr::sum(leaves[i], acc);
  return acc;
}

std::optional<std::uint64_t> finite_size(const ChainPtr& e) {
  constexpr std::uint64_t kCap = std::uint64_t{1} << 62;
  switch (e->kind) {
    case ChainKind::Finite:
      return e->count;
    case ChainKind::Sum: {
      auto a = finite_size(e->left), b = finite_size(e->right);
      if (!a || !b) return std::nullopt;
      return std::min(kCap, *a + *b);
    }
    case ChainKind::LexProd: {
      auto a = finite_size(e->left), b = finite_size(e->right);
      if (a && *a == 0) return 0;
      if (b && *b == 0) return 0;
      if (!a || !b) return std::nullopt;
      if (*a != 0 && *b > kCap / *a) return kCap;
      return *a * *b;
    }
    case ChainKind::Rev:
      return finite_size(e->inner);
    default:
      return std::nullopt;
  }
}

namespace {

Tri tri_and_gap_sum(const Attributes& a, const Attributes& b) {
  // gap in either part, or a junction where the left part has no last
  // element and the right part has no first one
  bool junction = !a.is_empty && !a.has_max && !b.is_empty && !b.has_min;
  if (a.has_gap == Tri::Yes || b.has_gap == Tri::Yes || junction) return Tri::Yes;
  if (a.has_gap == Tri::Unknown || b.has_gap == Tri::Unknown) return Tri::Unknown;
  return Tri::No;
}

Attributes attributes_norm(const ChainPtr& e) {
  Attributes r;
  switch (e->kind) {
    case ChainKind::Finite:
      r.is_empty = e->count == 0;
      r.cardinality = Card::Finite;
      r.finite_count = e->count;
      r.has_min = r.has_max = !r.is_empty;
      r.well_ordered = true;
      r.scattered = true;
      r.has_gap = Tri::No;
      return r;
    case ChainKind::Nat:
      r = {false, Card::CountablyInfinite, 0, true, false, true, true, Tri::No};
      return r;
    case ChainKind::NatStar:
      r = {false, Card::CountablyInfinite, 0, false, true, false, true, Tri::No};
      return r;
    case ChainKind::Int:
      r = {false, Card::CountablyInfinite, 0, false, false, false, true, Tri::No};
      return r;
    case ChainKind::Rat:
      r = {false, Card::CountablyInfinite, 0, false, false, false, false, Tri::Yes};
      return r;
    case ChainKind::Real:
      r = {false, Card::Uncountable, 0, false, false, false, false, Tri::No};
      return r;
    case ChainKind::Sum: {
      Attributes a = attributes_norm(e->left), b = attributes_norm(e->right);
      r.is_empty = a.is_empty && b.is_empty;
      if (a.cardinality == Card::Uncountable || b.cardinality == Card::Uncountable)
        r.cardinality = Card::Uncountable;
      else if (a.cardinality == Card::CountablyInfinite || b.cardinality == Card::CountablyInfinite)
        r.cardinality = Card::CountablyInfinite;
      else {
        r.cardinality = Card::Finite;
        r.finite_count = a.finite_count + b.finite_count;
      }
      r.has_min = a.has_min || (a.is_empty && b.has_min);
      r.has_max = b.has_max || (b.is_empty && a.has_max);
      r.well_ordered = a.well_ordered && b.well_ordered;
      r.scattered = a.scattered && b.scattered;
      r.has_gap = tri_and_gap_sum(a, b);
      return r;
    }
    case ChainKind::LexProd: {
      Attributes a = attributes_norm(e->left), b = attributes_norm(e->right);
      r.is_empty = a.is_empty || b.is_empty;
      if (r.is_empty) {
        r = Attributes{};
        return r;
      }
      if (a.cardinality == Card::Uncountable || b.cardinality == Card::Uncountable)
        r.cardinality = Card::Uncountable;
      else if (a.cardinality == Card::CountablyInfinite || b.cardinality == Card::CountablyInfinite)
        r.cardinality = Card::CountablyInfinite;
      else {
        r.cardinality = Card::Finite;
        r.finite_count = a.finite_count * b.finite_count;
      }
      r.has_min = a.has_min && b.has_min;
      r.has_max = a.has_max && b.has_max;
      r.well_ordered = a.well_ordered && b.well_ordered;
      r.scattered = a.scattered && b.scattered;
      bool trivial_left = a.cardinality == Card::Finite && a.finite_count == 1;
      bool trivial_right = b.cardinality == Card::Finite && b.finite_count == 1;
      if (trivial_left)
        r.has_gap = b.has_gap;
      else if (trivial_right)
        r.has_gap = a.has_gap;
      else
        r.has_gap = Tri::Unknown;
      return r;
    }
    default:
      throw std::logic_error("attributes: unnormalized node");
  }
}

}  // namespace

Attributes attributes(const ChainPtr& e) { return attributes_norm(normalize(e)); }

namespace {

struct Parser {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos); }

  ChainPtr parse_expr() {
    std::vector<ChainPtr> terms{parse_prod()};
    while (eat('+')) terms.push_back(parse_prod());
    ChainPtr acc = terms.back();
    for (std::size_t i = terms.size() - 1; i-- > 0;) acc = ChainExpr::sum(terms[i], acc);
    return acc;
  }

  ChainPtr parse_prod() {
    std::vector<ChainPtr> factors{parse_atom()};
    while (true) {
      skip_ws();
      if (pos < s.size() && s[pos] == 'x') {
        ++pos;
        factors.push_back(parse_atom());
      } else {
        break;
      }
    }
    ChainPtr acc = factors.back();
    for (std::size_t i = factors.size() - 1; i-- > 0;) acc = ChainExpr::lex(factors[i], acc);
    return acc;
  }

  ChainPtr parse_atom() {
    skip_ws();
    if (pos >= s.size()) fail("expected a chain term");
    char c = s[pos];
    if (c == '(') {
      ++pos;
      ChainPtr e = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::uint64_t k = 0;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        k = k * 10 + static_cast<std::uint64_t>(s[pos] - '0');
        if (k > (std::uint64_t{1} << 32)) fail("finite chain too large");
        ++pos;
      }
      return ChainExpr::finite(k);
    }
    if (s.compare(pos, 4, "rev(") == 0) {
      pos += 4;
      ChainPtr e = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return ChainExpr::rev(e);
    }
    switch (c) {
      case 'N':
        ++pos;
        if (pos < s.size() && s[pos] == '*') {
          ++pos;
          return ChainExpr::nat_star();
        }
        return ChainExpr::nat();
      case 'Z':
        ++pos;
        return ChainExpr::integers();
      case 'Q':
        ++pos;
        return ChainExpr::rationals();
      case 'R':
        ++pos;
        return ChainExpr::reals();
      default:
        fail(std::string("unexpected character '") + c + "'");
    }
  }
};

enum class Prec { Sum, Prod, Atom };

void print_to(const ChainPtr& e, std::string& out, Prec ctx) {
  switch (e->kind) {
    case ChainKind::Finite:
      out += std::to_string(e->count);
      return;
    case ChainKind::Nat:
      out += "N";
      return;
    case ChainKind::NatStar:
      out += "N*";
      return;
    case ChainKind::Int:
      out += "Z";
      return;
    case ChainKind::Rat:
      out += "Q";
      return;
    case ChainKind::Real:
      out += "R";
      return;
    case ChainKind::Rev:
      out += "rev(";
      print_to(e->inner, out, Prec::Sum);
      out += ")";
      return;
    case ChainKind::Sum: {
      bool parens = ctx != Prec::Sum;
      if (parens) out += "(";
      print_to(e->left, out, Prec::Prod);  // a left Sum child re-parenthesizes
      out += " + ";
      print_to(e->right, out, Prec::Sum);
      if (parens) out += ")";
      return;
    }
    case ChainKind::LexProd: {
      bool parens = ctx == Prec::Atom;
      if (parens) out += "(";
      print_to(e->left, out, Prec::Atom);
      out += " x ";
      print_to(e->right, out, Prec::Prod);
      if (parens) out += ")";
      return;
    }
  }
}

}  // namespace

ChainPtr parse_chain(const std::string& text) {
  Parser p{text};
  ChainPtr e = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return e;
}

std::string print_chain(const ChainPtr& e) {
  std::string out;
  print_to(e, out, Prec::Sum);
  return out;
}

}  // namespace chainmon
