#include "phantom/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace phantom::expr {

namespace {

std::string join(const std::vector<std::string>& xs) {
  std::string s;
  for (const auto& x : xs) {
    if (!s.empty()) s += ", ";
    s += x;
  }
  return s;
}

const std::vector<std::string> kFunctions = {"exp", "log", "sqrt", "abs", "conj", "red", "inv"};
const std::vector<std::string> kBracketFunctions = {"alpha", "root"};

Ast leaf(NodeKind k, double number = 0.0) {
  auto n = std::make_unique<Node>();
  n->kind = k;
  n->number = number;
  return n;
}

Ast node(NodeKind k, Ast lhs, Ast rhs = nullptr) {
  auto n = std::make_unique<Node>();
  n->kind = k;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Ast run() {
    Ast e = expr();
    skip();
    if (pos_ != src_.size()) fail({"+", "-", "*", "/", "end of input"});
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  char peek() {
    skip();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    skip();
    const std::string found = pos_ < src_.size() ? std::string(1, src_[pos_]) : "end of input";
    throw SyntaxError(pos_, std::move(expected), found);
  }

  void expect(char c) {
    if (peek() != c) fail({std::string(1, c)});
    ++pos_;
  }

  Ast expr() {
    Ast lhs = term();
    for (char c = peek(); c == '+' || c == '-'; c = peek()) {
      ++pos_;
      lhs = node(c == '+' ? NodeKind::Add : NodeKind::Sub, std::move(lhs), term());
    }
    return lhs;
  }

  Ast term() {
    Ast lhs = unary();
    for (char c = peek(); c == '*' || c == '/'; c = peek()) {
      ++pos_;
      lhs = node(c == '*' ? NodeKind::Mul : NodeKind::Div, std::move(lhs), unary());
    }
    return lhs;
  }

  Ast unary() {
    if (peek() == '-') {
      ++pos_;
      return node(NodeKind::Neg, power());
    }
    return power();
  }

  Ast power() {
    Ast base = atom();
    if (peek() != '^') return base;
    ++pos_;
    Ast p = node(NodeKind::PowInt, std::move(base));
    p->exponent = integer();
    return p;
  }

  int integer() {
    const std::size_t start = (skip(), pos_);
    if (pos_ < src_.size() && src_[pos_] == '-') ++pos_;
    if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      pos_ = start;
      fail({"integer"});
    }
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    int v = 0;
    const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc{}) {
      pos_ = start;
      fail({"integer in range"});
    }
    return v;
  }

  bool at_number() {
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) return true;
    return c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]));
  }

  double number() {
    skip();
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
      if (q < src_.size() && std::isdigit(static_cast<unsigned char>(src_[q]))) {
        pos_ = q;
        digits();
      }
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc{}) {
      pos_ = start;
      fail({"number"});
    }
    return v;
  }

  Ast atom() {
    if (at_number()) return leaf(NodeKind::Literal, number());
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Ast e = expr();
      expect(')');
      return e;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail({"number", "p", "function", "("});
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::string name(src_.substr(start, pos_ - start));
    if (name == "p") return leaf(NodeKind::Unit);

    const bool plain = std::find(kFunctions.begin(), kFunctions.end(), name) != kFunctions.end();
    const bool bracket = std::find(kBracketFunctions.begin(), kBracketFunctions.end(), name) != kBracketFunctions.end();
    if (!plain && !bracket) {
      pos_ = start;
      std::vector<std::string> names{"p"};
      names.insert(names.end(), kFunctions.begin(), kFunctions.end());
      names.insert(names.end(), kBracketFunctions.begin(), kBracketFunctions.end());
      fail(names);
    }
    double param = 0.0;
    if (bracket) {
      expect('[');
      if (name == "root") {
        param = integer();
      } else {
        if (!at_number()) fail({"number"});
        param = number();
      }
      expect(']');
    }
    expect('(');
    Ast arg = expr();
    expect(')');
    Ast call = node(NodeKind::Call, std::move(arg));
    call->name = name;
    call->number = param;
    return call;
  }
};

std::string fmt(double x) {
  if (x == 0.0) x = 0.0;  // drops the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Phantom as_phantom(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return Phantom{*d};
  return std::get<Phantom>(v);
}

}  // namespace

SyntaxError::SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
    : Error(ErrorKind::SyntaxError,
            "at offset " + std::to_string(offset) + ": expected " + join(expected) + ", found " + found),
      offset_(offset),
      expected_(std::move(expected)) {}

Ast parse(std::string_view src) { return Parser(src).run(); }

std::string to_string(const Node& n) {
  switch (n.kind) {
    case NodeKind::Literal: return fmt(n.number);
    case NodeKind::Unit: return "p";
    case NodeKind::Neg: return "Neg(" + to_string(*n.lhs) + ")";
    case NodeKind::Add: return "Add(" + to_string(*n.lhs) + ", " + to_string(*n.rhs) + ")";
    case NodeKind::Sub: return "Sub(" + to_string(*n.lhs) + ", " + to_string(*n.rhs) + ")";
    case NodeKind::Mul: return "Mul(" + to_string(*n.lhs) + ", " + to_string(*n.rhs) + ")";
    case NodeKind::Div: return "Div(" + to_string(*n.lhs) + ", " + to_string(*n.rhs) + ")";
    case NodeKind::PowInt: return "PowInt(" + to_string(*n.lhs) + ", " + std::to_string(n.exponent) + ")";
    case NodeKind::Call: {
      std::string name = n.name;
      if (name == "alpha" || name == "root") name += "[" + fmt(n.number) + "]";
      return "Call(" + name + ", " + to_string(*n.lhs) + ")";
    }
  }
  return "?";
}

Value eval(const Node& n) {
  switch (n.kind) {
    case NodeKind::Literal: return n.number;
    case NodeKind::Unit: return kUnit;
    case NodeKind::Neg: {
      const Value v = eval(*n.lhs);
      if (const auto* d = std::get_if<double>(&v)) return -*d;
      return -std::get<Phantom>(v);
    }
    case NodeKind::Add: return as_phantom(eval(*n.lhs)) + as_phantom(eval(*n.rhs));
    case NodeKind::Sub: return as_phantom(eval(*n.lhs)) - as_phantom(eval(*n.rhs));
    case NodeKind::Mul: return as_phantom(eval(*n.lhs)) * as_phantom(eval(*n.rhs));
    case NodeKind::Div: return as_phantom(eval(*n.lhs)) / as_phantom(eval(*n.rhs));
    case NodeKind::PowInt: return pow_int(as_phantom(eval(*n.lhs)), n.exponent);
    case NodeKind::Call: {
      const Phantom z = as_phantom(eval(*n.lhs));
      if (n.name == "exp") return exp(z);
      if (n.name == "log") return log(z);
      if (n.name == "sqrt") return sqrt(z);
      if (n.name == "abs") return abs(z);
      if (n.name == "conj") return conjugate(z);
      if (n.name == "red") return z.reduction();
      if (n.name == "inv") return inverse(z);
      if (n.name == "alpha") return alpha_value(z, n.number);
      if (n.name == "root") return nth_root(z, static_cast<int>(n.number));
      throw Error(ErrorKind::SyntaxError, "unknown function " + n.name);
    }
  }
  throw Error(ErrorKind::SyntaxError, "malformed expression tree");
}

std::string render(double x) { return fmt(x); }

std::string render(const Phantom& z) {
  // Components below the 12-digit resolution of the larger one are rounding noise.
  const double scale = std::max(std::abs(z.re), std::abs(z.ph));
  const double re = std::abs(z.re) < 5e-13 * scale ? 0.0 : z.re;
  const double ph = std::abs(z.ph) < 5e-13 * scale ? 0.0 : z.ph;
  if (ph == 0.0) return fmt(re);
  return fmt(re) + (ph < 0.0 ? " - p*" : " + p*") + fmt(std::abs(ph));
}

std::string render(const Value& v) {
  return std::visit([](const auto& x) { return render(x); }, v);
}

}  // namespace phantom::expr
