#pragma once

// Expression language over phantom numbers.
//
//   expr  := term (('+' | '-') term)*
//   term  := unary (('*' | '/') unary)*
//   unary := '-'? power
//   power := atom ('^' INT)?
//   atom  := NUMBER | 'p' | IDENT '(' expr ')' | IDENT '[' NUMBER ']' '(' expr ')' | '(' expr ')'
//
// 'p' is the phantom unit (0, 1). Callable names: exp log sqrt abs conj red inv, plus
// alpha[a](z) for the alpha value and root[n](z) for the n-th root.

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "phantom/error.hpp"
#include "phantom/phantom.hpp"

namespace phantom::expr {

enum class NodeKind { Literal, Unit, Neg, Add, Sub, Mul, Div, PowInt, Call };

struct Node {
  NodeKind kind = NodeKind::Literal;
  double number = 0.0;  // Literal value or call parameter (alpha, root degree)
  int exponent = 0;     // PowInt
  std::string name;     // Call
  std::unique_ptr<Node> lhs;
  std::unique_ptr<Node> rhs;
};

using Ast = std::unique_ptr<Node>;

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& found);
  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

Ast parse(std::string_view src);

// Structural form, e.g. PowInt(Add(1, Mul(2, p)), 3).
std::string to_string(const Node& ast);

// red, abs and alpha yield reals; everything else yields a phantom number.
using Value = std::variant<Phantom, double>;

Value eval(const Node& ast);

// "a + p*b", "a - p*|b|", or "a" when b vanishes, with 12 significant digits.
std::string render(const Phantom& z);
std::string render(double x);
std::string render(const Value& v);

}  // namespace phantom::expr
