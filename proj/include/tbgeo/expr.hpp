#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tbgeo/linalg.hpp"

namespace tbg {

// Order-2 forward-mode jet over m variables: value, gradient, symmetric Hessian.
struct Jet2 {
  double val = 0.0;
  Vec grad;
  Mat hess;

  Jet2() = default;
  Jet2(double v, Vec g, Mat h) : val(v), grad(std::move(g)), hess(std::move(h)) {}

  static Jet2 constant(int m, double c) { return {c, Vec::Zero(m), Mat::Zero(m, m)}; }
  static Jet2 variable(int m, int i, double x) {
    Jet2 j = constant(m, x);
    j.grad[i] = 1.0;
    return j;
  }
  int dim() const { return static_cast<int>(grad.size()); }
};

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.val + b.val, a.grad + b.grad, a.hess + b.hess};
}
inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.val - b.val, a.grad - b.grad, a.hess - b.hess};
}
inline Jet2 operator-(const Jet2& a) { return {-a.val, -a.grad, -a.hess}; }
inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.val * b.val, a.val * b.grad + b.val * a.grad,
          a.val * b.hess + b.val * a.hess + a.grad * b.grad.transpose() +
              b.grad * a.grad.transpose()};
}
inline Jet2 operator*(double c, const Jet2& a) { return {c * a.val, c * a.grad, c * a.hess}; }
inline Jet2 operator*(const Jet2& a, double c) { return c * a; }
inline Jet2 operator+(const Jet2& a, double c) { Jet2 r = a; r.val += c; return r; }
inline Jet2 operator+(double c, const Jet2& a) { return a + c; }
inline Jet2 operator-(const Jet2& a, double c) { return a + (-c); }

// Quotient rule, solving f = h*g for the jet of h = f/g.
inline Jet2 operator/(const Jet2& a, const Jet2& b) {
  double v = a.val / b.val;
  Vec g = (a.grad - v * b.grad) / b.val;
  Mat h = (a.hess - v * b.hess - g * b.grad.transpose() - b.grad * g.transpose()) / b.val;
  return {v, std::move(g), std::move(h)};
}

// Chain rule for a scalar function with value/first/second derivative at a.val.
inline Jet2 jet_unary(const Jet2& a, double f, double d1, double d2) {
  return {f, d1 * a.grad, d1 * a.hess + d2 * a.grad * a.grad.transpose()};
}

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, size_t offset)
      : std::runtime_error(std::move(msg)), offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

class EvalError : public std::runtime_error {
 public:
  EvalError(std::string msg, size_t offset, std::string fragment)
      : std::runtime_error(std::move(msg)), offset_(offset), fragment_(std::move(fragment)) {}
  size_t offset() const { return offset_; }
  const std::string& fragment() const { return fragment_; }

 private:
  size_t offset_;
  std::string fragment_;
};

// Immutable expression tree in coordinates x1..xm.
// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | factor
//   factor := atom ('^' factor)?            ('^' right-associative)
//   atom   := number | coordinate | func '(' expr ')' | '(' expr ')'
//   func   := sin | cos | exp | log | sqrt | tanh
class Expr {
 public:
  enum class Kind { Num, Coord, Add, Sub, Mul, Div, Pow, Neg, Call };
  enum class Func { Sin, Cos, Exp, Log, Sqrt, Tanh };

  struct Node {
    Kind kind;
    int a = -1, b = -1;      // child indices
    double num = 0.0;        // Kind::Num
    int coord = -1;          // Kind::Coord, 0-based
    Func func = Func::Sin;   // Kind::Call
    bool is_const = false;   // no coordinate below this node
    size_t offset = 0, len = 0;
  };

  int dim() const { return dim_; }
  const std::string& source() const { return source_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  int root() const { return root_; }
  bool is_constant() const { return nodes_[root_].is_const; }

  friend Expr parse(std::string_view src, int dim);

 private:
  std::vector<Node> nodes_;
  int root_ = -1;
  int dim_ = 0;
  std::string source_;
};

Expr parse(std::string_view src, int dim);
std::string to_string(const Expr& e);

double eval(const Expr& e, const Vec& x);
Jet2 eval_jet2(const Expr& e, const Vec& x);

// Structural equality of the trees (used by the round-trip property).
bool same_tree(const Expr& a, const Expr& b);

} // namespace tbg
